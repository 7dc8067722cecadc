//! Physical stream representations with snapshot/reconstruct pairs, and
//! the mechanical derivation of their monadic operators.
//!
//! A representation is complete once it says how to take a snapshot at an
//! instant and how to rebuild a table from a stream function. Reconstruct
//! must be a right inverse of snapshot (checked, not assumed); it need not
//! be a left inverse — several tables may denote the same stream, which is
//! why equality is on normal forms.

use std::marker::PhantomData;

use crate::base::{Bag, BagBase, Base, Value};
use crate::error::Error;
use crate::stream::Stream;
use crate::time::{FiniteDomain, TimeInterval, TimePoint};

// ---------------------------------------------------------------------------
// Event tables
// ---------------------------------------------------------------------------

/// One table row: a payload occurring with a multiplicity at one instant.
#[derive(Clone, PartialEq, Debug)]
pub struct EventRow<X: Value> {
    pub payload: X,
    pub multiplicity: u64,
    pub at: TimePoint,
}

/// A stream as a set of (payload, multiplicity, instant) rows.
///
/// Normal form keeps at most one row per (payload, instant), sorted by
/// instant with payload insertion order within an instant. Equality is
/// row-set equality, insensitive to row order.
#[derive(Clone, Debug)]
pub struct EventTable<X: Value> {
    rows: Vec<EventRow<X>>,
}

impl<X: Value> EventTable<X> {
    pub fn new() -> Self {
        EventTable { rows: Vec::new() }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = (X, u64, impl Into<TimePoint>)>) -> Self {
        let mut out: Vec<EventRow<X>> = Vec::new();
        for (payload, multiplicity, at) in rows {
            if multiplicity == 0 {
                continue;
            }
            let at = at.into();
            match out
                .iter_mut()
                .find(|r| r.at == at && r.payload == payload)
            {
                Some(row) => row.multiplicity += multiplicity,
                None => out.push(EventRow { payload, multiplicity, at }),
            }
        }
        out.sort_by_key(|r| r.at);
        EventTable { rows: out }
    }

    pub fn rows(&self) -> &[EventRow<X>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl<X: Value> Default for EventTable<X> {
    fn default() -> Self {
        EventTable::new()
    }
}

impl<X: Value> PartialEq for EventTable<X> {
    fn eq(&self, other: &Self) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().all(|r| {
                other
                    .rows
                    .iter()
                    .any(|o| o.at == r.at && o.payload == r.payload && o.multiplicity == r.multiplicity)
            })
    }
}

/// The bag of rows stamped with exactly `t`.
pub fn snapshot_events<X: Value>(table: &EventTable<X>, t: TimePoint) -> Bag<X> {
    let mut bag = Bag::new();
    for row in table.rows() {
        if row.at == t {
            bag.insert(row.payload.clone(), row.multiplicity);
        }
    }
    bag
}

/// Enumerate the domain and record every non-empty bag as rows.
pub fn reconstruct_events<X: Value>(
    f: impl Fn(TimePoint) -> Bag<X>,
    dom: &FiniteDomain,
) -> EventTable<X> {
    let mut rows = Vec::new();
    for t in dom.iter() {
        for (x, n) in f(t).iter() {
            rows.push((x.clone(), *n, t));
        }
    }
    EventTable::from_rows(rows)
}

// ---------------------------------------------------------------------------
// Interval tables
// ---------------------------------------------------------------------------

/// A stream as a bag of (payload, validity interval) pairs.
///
/// The snapshot at `t` holds one occurrence per pair whose interval covers
/// `t`. Construction normalizes: per payload, the per-tick multiplicity
/// profile is decomposed into layers (layer k covers the ticks with
/// multiplicity >= k) and each maximal run of a layer becomes one pair.
/// That form is canonical and snapshot-preserving, so normal-form equality
/// coincides with having equal snapshots everywhere.
#[derive(Clone, Debug)]
pub struct IntervalTable<X: Value> {
    rows: Vec<(X, TimeInterval)>,
}

impl<X: Value> IntervalTable<X> {
    pub fn new() -> Self {
        IntervalTable { rows: Vec::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (X, TimeInterval)>) -> Self {
        let raw: Vec<(X, TimeInterval)> = pairs
            .into_iter()
            .filter(|(_, iv)| !iv.is_empty())
            .collect();

        // group pairs per payload, first-occurrence order
        let mut payloads: Vec<X> = Vec::new();
        for (x, _) in &raw {
            if !payloads.iter().any(|p| p == x) {
                payloads.push(x.clone());
            }
        }

        let mut rows = Vec::new();
        for payload in payloads {
            let intervals: Vec<TimeInterval> = raw
                .iter()
                .filter(|(x, _)| *x == payload)
                .map(|(_, iv)| *iv)
                .collect();
            let lo = intervals.iter().filter_map(|iv| iv.bounds()).map(|(l, _)| l.0).min().unwrap();
            let hi = intervals.iter().filter_map(|iv| iv.bounds()).map(|(_, h)| h.0).max().unwrap();
            let profile: Vec<u64> = (lo..=hi)
                .map(|tick| {
                    intervals
                        .iter()
                        .filter(|iv| iv.contains(TimePoint(tick)))
                        .count() as u64
                })
                .collect();
            rows.extend(layer_runs(&profile, lo).into_iter().map(|iv| (payload.clone(), iv)));
        }
        IntervalTable { rows }
    }

    pub fn pairs(&self) -> &[(X, TimeInterval)] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Decompose a multiplicity profile starting at tick `lo` into maximal
/// runs per layer, layer 1 first, runs ascending.
fn layer_runs(profile: &[u64], lo: i64) -> Vec<TimeInterval> {
    let max = profile.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for layer in 1..=max {
        let mut run_start: Option<i64> = None;
        for (i, &m) in profile.iter().enumerate() {
            let tick = lo + i as i64;
            if m >= layer {
                run_start.get_or_insert(tick);
            } else if let Some(start) = run_start.take() {
                out.push(TimeInterval::closed(start, tick - 1));
            }
        }
        if let Some(start) = run_start {
            out.push(TimeInterval::closed(start, lo + profile.len() as i64 - 1));
        }
    }
    out
}

impl<X: Value> Default for IntervalTable<X> {
    fn default() -> Self {
        IntervalTable::new()
    }
}

impl<X: Value> PartialEq for IntervalTable<X> {
    fn eq(&self, other: &Self) -> bool {
        // normal forms are bags of pairs; compare as multisets
        let count = |rows: &[(X, TimeInterval)], probe: &(X, TimeInterval)| {
            rows.iter().filter(|r| *r == probe).count()
        };
        self.rows.len() == other.rows.len()
            && self.rows.iter().all(|r| count(&self.rows, r) == count(&other.rows, r))
    }
}

/// One occurrence per covering pair.
pub fn snapshot_intervals<X: Value>(table: &IntervalTable<X>, t: TimePoint) -> Bag<X> {
    let mut bag = Bag::new();
    for (x, iv) in table.pairs() {
        if iv.contains(t) {
            bag.insert(x.clone(), 1);
        }
    }
    bag
}

/// One maximal interval per contiguous run of presence per payload (per
/// multiplicity layer).
pub fn reconstruct_intervals<X: Value>(
    f: impl Fn(TimePoint) -> Bag<X>,
    dom: &FiniteDomain,
) -> IntervalTable<X> {
    let mut pairs = Vec::new();
    for t in dom.iter() {
        for (x, n) in f(t).iter() {
            for _ in 0..*n {
                pairs.push((x.clone(), TimeInterval::closed(t, t)));
            }
        }
    }
    IntervalTable::from_pairs(pairs)
}

// ---------------------------------------------------------------------------
// Derived monadic operators
// ---------------------------------------------------------------------------

/// A physical representation abstracted over the payload type: a snapshot
/// function plus a reconstruction over a finite domain.
pub trait SnapshotRepr: 'static {
    type Repr<X: Value>: Value;

    fn snapshot<X: Value>(r: &Self::Repr<X>, t: TimePoint) -> Bag<X>;

    fn reconstruct<X: Value>(f: &(dyn Fn(TimePoint) -> Bag<X> + '_), dom: &FiniteDomain)
        -> Self::Repr<X>;
}

pub struct EventModel;

impl SnapshotRepr for EventModel {
    type Repr<X: Value> = EventTable<X>;

    fn snapshot<X: Value>(r: &EventTable<X>, t: TimePoint) -> Bag<X> {
        snapshot_events(r, t)
    }

    fn reconstruct<X: Value>(f: &(dyn Fn(TimePoint) -> Bag<X> + '_), dom: &FiniteDomain) -> EventTable<X> {
        reconstruct_events(f, dom)
    }
}

pub struct IntervalModel;

impl SnapshotRepr for IntervalModel {
    type Repr<X: Value> = IntervalTable<X>;

    fn snapshot<X: Value>(r: &IntervalTable<X>, t: TimePoint) -> Bag<X> {
        snapshot_intervals(r, t)
    }

    fn reconstruct<X: Value>(f: &(dyn Fn(TimePoint) -> Bag<X> + '_), dom: &FiniteDomain) -> IntervalTable<X> {
        reconstruct_intervals(f, dom)
    }
}

/// The monadic operators a snapshot/reconstruct pair induces: function
/// application replaced by snapshot, table creation by reconstruct. Each
/// operator is snapshot-equivalent to the reference stream operator.
pub struct DerivedOps<M: SnapshotRepr> {
    dom: FiniteDomain,
    _model: PhantomData<M>,
}

impl<M: SnapshotRepr> DerivedOps<M> {
    pub fn domain(&self) -> &FiniteDomain {
        &self.dom
    }

    pub fn map<X: Value, Y: Value>(&self, f: impl Fn(&X) -> Y, r: &M::Repr<X>) -> M::Repr<Y> {
        M::reconstruct(&|t| BagBase::map(&f, &M::snapshot(r, t)), &self.dom)
    }

    pub fn unit<X: Value>(&self, x: X) -> M::Repr<X> {
        M::reconstruct(&|_| BagBase::unit(x.clone()), &self.dom)
    }

    pub fn flatten<X: Value>(&self, rr: &M::Repr<M::Repr<X>>) -> M::Repr<X> {
        M::reconstruct(
            &|t| {
                BagBase::flatten(&BagBase::map(
                    |inner: &M::Repr<X>| M::snapshot(inner, t),
                    &M::snapshot(rr, t),
                ))
            },
            &self.dom,
        )
    }
}

/// Derive map/unit/flatten for a representation after verifying on probe
/// functions that reconstruct is a right inverse of snapshot over `dom`.
/// A failed round trip means the representation is broken and no operators
/// are produced.
pub fn derive_monadic<M: SnapshotRepr>(dom: &FiniteDomain) -> Result<DerivedOps<M>, Error> {
    for f in right_inverse_probes(dom) {
        let table = M::reconstruct(&*f, dom);
        for t in dom.iter() {
            if M::snapshot(&table, t) != f(t) {
                return Err(Error::BrokenRepresentation { at: t });
            }
        }
    }
    Ok(DerivedOps { dom: *dom, _model: PhantomData })
}

/// Probe battery for the right-inverse precondition: empty, constant,
/// and a few deterministic patterns with repeated payloads and gaps.
pub fn right_inverse_probes(
    dom: &FiniteDomain,
) -> Vec<Box<dyn Fn(TimePoint) -> Bag<i32> + Send + Sync>> {
    let first = dom.first().tick();
    vec![
        Box::new(|_| Bag::new()),
        Box::new(|_| Bag::from_elems([1])),
        Box::new(move |t| {
            let offset = t.tick() - first;
            if offset % 2 == 0 {
                Bag::from_counts([((offset % 3) as i32, 1 + (offset % 2) as u64)])
            } else {
                Bag::new()
            }
        }),
        Box::new(move |t| {
            let offset = t.tick() - first;
            let mut bag = Bag::new();
            for k in 0..offset % 4 {
                bag.insert(k as i32, (1 + k % 2) as u64);
            }
            bag
        }),
    ]
}

/// Reference-model view of a table, for dual-path comparisons.
pub fn as_stream<M: SnapshotRepr, X: Value>(r: &M::Repr<X>) -> Stream<BagBase, X> {
    let r = r.clone();
    Stream::from_fn(move |t| M::snapshot(&r, t))
}
