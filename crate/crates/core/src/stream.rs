//! Streams as evaluable mappings from time to base containers, plus the
//! snapshot-reducible operators.
//!
//! A [`Stream`] is a total function from the time domain to a container.
//! Two streams are compared extensionally over a finite domain with
//! [`Stream::eq_on`]; the `PartialEq` impl is identity equality (needed so
//! streams can sit in payload position of other containers).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::base::{cross_product, filter_elems, Base, MonoidBase, Sum, Value};
use crate::time::{TimeDomain, TimePoint};

/// A value of the snapshot monad: a total function from time to an
/// arbitrary codomain. A stream is exactly a snapshot function whose
/// codomain is a container.
pub struct SnapshotFn<V: Value, T: TimeDomain = TimePoint> {
    f: Arc<dyn Fn(T) -> V + Send + Sync>,
}

impl<V: Value, T: TimeDomain> SnapshotFn<V, T> {
    pub fn new(f: impl Fn(T) -> V + Send + Sync + 'static) -> Self {
        SnapshotFn { f: Arc::new(f) }
    }

    /// The constant snapshot function.
    pub fn constant(v: V) -> Self {
        SnapshotFn::new(move |_| v.clone())
    }

    pub fn eval(&self, t: T) -> V {
        (self.f)(t)
    }

    pub fn map<W: Value>(&self, g: impl Fn(&V) -> W + Send + Sync + 'static) -> SnapshotFn<W, T> {
        let inner = self.clone();
        SnapshotFn::new(move |t| g(&inner.eval(t)))
    }

    /// Collapse two time layers by applying the same instant to both.
    pub fn diagonal(ss: &SnapshotFn<SnapshotFn<V, T>, T>) -> SnapshotFn<V, T> {
        let outer = ss.clone();
        SnapshotFn::new(move |t| outer.eval(t).eval(t))
    }
}

impl<V: Value, T: TimeDomain> Clone for SnapshotFn<V, T> {
    fn clone(&self) -> Self {
        SnapshotFn { f: Arc::clone(&self.f) }
    }
}

/// Identity comparison; snapshot functions in payload position only ever
/// need to recognize clones of themselves.
impl<V: Value, T: TimeDomain> PartialEq for SnapshotFn<V, T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.f, &other.f)
    }
}

impl<V: Value, T: TimeDomain> fmt::Debug for SnapshotFn<V, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SnapshotFn@{:p}", Arc::as_ptr(&self.f))
    }
}

struct Inner<B: Base, X: Value, T: TimeDomain> {
    eval: Box<dyn Fn(T) -> B::C<X> + Send + Sync>,
    memo: Mutex<HashMap<T, B::C<X>>>,
}

/// An evaluable stream: time instant in, container out.
///
/// Composed streams memoize per-instant results, so repeated extensional
/// checks over the same domain do not re-run upstream evaluation.
pub struct Stream<B: Base, X: Value, T: TimeDomain = TimePoint> {
    inner: Arc<Inner<B, X, T>>,
}

impl<B: Base, X: Value, T: TimeDomain> Clone for Stream<B, X, T> {
    fn clone(&self) -> Self {
        Stream { inner: Arc::clone(&self.inner) }
    }
}

/// Identity comparison, like [`SnapshotFn`]; use [`Stream::eq_on`] for
/// extensional equality over a domain.
impl<B: Base, X: Value, T: TimeDomain> PartialEq for Stream<B, X, T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

impl<B: Base, X: Value, T: TimeDomain> fmt::Debug for Stream<B, X, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Stream@{:p}", Arc::as_ptr(&self.inner))
    }
}

impl<B: Base, X: Value, T: TimeDomain> Stream<B, X, T> {
    /// A stream backed by a total generator.
    pub fn from_fn(f: impl Fn(T) -> B::C<X> + Send + Sync + 'static) -> Self {
        Stream {
            inner: Arc::new(Inner {
                eval: Box::new(f),
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// The constant stream of one container.
    pub fn constant(c: B::C<X>) -> Self {
        Stream::from_fn(move |_| c.clone())
    }

    pub fn eval(&self, t: T) -> B::C<X> {
        if let Some(hit) = self.inner.memo.lock().unwrap().get(&t) {
            return hit.clone();
        }
        let v = (self.inner.eval)(t);
        self.inner
            .memo
            .lock()
            .unwrap()
            .entry(t)
            .or_insert_with(|| v.clone());
        v
    }

    /// Extensional equality over the given evaluation points.
    pub fn eq_on(&self, other: &Self, points: impl IntoIterator<Item = T>) -> bool {
        points.into_iter().all(|t| self.eval(t) == other.eval(t))
    }

    /// The stream's snapshot view; for this model it is function
    /// application itself.
    pub fn snapshot_fn(&self) -> SnapshotFn<B::C<X>, T> {
        let s = self.clone();
        SnapshotFn::new(move |t| s.eval(t))
    }

    pub fn from_snapshot_fn(sf: SnapshotFn<B::C<X>, T>) -> Self {
        Stream::from_fn(move |t| sf.eval(t))
    }
}

impl<B: MonoidBase, X: Value, T: TimeDomain> Stream<B, X, T> {
    /// A table-backed stream; absent instants read as the neutral element
    /// and duplicate instants are combined in iteration order.
    pub fn from_table(rows: impl IntoIterator<Item = (T, B::C<X>)>) -> Self {
        let mut table: HashMap<T, B::C<X>> = HashMap::new();
        for (t, c) in rows {
            let slot = table.entry(t).or_insert_with(B::empty);
            *slot = B::combine(slot, &c);
        }
        Stream::from_fn(move |t| table.get(&t).cloned().unwrap_or_else(B::empty))
    }

    /// The stream that is neutral everywhere.
    pub fn empty() -> Self {
        Stream::from_fn(|_| B::empty())
    }
}

// ---------------------------------------------------------------------------
// Stream monad
// ---------------------------------------------------------------------------

/// Element-wise mapping: the result at `t` is the base map of the input
/// at `t`.
pub fn map_stream<B: Base, X: Value, Y: Value, T: TimeDomain>(
    f: impl Fn(&X) -> Y + Send + Sync + 'static,
    s: &Stream<B, X, T>,
) -> Stream<B, Y, T> {
    let s = s.clone();
    Stream::from_fn(move |t| B::map(&f, &s.eval(t)))
}

/// The constant stream of a singleton container.
pub fn unit_stream<B: Base, X: Value, T: TimeDomain>(x: X) -> Stream<B, X, T> {
    Stream::from_fn(move |_| B::unit(x.clone()))
}

/// Evaluate the outer stream at `t`, evaluate every inner stream at the
/// same `t`, then flatten in the base.
pub fn flatten_stream<B: Base, X: Value, T: TimeDomain>(
    ss: &Stream<B, Stream<B, X, T>, T>,
) -> Stream<B, X, T> {
    let ss = ss.clone();
    Stream::from_fn(move |t| B::flatten(&B::map(|inner: &Stream<B, X, T>| inner.eval(t), &ss.eval(t))))
}

// ---------------------------------------------------------------------------
// Snapshot monad, specialized to streams
// ---------------------------------------------------------------------------

/// Per-instant mapping; `g` sees whole containers, so it can change the
/// base (e.g. bag in, identity-of-count out).
pub fn map_snapshot<B, B2, X, Y, T, G>(g: G, s: &Stream<B, X, T>) -> Stream<B2, Y, T>
where
    B: Base,
    B2: Base,
    X: Value,
    Y: Value,
    T: TimeDomain,
    G: Fn(&B::C<X>) -> B2::C<Y> + Send + Sync + 'static,
{
    let s = s.clone();
    Stream::from_fn(move |t| g(&s.eval(t)))
}

/// Lift one container to the constant stream — how static relations enter
/// a stream pipeline.
pub fn unit_snapshot<B: Base, X: Value, T: TimeDomain>(c: B::C<X>) -> Stream<B, X, T> {
    Stream::constant(c)
}

/// Collapse a snapshot function of snapshot functions by applying the same
/// instant to both layers.
pub fn flatten_snapshot<B: Base, X: Value, T: TimeDomain>(
    ss: &SnapshotFn<SnapshotFn<B::C<X>, T>, T>,
) -> Stream<B, X, T> {
    Stream::from_snapshot_fn(SnapshotFn::diagonal(ss))
}

// ---------------------------------------------------------------------------
// Snapshot-reducible operators
// ---------------------------------------------------------------------------

/// Keep the payloads satisfying `p` at every instant.
pub fn sel_elem<B: MonoidBase, X: Value, T: TimeDomain>(
    p: impl Fn(&X) -> bool + Send + Sync + 'static,
    s: &Stream<B, X, T>,
) -> Stream<B, X, T> {
    let s = s.clone();
    Stream::from_fn(move |t| filter_elems::<B, X>(&p, &s.eval(t)))
}

/// Keep or drop whole instants based on a per-instant predicate.
pub fn sel_time<B: MonoidBase, X: Value, T: TimeDomain>(
    q: impl Fn(&B::C<X>) -> bool + Send + Sync + 'static,
    s: &Stream<B, X, T>,
) -> Stream<B, X, T> {
    let s = s.clone();
    Stream::from_fn(move |t| {
        let c = s.eval(t);
        if q(&c) {
            c
        } else {
            B::empty()
        }
    })
}

/// Per-instant cross product; time distributes over the operands.
pub fn cross<B: Base, X: Value, Y: Value, T: TimeDomain>(
    s1: &Stream<B, X, T>,
    s2: &Stream<B, Y, T>,
) -> Stream<B, (X, Y), T> {
    let s1 = s1.clone();
    let s2 = s2.clone();
    Stream::from_fn(move |t| cross_product::<B, X, Y>(&s1.eval(t), &s2.eval(t)))
}

/// Pointwise combine of two streams over the same base.
pub fn union_stream<B: MonoidBase, X: Value, T: TimeDomain>(
    s1: &Stream<B, X, T>,
    s2: &Stream<B, X, T>,
) -> Stream<B, X, T> {
    let s1 = s1.clone();
    let s2 = s2.clone();
    Stream::from_fn(move |t| B::combine(&s1.eval(t), &s2.eval(t)))
}

/// Tagged merge: left payloads injected with [`Sum::Left`], right payloads
/// with [`Sum::Right`], then unioned pointwise.
pub fn disjoint_union<B: MonoidBase, X: Value, Y: Value, T: TimeDomain>(
    s1: &Stream<B, X, T>,
    s2: &Stream<B, Y, T>,
) -> Stream<B, Sum<X, Y>, T> {
    let left = map_stream(|x: &X| Sum::Left(x.clone()), s1);
    let right = map_stream(|y: &Y| Sum::Right(y.clone()), s2);
    union_stream(&left, &right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Bag, BagBase, IdentityBase, MaybeBase};
    use crate::time::FiniteDomain;

    fn t(tick: i64) -> TimePoint {
        TimePoint(tick)
    }

    fn bag_stream(rows: &[(i64, &[i32])]) -> Stream<BagBase, i32> {
        Stream::from_table(
            rows.iter()
                .map(|(tick, xs)| (t(*tick), Bag::from_elems(xs.iter().copied()))),
        )
    }

    #[test]
    fn map_stream_is_pointwise() {
        let dom = FiniteDomain::new(0, 5);
        let s = bag_stream(&[(1, &[2]), (3, &[5, 5])]);
        let mapped = map_stream(|x| x * 10, &s);
        // oracle: evaluate input at each tick, map the container by hand
        for p in dom.iter() {
            assert_eq!(mapped.eval(p), BagBase::map(|x| x * 10, &s.eval(p)));
        }
        assert_eq!(mapped.eval(t(1)), Bag::from_elems([20]));
        assert_eq!(mapped.eval(t(3)), Bag::from_elems([50, 50]));
        assert_eq!(mapped.eval(t(0)), Bag::new());
    }

    #[test]
    fn map_identity_leaves_stream_unchanged() {
        let dom = FiniteDomain::new(0, 5);
        let s = bag_stream(&[(0, &[1]), (2, &[2, 3]), (5, &[1, 1])]);
        assert!(map_stream(|x: &i32| *x, &s).eq_on(&s, dom.iter()));
        let empty = Stream::<BagBase, i32>::empty();
        assert!(map_stream(|x: &i32| x + 1, &empty).eq_on(&empty, dom.iter()));
    }

    #[test]
    fn unit_stream_is_constant() {
        let s = unit_stream::<BagBase, _, TimePoint>('a');
        assert_eq!(s.eval(t(0)), Bag::from_elems(['a']));
        assert_eq!(s.eval(t(99)), Bag::from_elems(['a']));
        // snapshot collapses to evaluation
        assert_eq!(s.snapshot_fn().eval(t(7)), BagBase::unit('a'));
    }

    #[test]
    fn flatten_after_unit_is_identity() {
        let dom = FiniteDomain::new(0, 4);
        let s = bag_stream(&[(1, &[4]), (2, &[7, 7])]);
        let nested = unit_stream::<BagBase, _, TimePoint>(s.clone());
        assert!(flatten_stream(&nested).eq_on(&s, dom.iter()));
        // flatten ∘ map unit = id as well
        let wrapped = map_stream(|x: &i32| unit_stream::<BagBase, _, TimePoint>(*x), &s);
        assert!(flatten_stream(&wrapped).eq_on(&s, dom.iter()));
    }

    #[test]
    fn flatten_evaluates_inner_streams_at_the_same_instant() {
        let dom = FiniteDomain::new(0, 3);
        let s1 = bag_stream(&[(1, &[10])]);
        let s2 = bag_stream(&[(1, &[20])]);
        let outer: Stream<BagBase, Stream<BagBase, i32>> = Stream::from_table([(
            t(1),
            Bag::from_elems([s1.clone(), s2.clone()]),
        )]);
        let flat = flatten_stream(&outer);
        // oracle: by hand, the only occupied tick is 1 where both inners hold a value
        assert_eq!(flat.eval(t(1)), Bag::from_elems([10, 20]));
        for p in dom.iter().filter(|p| *p != t(1)) {
            assert_eq!(flat.eval(p), Bag::new());
        }

        let empties: Stream<BagBase, Stream<BagBase, i32>> =
            Stream::from_table([(t(2), Bag::from_elems([Stream::<BagBase, i32>::empty()]))]);
        assert!(flatten_stream(&empties).eq_on(&Stream::empty(), dom.iter()));
    }

    #[test]
    fn map_snapshot_changes_the_base() {
        let s = bag_stream(&[(1, &[7, 8])]);
        let counts: Stream<IdentityBase, u64> = map_snapshot(|c: &Bag<i32>| c.cardinality(), &s);
        assert_eq!(counts.eval(t(1)), 2);
        assert_eq!(counts.eval(t(0)), 0);

        // identity g leaves the stream unchanged
        let dom = FiniteDomain::new(0, 4);
        let same: Stream<BagBase, i32> = map_snapshot(|c: &Bag<i32>| c.clone(), &s);
        assert!(same.eq_on(&s, dom.iter()));
    }

    #[test]
    fn map_stream_factors_through_map_snapshot() {
        let dom = FiniteDomain::new(0, 6);
        let s = bag_stream(&[(0, &[1, 2]), (3, &[3]), (6, &[2, 2, 2])]);
        let via_elem = map_stream(|x| x * 3, &s);
        let via_snapshot: Stream<BagBase, i32> =
            map_snapshot(|c: &Bag<i32>| BagBase::map(|x| x * 3, c), &s);
        assert!(via_elem.eq_on(&via_snapshot, dom.iter()));
    }

    #[test]
    fn unit_stream_factors_through_unit_snapshot() {
        let dom = FiniteDomain::new(-2, 2);
        let direct = unit_stream::<BagBase, _, TimePoint>('z');
        let layered = unit_snapshot::<BagBase, _, TimePoint>(BagBase::unit('z'));
        assert!(direct.eq_on(&layered, dom.iter()));
    }

    #[test]
    fn snapshot_diagonal_identities() {
        let dom = FiniteDomain::new(0, 5);
        let s = bag_stream(&[(2, &[1]), (4, &[2, 2])]);
        let sf = s.snapshot_fn();
        let nested = SnapshotFn::constant(sf.clone());
        let back = flatten_snapshot::<BagBase, i32, TimePoint>(&nested);
        assert!(back.eq_on(&s, dom.iter()));

        // constancy of unit_snapshot
        let c = Bag::from_elems(['a', 'b']);
        let constant = unit_snapshot::<BagBase, _, TimePoint>(c.clone());
        for p in dom.iter() {
            assert_eq!(constant.eval(p), c);
        }
    }

    #[test]
    fn sel_elem_keeps_matching_payloads() {
        let dom = FiniteDomain::new(0, 3);
        let s = bag_stream(&[(1, &[1, 3, 3])]);
        assert_eq!(sel_elem(|x| *x > 2, &s).eval(t(1)), Bag::from_elems([3, 3]));
        assert!(sel_elem(|_| true, &s).eq_on(&s, dom.iter()));
        assert!(sel_elem(|_| false, &s).eq_on(&Stream::empty(), dom.iter()));
    }

    #[test]
    fn sel_time_keeps_whole_instants() {
        let s = bag_stream(&[(1, &[7]), (2, &[7, 8])]);
        let kept = sel_time(|c: &Bag<i32>| c.cardinality() >= 2, &s);
        assert_eq!(kept.eval(t(1)), Bag::new());
        assert_eq!(kept.eval(t(2)), Bag::from_elems([7, 8]));

        let dom = FiniteDomain::new(0, 3);
        assert!(sel_time(|_| true, &s).eq_on(&s, dom.iter()));
    }

    #[test]
    fn cross_pairs_per_instant() {
        let s1 = bag_stream(&[(1, &[1])]);
        let s2 = bag_stream(&[(1, &[10, 20])]);
        assert_eq!(
            cross(&s1, &s2).eval(t(1)),
            Bag::from_elems([(1, 10), (1, 20)])
        );

        let dom = FiniteDomain::new(0, 3);
        let with_empty = cross(&s1, &Stream::<BagBase, i32>::empty());
        assert!(with_empty.eq_on(&Stream::empty(), dom.iter()));
    }

    #[test]
    fn identity_cross_mixes_audio() {
        let left: Stream<IdentityBase, f64> = Stream::from_fn(|_| 0.2);
        let right: Stream<IdentityBase, f64> = Stream::from_fn(|_| 0.6);
        let mixed = map_stream(|(a, b): &(f64, f64)| (a + b) / 2.0, &cross(&left, &right));
        assert_eq!(mixed.eval(t(0)), 0.4);
        assert_eq!(mixed.eval(t(1000)), 0.4);
    }

    #[test]
    fn union_is_pointwise_combine() {
        let dom = FiniteDomain::new(0, 3);
        let s1 = bag_stream(&[(1, &[5])]);
        let s2 = bag_stream(&[(1, &[5])]);
        assert_eq!(union_stream(&s1, &s2).eval(t(1)), Bag::from_counts([(5, 2)]));
        assert!(union_stream(&s1, &Stream::empty()).eq_on(&s1, dom.iter()));
    }

    #[test]
    fn disjoint_union_tags_then_unions() {
        let s1 = bag_stream(&[(1, &[1])]);
        let s2 = bag_stream(&[(1, &[9])]);
        assert_eq!(
            disjoint_union(&s1, &s2).eval(t(1)),
            Bag::from_elems([Sum::Left(1), Sum::Right(9)])
        );
    }

    #[test]
    fn table_streams_combine_duplicate_instants() {
        let s: Stream<MaybeBase, char> =
            Stream::from_table([(t(1), Some('a')), (t(2), Some('b'))]);
        assert_eq!(s.eval(t(1)), Some('a'));
        assert_eq!(s.eval(t(0)), None);

        let dup: Stream<BagBase, i32> = Stream::from_table([
            (t(3), Bag::from_elems([1])),
            (t(3), Bag::from_elems([1, 2])),
        ]);
        assert_eq!(dup.eval(t(3)), Bag::from_elems([1, 1, 2]));
    }

    #[test]
    fn memoization_returns_stable_results() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let calls = Arc::new(AtomicUsize::new(0));
        let calls2 = Arc::clone(&calls);
        let s: Stream<BagBase, i32> = Stream::from_fn(move |_| {
            calls2.fetch_add(1, Ordering::SeqCst);
            Bag::from_elems([1])
        });
        assert_eq!(s.eval(t(0)), s.eval(t(0)));
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }
}
