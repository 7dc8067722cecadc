//! The pluggable per-instant container abstraction and its five instances.
//!
//! A base gives every time instant of a stream its collection semantics.
//! Each instance provides the monad operations `unit`/`map`/`flatten`; all
//! but [`IdentityBase`] additionally form a monoid (`empty`/`combine`),
//! which is what selections and windows require.

use std::fmt;

/// Bound required of payloads and containers alike.
///
/// Only equality is assumed — no ordering or hashing — so payloads may be
/// floats, nested containers, or opaque handles.
pub trait Value: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {}

impl<T: Clone + PartialEq + fmt::Debug + Send + Sync + 'static> Value for T {}

/// A base container: a type constructor with the monad operations.
///
/// Containers are themselves [`Value`]s, so containers of containers work
/// and payload positions can hold containers (used by generalized row
/// windows and by `flatten`).
pub trait Base: 'static {
    type C<X: Value>: Value;

    /// The container holding exactly `x`.
    fn unit<X: Value>(x: X) -> Self::C<X>;

    /// Element-wise application preserving multiplicities and order.
    fn map<X: Value, Y: Value, F: Fn(&X) -> Y>(f: F, c: &Self::C<X>) -> Self::C<Y>;

    /// One-level flattening. Bag multiplicities multiply through; sequence
    /// order is outer-then-inner.
    fn flatten<X: Value>(cc: &Self::C<Self::C<X>>) -> Self::C<X>;

    /// The contained payloads in iteration order, expanded per multiplicity.
    fn elements<X: Value>(c: &Self::C<X>) -> Vec<X>;
}

/// Monoid structure on a base: a neutral element and an associative combine.
pub trait MonoidBase: Base {
    fn empty<X: Value>() -> Self::C<X>;

    fn combine<X: Value>(a: &Self::C<X>, b: &Self::C<X>) -> Self::C<X>;

    fn is_neutral<X: Value>(c: &Self::C<X>) -> bool {
        *c == Self::empty()
    }
}

/// Per-instant cross product, derived from the monad operations alone:
/// all pairs for bags (multiplicities multiply), the single pair for
/// identity, lexicographic pairs for sequences.
pub fn cross_product<B: Base, X: Value, Y: Value>(a: &B::C<X>, b: &B::C<Y>) -> B::C<(X, Y)> {
    B::flatten(&B::map(
        |x: &X| {
            let x = x.clone();
            B::map(move |y: &Y| (x.clone(), y.clone()), b)
        },
        a,
    ))
}

/// Keep exactly the payloads satisfying `p`, preserving multiplicity and
/// order. This is the comprehension-filter desugaring, which is why it
/// needs the monoid's neutral element.
pub fn filter_elems<B: MonoidBase, X: Value>(p: impl Fn(&X) -> bool, c: &B::C<X>) -> B::C<X> {
    B::flatten(&B::map(
        |x: &X| {
            if p(x) {
                B::unit(x.clone())
            } else {
                B::empty()
            }
        },
        c,
    ))
}

/// Binary sum payload for tagged merges of two streams.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sum<L, R> {
    Left(L),
    Right(R),
}

// ---------------------------------------------------------------------------
// Bag
// ---------------------------------------------------------------------------

/// A multiset keyed by payload equality.
///
/// Stored as (payload, multiplicity) entries with multiplicities >= 1,
/// merged on insertion; iteration order is first-insertion order. Equality
/// compares multiplicities and ignores insertion order.
#[derive(Clone)]
pub struct Bag<X: Value> {
    entries: Vec<(X, u64)>,
}

impl<X: Value> Bag<X> {
    pub fn new() -> Self {
        Bag { entries: Vec::new() }
    }

    pub fn singleton(x: X) -> Self {
        Bag { entries: vec![(x, 1)] }
    }

    pub fn from_elems(items: impl IntoIterator<Item = X>) -> Self {
        let mut bag = Bag::new();
        for x in items {
            bag.insert(x, 1);
        }
        bag
    }

    pub fn from_counts(items: impl IntoIterator<Item = (X, u64)>) -> Self {
        let mut bag = Bag::new();
        for (x, n) in items {
            bag.insert(x, n);
        }
        bag
    }

    /// Add `n` occurrences of `x`. Inserting zero occurrences is a no-op.
    pub fn insert(&mut self, x: X, n: u64) {
        if n == 0 {
            return;
        }
        for (y, m) in &mut self.entries {
            if *y == x {
                *m += n;
                return;
            }
        }
        self.entries.push((x, n));
    }

    pub fn count(&self, x: &X) -> u64 {
        self.entries
            .iter()
            .find(|(y, _)| y == x)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }

    /// Number of distinct payloads.
    pub fn distinct_len(&self) -> usize {
        self.entries.len()
    }

    /// Total multiplicity.
    pub fn cardinality(&self) -> u64 {
        self.entries.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(X, u64)> {
        self.entries.iter()
    }

    /// Payloads expanded with repetition.
    pub fn elements(&self) -> impl Iterator<Item = &X> {
        self.entries
            .iter()
            .flat_map(|(x, n)| std::iter::repeat(x).take(*n as usize))
    }

    /// Additive union.
    pub fn union(&self, other: &Bag<X>) -> Bag<X> {
        let mut out = self.clone();
        for (x, n) in &other.entries {
            out.insert(x.clone(), *n);
        }
        out
    }
}

impl<X: Value> Default for Bag<X> {
    fn default() -> Self {
        Bag::new()
    }
}

impl<X: Value> PartialEq for Bag<X> {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(x, n)| other.count(x) == *n)
    }
}

impl<X: Value> fmt::Debug for Bag<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bag{{")?;
        for (i, (x, n)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x:?}:{n}")?;
        }
        write!(f, "}}")
    }
}

impl<X: Value> FromIterator<X> for Bag<X> {
    fn from_iter<I: IntoIterator<Item = X>>(iter: I) -> Self {
        Bag::from_elems(iter)
    }
}

pub struct BagBase;

impl Base for BagBase {
    type C<X: Value> = Bag<X>;

    fn unit<X: Value>(x: X) -> Bag<X> {
        Bag::singleton(x)
    }

    fn map<X: Value, Y: Value, F: Fn(&X) -> Y>(f: F, c: &Bag<X>) -> Bag<Y> {
        let mut out = Bag::new();
        for (x, n) in c.iter() {
            out.insert(f(x), *n);
        }
        out
    }

    fn flatten<X: Value>(cc: &Bag<Bag<X>>) -> Bag<X> {
        let mut out = Bag::new();
        for (inner, n) in cc.iter() {
            for (x, m) in inner.iter() {
                out.insert(x.clone(), n * m);
            }
        }
        out
    }

    fn elements<X: Value>(c: &Bag<X>) -> Vec<X> {
        c.elements().cloned().collect()
    }
}

impl MonoidBase for BagBase {
    fn empty<X: Value>() -> Bag<X> {
        Bag::new()
    }

    fn combine<X: Value>(a: &Bag<X>, b: &Bag<X>) -> Bag<X> {
        a.union(b)
    }

    fn is_neutral<X: Value>(c: &Bag<X>) -> bool {
        c.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Set
// ---------------------------------------------------------------------------

/// A duplicate-free collection requiring only payload equality.
///
/// No ordering or hashing is assumed, so lookups are linear; fine at the
/// carrier sizes this crate evaluates exhaustively.
#[derive(Clone)]
pub struct EqSet<X: Value> {
    items: Vec<X>,
}

impl<X: Value> EqSet<X> {
    pub fn new() -> Self {
        EqSet { items: Vec::new() }
    }

    pub fn from_elems(items: impl IntoIterator<Item = X>) -> Self {
        let mut set = EqSet::new();
        for x in items {
            set.insert(x);
        }
        set
    }

    pub fn insert(&mut self, x: X) {
        if !self.contains(&x) {
            self.items.push(x);
        }
    }

    pub fn contains(&self, x: &X) -> bool {
        self.items.iter().any(|y| y == x)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &X> {
        self.items.iter()
    }

    pub fn union(&self, other: &EqSet<X>) -> EqSet<X> {
        let mut out = self.clone();
        for x in other.iter() {
            out.insert(x.clone());
        }
        out
    }
}

impl<X: Value> Default for EqSet<X> {
    fn default() -> Self {
        EqSet::new()
    }
}

impl<X: Value> PartialEq for EqSet<X> {
    fn eq(&self, other: &Self) -> bool {
        self.items.len() == other.items.len() && self.items.iter().all(|x| other.contains(x))
    }
}

impl<X: Value> fmt::Debug for EqSet<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.items.iter()).finish()
    }
}

impl<X: Value> FromIterator<X> for EqSet<X> {
    fn from_iter<I: IntoIterator<Item = X>>(iter: I) -> Self {
        EqSet::from_elems(iter)
    }
}

pub struct SetBase;

impl Base for SetBase {
    type C<X: Value> = EqSet<X>;

    fn unit<X: Value>(x: X) -> EqSet<X> {
        EqSet::from_elems([x])
    }

    fn map<X: Value, Y: Value, F: Fn(&X) -> Y>(f: F, c: &EqSet<X>) -> EqSet<Y> {
        c.iter().map(f).collect()
    }

    fn flatten<X: Value>(cc: &EqSet<EqSet<X>>) -> EqSet<X> {
        let mut out = EqSet::new();
        for inner in cc.iter() {
            for x in inner.iter() {
                out.insert(x.clone());
            }
        }
        out
    }

    fn elements<X: Value>(c: &EqSet<X>) -> Vec<X> {
        c.iter().cloned().collect()
    }
}

impl MonoidBase for SetBase {
    fn empty<X: Value>() -> EqSet<X> {
        EqSet::new()
    }

    fn combine<X: Value>(a: &EqSet<X>, b: &EqSet<X>) -> EqSet<X> {
        a.union(b)
    }

    fn is_neutral<X: Value>(c: &EqSet<X>) -> bool {
        c.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Maybe (zero or one payload)
// ---------------------------------------------------------------------------

/// Zero or one payload per instant — the classic event-stream shape.
/// `combine` is left-biased: the first writer wins when both are present.
pub struct MaybeBase;

impl Base for MaybeBase {
    type C<X: Value> = Option<X>;

    fn unit<X: Value>(x: X) -> Option<X> {
        Some(x)
    }

    fn map<X: Value, Y: Value, F: Fn(&X) -> Y>(f: F, c: &Option<X>) -> Option<Y> {
        c.as_ref().map(f)
    }

    fn flatten<X: Value>(cc: &Option<Option<X>>) -> Option<X> {
        cc.as_ref().and_then(|inner| inner.clone())
    }

    fn elements<X: Value>(c: &Option<X>) -> Vec<X> {
        c.iter().cloned().collect()
    }
}

impl MonoidBase for MaybeBase {
    fn empty<X: Value>() -> Option<X> {
        None
    }

    fn combine<X: Value>(a: &Option<X>, b: &Option<X>) -> Option<X> {
        a.as_ref().or(b.as_ref()).cloned()
    }

    fn is_neutral<X: Value>(c: &Option<X>) -> bool {
        c.is_none()
    }
}

// ---------------------------------------------------------------------------
// Identity (exactly one payload)
// ---------------------------------------------------------------------------

/// Exactly one payload per instant, e.g. audio samples in waveform.
///
/// There is no neutral element, hence no [`MonoidBase`] impl: filtering a
/// signal that always has a value is a different operation from stream
/// selection, and the type system rejects it here.
pub struct IdentityBase;

impl Base for IdentityBase {
    type C<X: Value> = X;

    fn unit<X: Value>(x: X) -> X {
        x
    }

    fn map<X: Value, Y: Value, F: Fn(&X) -> Y>(f: F, c: &X) -> Y {
        f(c)
    }

    fn flatten<X: Value>(cc: &X) -> X {
        cc.clone()
    }

    fn elements<X: Value>(c: &X) -> Vec<X> {
        vec![c.clone()]
    }
}

// ---------------------------------------------------------------------------
// Seq (ordered)
// ---------------------------------------------------------------------------

/// An ordered sequence per instant; combine is concatenation, which is
/// associative but not commutative. The natural carrier for values
/// collected by pattern repetition.
pub struct SeqBase;

impl Base for SeqBase {
    type C<X: Value> = Vec<X>;

    fn unit<X: Value>(x: X) -> Vec<X> {
        vec![x]
    }

    fn map<X: Value, Y: Value, F: Fn(&X) -> Y>(f: F, c: &Vec<X>) -> Vec<Y> {
        c.iter().map(f).collect()
    }

    fn flatten<X: Value>(cc: &Vec<Vec<X>>) -> Vec<X> {
        cc.iter().flat_map(|inner| inner.iter().cloned()).collect()
    }

    fn elements<X: Value>(c: &Vec<X>) -> Vec<X> {
        c.clone()
    }
}

impl MonoidBase for SeqBase {
    fn empty<X: Value>() -> Vec<X> {
        Vec::new()
    }

    fn combine<X: Value>(a: &Vec<X>, b: &Vec<X>) -> Vec<X> {
        let mut out = a.clone();
        out.extend(b.iter().cloned());
        out
    }

    fn is_neutral<X: Value>(c: &Vec<X>) -> bool {
        c.is_empty()
    }
}
