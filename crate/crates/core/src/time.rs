//! Discrete, ordered time: instants, intervals, the bitemporal product
//! domain, and finite iteration ranges for exhaustive evaluation.

use std::fmt;
use std::hash::Hash;

use crate::error::Error;

/// A discrete time instant, measured in abstract ticks.
///
/// The tick unit is chosen at ingestion (milliseconds, seconds, ...); the
/// smallest representable difference is one tick.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TimePoint(pub i64);

impl TimePoint {
    pub fn tick(self) -> i64 {
        self.0
    }

    pub fn succ(self) -> TimePoint {
        TimePoint(self.0 + 1)
    }

    pub fn pred(self) -> TimePoint {
        TimePoint(self.0 - 1)
    }
}

impl fmt::Debug for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl From<i64> for TimePoint {
    fn from(tick: i64) -> Self {
        TimePoint(tick)
    }
}

/// An event/arrival time pair.
///
/// Ordered lexicographically by (event, arrival). No `arrival >= event`
/// constraint is imposed; clock skew between sources is permitted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BiTime {
    pub event: TimePoint,
    pub arrival: TimePoint,
}

impl BiTime {
    pub fn new(event: impl Into<TimePoint>, arrival: impl Into<TimePoint>) -> Self {
        BiTime {
            event: event.into(),
            arrival: arrival.into(),
        }
    }

    /// Arrival delay in ticks; negative when data arrives before its event time.
    pub fn lateness(self) -> i64 {
        self.arrival.0 - self.event.0
    }

    /// All points of the product of an event-time range and an arrival-time
    /// range, in lexicographic order.
    pub fn grid(events: &FiniteDomain, arrivals: &FiniteDomain) -> impl Iterator<Item = BiTime> {
        let arrivals = *arrivals;
        events
            .iter()
            .flat_map(move |e| arrivals.iter().map(move |a| BiTime { event: e, arrival: a }))
    }
}

/// Marker for types usable as the time parameter of a stream.
pub trait TimeDomain: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync + 'static {}

impl TimeDomain for TimePoint {}
impl TimeDomain for BiTime {}

/// A time interval stored in normal form: either the canonical empty
/// interval or a pair of closed integer bounds.
///
/// Open bounds are accepted at construction and normalized away:
/// `(a; b] = [a+1, b]` and `[a; b) = [a, b-1]`. Equality is on normal forms,
/// so all empty intervals compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TimeInterval {
    Empty,
    Span { lo: TimePoint, hi: TimePoint },
}

impl TimeInterval {
    pub fn new(lo: TimePoint, hi: TimePoint, lo_closed: bool, hi_closed: bool) -> Self {
        let lo = if lo_closed { lo } else { lo.succ() };
        let hi = if hi_closed { hi } else { hi.pred() };
        if lo > hi {
            TimeInterval::Empty
        } else {
            TimeInterval::Span { lo, hi }
        }
    }

    /// `[lo; hi]`
    pub fn closed(lo: impl Into<TimePoint>, hi: impl Into<TimePoint>) -> Self {
        Self::new(lo.into(), hi.into(), true, true)
    }

    /// `(lo; hi]`
    pub fn open_closed(lo: impl Into<TimePoint>, hi: impl Into<TimePoint>) -> Self {
        Self::new(lo.into(), hi.into(), false, true)
    }

    /// `[lo; hi)`
    pub fn closed_open(lo: impl Into<TimePoint>, hi: impl Into<TimePoint>) -> Self {
        Self::new(lo.into(), hi.into(), true, false)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, TimeInterval::Empty)
    }

    pub fn contains(&self, t: TimePoint) -> bool {
        match *self {
            TimeInterval::Empty => false,
            TimeInterval::Span { lo, hi } => lo <= t && t <= hi,
        }
    }

    /// Closed bounds of the normal form, if non-empty.
    pub fn bounds(&self) -> Option<(TimePoint, TimePoint)> {
        match *self {
            TimeInterval::Empty => None,
            TimeInterval::Span { lo, hi } => Some((lo, hi)),
        }
    }

    /// True when the union of the two intervals is itself an interval
    /// (they overlap or are adjacent with no gap).
    pub fn touches(&self, other: &TimeInterval) -> bool {
        match (self.bounds(), other.bounds()) {
            (Some((a_lo, a_hi)), Some((b_lo, b_hi))) => a_lo <= b_hi.succ() && b_lo <= a_hi.succ(),
            _ => false,
        }
    }

    /// Union of two touching intervals.
    pub fn merge(&self, other: &TimeInterval) -> TimeInterval {
        match (self.bounds(), other.bounds()) {
            (Some((a_lo, a_hi)), Some((b_lo, b_hi))) => TimeInterval::Span {
                lo: a_lo.min(b_lo),
                hi: a_hi.max(b_hi),
            },
            (Some(_), None) => *self,
            _ => *other,
        }
    }
}

/// An inclusive, enumerable range of ticks used as the evaluation range
/// for extensional checks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FiniteDomain {
    first: TimePoint,
    last: TimePoint,
}

impl FiniteDomain {
    /// Panics when `first > last`; a domain always has at least one tick.
    pub fn new(first: impl Into<TimePoint>, last: impl Into<TimePoint>) -> Self {
        let first = first.into();
        let last = last.into();
        assert!(first <= last, "domain first must not exceed last");
        FiniteDomain { first, last }
    }

    pub fn first(&self) -> TimePoint {
        self.first
    }

    pub fn last(&self) -> TimePoint {
        self.last
    }

    pub fn len(&self) -> u64 {
        (self.last.0 - self.first.0 + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: TimePoint) -> bool {
        self.first <= t && t <= self.last
    }

    /// Every tick of the domain exactly once, ascending.
    pub fn iter(&self) -> impl Iterator<Item = TimePoint> {
        (self.first.0..=self.last.0).map(TimePoint)
    }
}

/// All ticks of `dom` that lie inside `iv`, ascending.
pub fn interval_members(iv: TimeInterval, dom: &FiniteDomain) -> Vec<TimePoint> {
    match iv.bounds() {
        None => Vec::new(),
        Some((lo, hi)) => {
            let lo = lo.max(dom.first());
            let hi = hi.min(dom.last());
            (lo.0..=hi.0).map(TimePoint).collect()
        }
    }
}

/// Predicate holding exactly at ticks `t` with `(t - anchor) mod period = 0`.
///
/// A slide needs an anchor: every full hour after 12:03 is a different
/// sampling grid than every full hour after 12:04.
pub fn periodic_predicate(
    period: i64,
    anchor: TimePoint,
) -> Result<impl Fn(TimePoint) -> bool + Clone + Send + Sync + 'static, Error> {
    if period < 1 {
        return Err(Error::NonPositivePeriod(period));
    }
    Ok(move |t: TimePoint| (t.0 - anchor.0).rem_euclid(period) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(tick: i64) -> TimePoint {
        TimePoint(tick)
    }

    #[test]
    fn interval_normalization() {
        // (a; b] = [a+1, b]
        assert_eq!(TimeInterval::open_closed(3, 6), TimeInterval::closed(4, 6));
        // [a; b) = [a, b-1]
        assert_eq!(TimeInterval::closed_open(1, 5), TimeInterval::closed(1, 4));
        // all empty intervals share one normal form
        assert_eq!(TimeInterval::closed(5, 3), TimeInterval::Empty);
        assert_eq!(TimeInterval::open_closed(2, 2), TimeInterval::Empty);
        assert_eq!(TimeInterval::closed_open(2, 2), TimeInterval::Empty);
    }

    #[test]
    fn interval_members_examples() {
        let dom = FiniteDomain::new(0, 10);
        assert_eq!(
            interval_members(TimeInterval::open_closed(3, 6), &dom),
            vec![t(4), t(5), t(6)]
        );
        assert_eq!(interval_members(TimeInterval::closed(1, 1), &dom), vec![t(1)]);
        assert_eq!(
            interval_members(TimeInterval::new(t(5), t(3), true, false), &dom),
            Vec::<TimePoint>::new()
        );
    }

    #[test]
    fn interval_members_matches_brute_force_membership() {
        let dom = FiniteDomain::new(-3, 8);
        for lo in -5..7 {
            for hi in -5..7 {
                for (lc, hc) in [(true, true), (true, false), (false, true), (false, false)] {
                    let iv = TimeInterval::new(t(lo), t(hi), lc, hc);
                    let by_membership: Vec<TimePoint> =
                        dom.iter().filter(|&p| iv.contains(p)).collect();
                    assert_eq!(interval_members(iv, &dom), by_membership, "{iv:?}");
                }
            }
        }
    }

    #[test]
    fn periodic_predicate_examples() {
        let p = periodic_predicate(3, t(1)).unwrap();
        assert!(p(t(4)));
        assert!(!p(t(5)));
        assert!(p(t(-2)));
        let densest = periodic_predicate(1, t(0)).unwrap();
        assert!(densest(t(7)) && densest(t(-7)) && densest(t(0)));
        assert_eq!(periodic_predicate(0, t(0)).err(), Some(Error::NonPositivePeriod(0)));
        assert_eq!(periodic_predicate(-2, t(0)).err(), Some(Error::NonPositivePeriod(-2)));
    }

    #[test]
    fn bitime_orders_lexicographically() {
        let a = BiTime::new(1, 9);
        let b = BiTime::new(2, 0);
        let c = BiTime::new(2, 1);
        assert!(a < b && b < c);
        // skew allowed: arrival before event is representable
        assert_eq!(BiTime::new(5, 3).lateness(), -2);
    }

    #[test]
    fn domain_iteration_is_each_tick_once_ascending() {
        let dom = FiniteDomain::new(-2, 2);
        let ticks: Vec<i64> = dom.iter().map(TimePoint::tick).collect();
        assert_eq!(ticks, vec![-2, -1, 0, 1, 2]);
        assert_eq!(dom.len(), 5);
    }

    #[test]
    fn bitime_grid_covers_product() {
        let e = FiniteDomain::new(0, 1);
        let a = FiniteDomain::new(5, 6);
        let pts: Vec<BiTime> = BiTime::grid(&e, &a).collect();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], BiTime::new(0, 5));
        assert_eq!(pts[3], BiTime::new(1, 6));
    }
}
