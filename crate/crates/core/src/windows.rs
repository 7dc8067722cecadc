//! Window operators and the other stream transformations that are not
//! snapshot-reducible: time windows and slides, time-aware-aggregate
//! windows, row windows (plain and generalized), future windows,
//! resampling, bounded reordering, and the late-element filter.

use crate::base::{Bag, BagBase, MaybeBase, MonoidBase, Value};
use crate::error::Error;
use crate::stream::Stream;
use crate::time::{interval_members, BiTime, FiniteDomain, TimeInterval, TimePoint};

/// Validated window parameters: a size plus an optional slide.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WindowSpec {
    size: WindowSize,
    slide: Option<SlideSpec>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WindowSize {
    Ticks(u64),
    Rows(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlideSpec {
    Periodic { period: i64, anchor: TimePoint },
    EveryNthRow(usize),
}

impl WindowSpec {
    pub fn time(ticks: u64) -> Result<Self, Error> {
        if ticks == 0 {
            return Err(Error::ZeroWindow(0));
        }
        Ok(WindowSpec { size: WindowSize::Ticks(ticks), slide: None })
    }

    pub fn rows(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::ZeroRows(0));
        }
        Ok(WindowSpec { size: WindowSize::Rows(n), slide: None })
    }

    pub fn with_periodic_slide(mut self, period: i64, anchor: TimePoint) -> Result<Self, Error> {
        if period < 1 {
            return Err(Error::NonPositivePeriod(period));
        }
        self.slide = Some(SlideSpec::Periodic { period, anchor });
        Ok(self)
    }

    pub fn with_row_slide(mut self, n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::ZeroRows(0));
        }
        self.slide = Some(SlideSpec::EveryNthRow(n));
        Ok(self)
    }

    pub fn size(&self) -> WindowSize {
        self.size
    }

    pub fn slide(&self) -> Option<SlideSpec> {
        self.slide
    }
}

/// The smallest-slide time window: at `t`, the combine of the input over
/// the interval `(t - width; t]`. Ticks outside `dom` contribute the
/// neutral element.
pub fn window_time<B: MonoidBase, X: Value>(
    width: u64,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Stream<B, X> {
    assert!(width >= 1, "window size must be at least 1 tick");
    let s = s.clone();
    let dom = *dom;
    Stream::from_fn(move |t: TimePoint| {
        let iv = TimeInterval::open_closed(TimePoint(t.0 - width as i64), t);
        combine_over(&s, &interval_members(iv, &dom))
    })
}

/// The forward-looking window `[t; t + width)`, clipped to the domain.
pub fn window_future<B: MonoidBase, X: Value>(
    width: u64,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Stream<B, X> {
    assert!(width >= 1, "window size must be at least 1 tick");
    let s = s.clone();
    let dom = *dom;
    Stream::from_fn(move |t: TimePoint| {
        let iv = TimeInterval::closed_open(t, TimePoint(t.0 + width as i64));
        combine_over(&s, &interval_members(iv, &dom))
    })
}

fn combine_over<B: MonoidBase, X: Value>(s: &Stream<B, X>, ticks: &[TimePoint]) -> B::C<X> {
    ticks
        .iter()
        .fold(B::empty(), |acc, t| B::combine(&acc, &s.eval(*t)))
}

/// Sampling on the time axis: the input where `p` holds, neutral elsewhere.
/// A filter with a predicate on time instead of on the data.
pub fn slide<B: MonoidBase, X: Value>(
    p: impl Fn(TimePoint) -> bool + Send + Sync + 'static,
    s: &Stream<B, X>,
) -> Stream<B, X> {
    let s = s.clone();
    Stream::from_fn(move |t| if p(t) { s.eval(t) } else { B::empty() })
}

/// Time window that keeps element timestamps: contents of `(t - width; t]`
/// tagged with the instant they were collected from. Aggregates like
/// average speed need the tags; on a variable data rate the untagged
/// window gives wrong results.
pub fn window_taa<B: MonoidBase, X: Value>(
    width: u64,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Stream<B, (TimePoint, X)> {
    assert!(width >= 1, "window size must be at least 1 tick");
    let s = s.clone();
    let dom = *dom;
    Stream::from_fn(move |t: TimePoint| {
        let iv = TimeInterval::open_closed(TimePoint(t.0 - width as i64), t);
        interval_members(iv, &dom)
            .into_iter()
            .fold(B::empty(), |acc, u| {
                let tagged = B::map(|x: &X| (u, x.clone()), &s.eval(u));
                B::combine(&acc, &tagged)
            })
    })
}

/// Row window over streams without simultaneous elements: at `t`, the bag
/// of the payloads of the most recent `min(n, available)` present instants
/// up to and including `t`.
pub fn window_row<X: Value>(
    n: usize,
    s: &Stream<MaybeBase, X>,
    dom: &FiniteDomain,
) -> Stream<BagBase, X> {
    assert!(n >= 1, "row window must cover at least 1 row");
    let s = s.clone();
    let dom = *dom;
    Stream::from_fn(move |t: TimePoint| {
        let mut recent: Vec<X> = Vec::new();
        for u in dom.iter().take_while(|u| *u <= t) {
            if let Some(x) = s.eval(u) {
                recent.push(x);
            }
        }
        let keep = recent.len().saturating_sub(n);
        Bag::from_elems(recent.into_iter().skip(keep))
    })
}

/// Generalized row window: counts non-neutral container values instead of
/// elements and provides the last `n` of them, whole containers as
/// payloads.
pub fn window_rowgen<B: MonoidBase, X: Value>(
    n: usize,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Stream<BagBase, B::C<X>> {
    assert!(n >= 1, "row window must cover at least 1 row");
    let s = s.clone();
    let dom = *dom;
    Stream::from_fn(move |t: TimePoint| {
        let mut recent: Vec<B::C<X>> = Vec::new();
        for u in dom.iter().take_while(|u| *u <= t) {
            let c = s.eval(u);
            if !B::is_neutral(&c) {
                recent.push(c);
            }
        }
        let keep = recent.len().saturating_sub(n);
        Bag::from_elems(recent.into_iter().skip(keep))
    })
}

/// Row-based slide: keep the result at every n-th non-neutral instant,
/// counting from the first non-neutral instant of the domain; neutral
/// elsewhere.
pub fn row_slide<B: MonoidBase, X: Value>(
    n: usize,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Result<Stream<B, X>, Error> {
    if n == 0 {
        return Err(Error::ZeroRows(0));
    }
    let kept: std::collections::HashSet<TimePoint> = dom
        .iter()
        .filter(|t| !B::is_neutral(&s.eval(*t)))
        .enumerate()
        .filter(|(idx, _)| (idx + 1) % n == 0)
        .map(|(_, t)| t)
        .collect();
    let s = s.clone();
    Ok(Stream::from_fn(move |t| {
        if kept.contains(&t) {
            s.eval(t)
        } else {
            B::empty()
        }
    }))
}

/// Interpolating resample: wherever the reference stream is non-neutral,
/// apply `interp` to the timestamped samples of `s` collected from the
/// open interval `(t - width; t + width)`; neutral elsewhere. Missing data
/// yields the neutral element, never an error.
pub fn resample<B2: MonoidBase, Y: Value, F>(
    reference: &Stream<B2, Y>,
    width: u64,
    interp: F,
    s: &Stream<BagBase, f64>,
    dom: &FiniteDomain,
) -> Stream<BagBase, f64>
where
    F: Fn(&Bag<(TimePoint, f64)>, TimePoint) -> Option<f64> + Send + Sync + 'static,
{
    assert!(width >= 1, "interpolation scope must be at least 1 tick");
    let reference = reference.clone();
    let s = s.clone();
    let dom = *dom;
    Stream::from_fn(move |t: TimePoint| {
        if B2::is_neutral(&reference.eval(t)) {
            return Bag::new();
        }
        let iv = TimeInterval::new(
            TimePoint(t.0 - width as i64),
            TimePoint(t.0 + width as i64),
            false,
            false,
        );
        let mut samples: Bag<(TimePoint, f64)> = Bag::new();
        for u in interval_members(iv, &dom) {
            for (v, m) in s.eval(u).iter() {
                samples.insert((u, *v), *m);
            }
        }
        match interp(&samples, t) {
            Some(v) => Bag::from_elems([v]),
            None => Bag::new(),
        }
    })
}

/// Default interpolation: linear between the nearest sample at or before
/// the target and the nearest at or after it; nearest-sample when only one
/// side exists; none without samples. Several samples at the boundary tick
/// average with multiplicity weights, keeping the result insensitive to
/// bag insertion order.
pub fn linear_interp(samples: &Bag<(TimePoint, f64)>, target: TimePoint) -> Option<f64> {
    let tick_mean = |tick: TimePoint| -> Option<f64> {
        let mut sum = 0.0;
        let mut weight = 0u64;
        for ((u, v), m) in samples.iter() {
            if *u == tick {
                sum += v * (*m as f64);
                weight += m;
            }
        }
        (weight > 0).then(|| sum / weight as f64)
    };
    let before = samples
        .iter()
        .map(|((u, _), _)| *u)
        .filter(|u| *u <= target)
        .max();
    let after = samples
        .iter()
        .map(|((u, _), _)| *u)
        .filter(|u| *u >= target)
        .min();
    match (before, after) {
        (Some(b), Some(a)) if b == a => tick_mean(b),
        (Some(b), Some(a)) => {
            let vb = tick_mean(b)?;
            let va = tick_mean(a)?;
            let span = (a.0 - b.0) as f64;
            Some(vb + (va - vb) * (target.0 - b.0) as f64 / span)
        }
        (Some(b), None) => tick_mean(b),
        (None, Some(a)) => tick_mean(a),
        (None, None) => None,
    }
}

/// Bounded reordering over an arrival-ordered sequence.
///
/// A buffer of at most `slack + 1` elements: an element arriving at
/// position `i` must leave by position `i + slack`, and whenever the
/// oldest buffered element is due the buffer emits its minimum event time
/// (arrival order breaking ties), repeating until nothing is overdue.
/// The final drain continues in event-time order. Inversions within the
/// slack are corrected; larger displacements keep some disorder but the
/// pass never adds inversions. `slack = 0` returns the input unchanged.
pub fn bsort<X: Value>(slack: usize, input: &[(BiTime, X)]) -> Vec<(BiTime, X)> {
    let mut out: Vec<(BiTime, X)> = Vec::with_capacity(input.len());
    let mut buf: Vec<(usize, BiTime, X)> = Vec::new();

    let emit_min = |buf: &mut Vec<(usize, BiTime, X)>, out: &mut Vec<(BiTime, X)>| {
        let min = buf
            .iter()
            .enumerate()
            .min_by_key(|(_, (i, bt, _))| (*bt, *i))
            .map(|(pos, _)| pos)
            .expect("emit from non-empty buffer");
        let (_, bt, x) = buf.remove(min);
        out.push((bt, x));
    };

    for (k, (bt, x)) in input.iter().enumerate() {
        buf.push((k, *bt, x.clone()));
        while buf.iter().any(|(i, _, _)| i + slack <= k) {
            emit_min(&mut buf, &mut out);
        }
    }
    while !buf.is_empty() {
        emit_min(&mut buf, &mut out);
    }
    out
}

/// Keep bitemporal content only where the arrival delay is within `limit`
/// ticks; elements arriving before their event time are always kept.
pub fn filter_late<B: MonoidBase, X: Value>(
    limit: i64,
    s: &Stream<B, X, BiTime>,
) -> Stream<B, X, BiTime> {
    let s = s.clone();
    Stream::from_fn(move |bt: BiTime| {
        if bt.lateness() <= limit {
            s.eval(bt)
        } else {
            B::empty()
        }
    })
}
