//! Keyed partitioned evaluation.
//!
//! Keying is a projection into (key, payload) pairs rather than a
//! designated attribute. `partition_with` runs an operator once per
//! observed key over that key's substream and unions the recombined
//! results; `distribute` is the special case for streams that already
//! carry key/value pairs, where the operator must not touch the key —
//! making `distribute = id` a pure evaluation-strategy annotation.

use std::sync::Arc;

use crate::base::{MonoidBase, Value};
use crate::error::Error;
use crate::stream::{map_stream, sel_elem, union_stream, Stream};
use crate::time::FiniteDomain;

/// How payloads split into keys and values, and how per-key results
/// recombine into output payloads.
pub struct KeyedSplit<X: Value, K: Value + Ord, V: Value, V2: Value, X2: Value> {
    split: Arc<dyn Fn(&X) -> (K, V) + Send + Sync>,
    recombine: Arc<dyn Fn(&K, &V2) -> X2 + Send + Sync>,
}

impl<X: Value, K: Value + Ord, V: Value, V2: Value, X2: Value> KeyedSplit<X, K, V, V2, X2> {
    pub fn new(
        split: impl Fn(&X) -> (K, V) + Send + Sync + 'static,
        recombine: impl Fn(&K, &V2) -> X2 + Send + Sync + 'static,
    ) -> Self {
        KeyedSplit {
            split: Arc::new(split),
            recombine: Arc::new(recombine),
        }
    }

    pub fn split(&self, x: &X) -> (K, V) {
        (self.split)(x)
    }

    pub fn recombine(&self, k: &K, v: &V2) -> X2 {
        (self.recombine)(k, v)
    }
}

/// All keys observed in `s` over `dom`, ascending and duplicate-free.
/// Keys are processed in this order, which makes the result independent
/// of container iteration order even for non-commutative bases.
fn observed_keys<B, X, K, V, V2, X2>(
    ks: &KeyedSplit<X, K, V, V2, X2>,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Vec<K>
where
    B: MonoidBase,
    X: Value,
    K: Value + Ord,
    V: Value,
    V2: Value,
    X2: Value,
{
    let mut keys: Vec<K> = Vec::new();
    for t in dom.iter() {
        for x in B::elements(&s.eval(t)) {
            let (k, _) = ks.split(&x);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
    }
    keys.sort();
    keys
}

/// Evaluate `op` once per key over the substream of that key's values and
/// union the recombined per-key results pointwise.
///
/// `op` must stay within the domain it is given; the key universe is the
/// set of keys observed anywhere in `dom`.
pub fn partition_with<B, X, K, V, V2, X2>(
    ks: &KeyedSplit<X, K, V, V2, X2>,
    op: impl Fn(&Stream<B, V>) -> Stream<B, V2>,
    s: &Stream<B, X>,
    dom: &FiniteDomain,
) -> Stream<B, X2>
where
    B: MonoidBase,
    X: Value,
    K: Value + Ord,
    V: Value,
    V2: Value,
    X2: Value,
{
    let mut result: Stream<B, X2> = Stream::empty();
    for key in observed_keys(ks, s, dom) {
        let split = Arc::clone(&ks.split);
        let key_for_filter = key.clone();
        let filtered = sel_elem(move |x: &X| split(&x.clone()).0 == key_for_filter, s);
        let split = Arc::clone(&ks.split);
        let values = map_stream(move |x: &X| split(x).1, &filtered);
        let transformed = op(&values);
        let recombine = Arc::clone(&ks.recombine);
        let key_for_merge = key.clone();
        let merged = map_stream(move |v2: &V2| recombine(&key_for_merge, v2), &transformed);
        result = union_stream(&result, &merged);
    }
    result
}

/// Keyed evaluation for streams of (key, value) pairs: the key is
/// duplicated into the payload so `op` can read it, and recombination
/// re-attaches the partition key after verifying that `op` did not change
/// it anywhere in `dom`.
pub fn distribute<B, K, V, V2>(
    op: impl Fn(&Stream<B, (K, V)>) -> Stream<B, (K, V2)>,
    s: &Stream<B, (K, V)>,
    dom: &FiniteDomain,
) -> Result<Stream<B, (K, V2)>, Error>
where
    B: MonoidBase,
    K: Value + Ord,
    V: Value,
    V2: Value,
{
    let ks: KeyedSplit<(K, V), K, (K, V), (K, V2), (K, V2)> = KeyedSplit::new(
        |pair: &(K, V)| (pair.0.clone(), pair.clone()),
        |k: &K, out: &(K, V2)| (k.clone(), out.1.clone()),
    );

    // first pass: run op per key and check the key invariance eagerly
    for key in observed_keys(&ks, s, dom) {
        let probe_key = key.clone();
        let substream = sel_elem(move |pair: &(K, V)| pair.0 == probe_key, s);
        let transformed = op(&substream);
        for t in dom.iter() {
            for (k2, _) in B::elements(&transformed.eval(t)) {
                if k2 != key {
                    return Err(Error::KeyChanged {
                        expected: format!("{key:?}"),
                        found: format!("{k2:?}"),
                        at: t,
                    });
                }
            }
        }
    }

    Ok(partition_with(&ks, op, s, dom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Bag, BagBase};
    use crate::time::TimePoint;
    use crate::windows::window_time;

    fn t(tick: i64) -> TimePoint {
        TimePoint(tick)
    }

    type Keyed = (char, i32);

    fn keyed_stream(rows: &[(i64, &[Keyed])]) -> Stream<BagBase, Keyed> {
        Stream::from_table(
            rows.iter()
                .map(|(tick, xs)| (t(*tick), Bag::from_elems(xs.iter().copied()))),
        )
    }

    fn identity_pairing() -> KeyedSplit<Keyed, char, i32, i32, Keyed> {
        KeyedSplit::new(|pair: &Keyed| *pair, |k: &char, v: &i32| (*k, *v))
    }

    #[test]
    fn elementwise_op_equals_ungrouped_application() {
        let dom = FiniteDomain::new(0, 3);
        let s = keyed_stream(&[(1, &[('A', 1), ('B', 5)])]);
        let grouped = partition_with(&identity_pairing(), |sub| map_stream(|v| v + 1, sub), &s, &dom);
        assert_eq!(grouped.eval(t(1)), Bag::from_elems([('A', 2), ('B', 6)]));

        // grouping transparency: same as mapping the whole stream
        let ungrouped = map_stream(|(k, v): &Keyed| (*k, v + 1), &s);
        assert!(grouped.eq_on(&ungrouped, dom.iter()));
    }

    #[test]
    fn per_key_window_sees_only_same_key_history() {
        let dom = FiniteDomain::new(0, 4);
        let s = keyed_stream(&[(1, &[('A', 1)]), (2, &[('B', 10)]), (3, &[('A', 2)])]);
        let grouped = partition_with(
            &identity_pairing(),
            |sub| window_time(2, sub, &FiniteDomain::new(0, 4)),
            &s,
            &dom,
        );
        // oracle: manual per-key windows
        assert_eq!(grouped.eval(t(2)), Bag::from_elems([('A', 1), ('B', 10)]));
        assert_eq!(grouped.eval(t(3)), Bag::from_elems([('B', 10), ('A', 2)]));
        assert_eq!(grouped.eval(t(4)), Bag::from_elems([('A', 2)]));
    }

    #[test]
    fn empty_stream_stays_empty() {
        let dom = FiniteDomain::new(0, 3);
        let empty: Stream<BagBase, Keyed> = Stream::empty();
        let out = partition_with(
            &identity_pairing(),
            |sub| window_time(3, sub, &FiniteDomain::new(0, 3)),
            &empty,
            &dom,
        );
        assert!(out.eq_on(&Stream::empty(), dom.iter()));
    }

    #[test]
    fn distribute_of_identity_is_identity() {
        let dom = FiniteDomain::new(0, 4);
        let s = keyed_stream(&[(0, &[('A', 1), ('A', 1)]), (2, &[('B', 3)]), (4, &[('C', 9)])]);
        let out = distribute(|sub| sub.clone(), &s, &dom).unwrap();
        assert!(out.eq_on(&s, dom.iter()));
    }

    #[test]
    fn distribute_equals_direct_application_for_key_preserving_ops() {
        let dom = FiniteDomain::new(0, 4);
        let s = keyed_stream(&[(0, &[('A', 1)]), (1, &[('B', 2), ('A', 3)]), (3, &[('B', 4)])]);
        let op = |sub: &Stream<BagBase, Keyed>| map_stream(|(k, v): &Keyed| (*k, v * 10), sub);
        let via_distribute = distribute(op, &s, &dom).unwrap();
        let direct = op(&s);
        assert!(via_distribute.eq_on(&direct, dom.iter()));
    }

    #[test]
    fn key_rewriting_op_is_rejected() {
        let dom = FiniteDomain::new(0, 2);
        let s = keyed_stream(&[(1, &[('A', 1)])]);
        let rekey = |sub: &Stream<BagBase, Keyed>| map_stream(|(_, v): &Keyed| ('Z', *v), sub);
        let err = distribute(rekey, &s, &dom).unwrap_err();
        assert!(matches!(err, Error::KeyChanged { .. }));
    }

    #[test]
    fn key_processing_order_does_not_matter() {
        // same rows inserted in different orders produce equal streams
        let dom = FiniteDomain::new(0, 2);
        let s1 = keyed_stream(&[(1, &[('A', 1), ('B', 2)])]);
        let s2 = keyed_stream(&[(1, &[('B', 2), ('A', 1)])]);
        let op = |sub: &Stream<BagBase, i32>| map_stream(|v: &i32| v + 100, sub);
        let o1 = partition_with(&identity_pairing(), op, &s1, &dom);
        let o2 = partition_with(&identity_pairing(), op, &s2, &dom);
        assert!(o1.eq_on(&o2, dom.iter()));
    }
}
