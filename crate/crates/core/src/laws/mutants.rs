//! Deliberately broken instances used to validate the harness itself:
//! every law check must be able to fail, and these make it fail.

use std::sync::Arc;

use rand::rngs::StdRng;

use super::subjects::ContainerSamples;
use super::MonadSubject;
use crate::base::{Bag, BagBase, Base, MaybeBase, SeqBase, Value};
use crate::physical::{reconstruct_events, snapshot_events, EventTable, SnapshotRepr};
use crate::time::{FiniteDomain, TimePoint};

/// Bag monad whose flatten silently drops one occurrence of the first
/// entry — the textbook way to lose an element in a fold.
#[derive(Clone, Default)]
pub struct BrokenFlattenBag;

impl MonadSubject for BrokenFlattenBag {
    type M<X: Value> = Bag<X>;

    fn name(&self) -> String {
        "Bag[broken flatten]".to_string()
    }

    fn unit<X: Value>(&self, x: &X) -> Bag<X> {
        BagBase::unit(x.clone())
    }

    fn map<X: Value, Y: Value>(&self, f: Arc<dyn Fn(&X) -> Y + Send + Sync>, m: &Bag<X>) -> Bag<Y> {
        BagBase::map(|x| f(x), m)
    }

    fn flatten<X: Value>(&self, mm: &Bag<Bag<X>>) -> Bag<X> {
        let full = BagBase::flatten(mm);
        let mut out = Bag::new();
        for (i, (x, n)) in full.iter().enumerate() {
            let n = if i == 0 { n - 1 } else { *n };
            out.insert(x.clone(), n);
        }
        out
    }

    fn equal<X: Value>(&self, a: &Bag<X>, b: &Bag<X>) -> bool {
        a == b
    }

    fn samples<X: Value>(&self, carrier: &[X], rng: &mut StdRng) -> Vec<Bag<X>> {
        BagBase::container_samples(carrier, rng)
    }
}

/// Maybe monad whose unit loses its argument.
#[derive(Clone, Default)]
pub struct BrokenUnitMaybe;

impl MonadSubject for BrokenUnitMaybe {
    type M<X: Value> = Option<X>;

    fn name(&self) -> String {
        "Maybe[broken unit]".to_string()
    }

    fn unit<X: Value>(&self, _x: &X) -> Option<X> {
        None
    }

    fn map<X: Value, Y: Value>(
        &self,
        f: Arc<dyn Fn(&X) -> Y + Send + Sync>,
        m: &Option<X>,
    ) -> Option<Y> {
        MaybeBase::map(|x| f(x), m)
    }

    fn flatten<X: Value>(&self, mm: &Option<Option<X>>) -> Option<X> {
        MaybeBase::flatten(mm)
    }

    fn equal<X: Value>(&self, a: &Option<X>, b: &Option<X>) -> bool {
        a == b
    }

    fn samples<X: Value>(&self, carrier: &[X], rng: &mut StdRng) -> Vec<Option<X>> {
        MaybeBase::container_samples(carrier, rng)
    }
}

/// Sequence monad whose map truncates to the first element.
#[derive(Clone, Default)]
pub struct BrokenMapSeq;

impl MonadSubject for BrokenMapSeq {
    type M<X: Value> = Vec<X>;

    fn name(&self) -> String {
        "Seq[broken map]".to_string()
    }

    fn unit<X: Value>(&self, x: &X) -> Vec<X> {
        SeqBase::unit(x.clone())
    }

    fn map<X: Value, Y: Value>(&self, f: Arc<dyn Fn(&X) -> Y + Send + Sync>, m: &Vec<X>) -> Vec<Y> {
        m.first().map(|x| f(x)).into_iter().collect()
    }

    fn flatten<X: Value>(&self, mm: &Vec<Vec<X>>) -> Vec<X> {
        SeqBase::flatten(mm)
    }

    fn equal<X: Value>(&self, a: &Vec<X>, b: &Vec<X>) -> bool {
        a == b
    }

    fn samples<X: Value>(&self, carrier: &[X], rng: &mut StdRng) -> Vec<Vec<X>> {
        SeqBase::container_samples(carrier, rng)
    }
}

/// Event-table representation whose reconstruct drops the domain's last
/// tick, so the right-inverse law fails exactly there.
pub struct TruncatedEventModel;

impl SnapshotRepr for TruncatedEventModel {
    type Repr<X: Value> = EventTable<X>;

    fn snapshot<X: Value>(r: &EventTable<X>, t: TimePoint) -> Bag<X> {
        snapshot_events(r, t)
    }

    fn reconstruct<X: Value>(
        f: &(dyn Fn(TimePoint) -> Bag<X> + '_),
        dom: &FiniteDomain,
    ) -> EventTable<X> {
        let last = dom.last();
        reconstruct_events(|t| if t == last { Bag::new() } else { f(t) }, dom)
    }
}
