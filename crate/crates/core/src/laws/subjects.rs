//! Monad subjects for the harness: the base containers themselves and
//! streams over them, plus the per-base container generators.

use std::collections::HashMap;
use std::marker::PhantomData;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use super::MonadSubject;
use crate::base::{Bag, BagBase, Base, EqSet, IdentityBase, MaybeBase, SeqBase, SetBase, Value};
use crate::stream::{flatten_stream, map_stream, unit_stream, Stream};
use crate::time::FiniteDomain;

/// Finite container sampling per base. Exhaustive within small bounds:
/// every multiplicity assignment up to 2 for bags, every subset for sets,
/// every sequence up to length 2.
pub trait ContainerSamples: Base {
    const NAME: &'static str;

    fn container_samples<X: Value>(carrier: &[X], rng: &mut StdRng) -> Vec<Self::C<X>>;
}

impl ContainerSamples for BagBase {
    const NAME: &'static str = "Bag";

    fn container_samples<X: Value>(carrier: &[X], _rng: &mut StdRng) -> Vec<Bag<X>> {
        let mut out = Vec::new();
        let total = 3usize.pow(carrier.len() as u32);
        for code in 0..total {
            let mut bag = Bag::new();
            let mut rest = code;
            for x in carrier {
                bag.insert(x.clone(), (rest % 3) as u64);
                rest /= 3;
            }
            out.push(bag);
        }
        out
    }
}

impl ContainerSamples for SetBase {
    const NAME: &'static str = "Set";

    fn container_samples<X: Value>(carrier: &[X], _rng: &mut StdRng) -> Vec<EqSet<X>> {
        let mut out = Vec::new();
        for code in 0..(1usize << carrier.len()) {
            let set = EqSet::from_elems(
                carrier
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code & (1 << i) != 0)
                    .map(|(_, x)| x.clone()),
            );
            out.push(set);
        }
        out
    }
}

impl ContainerSamples for MaybeBase {
    const NAME: &'static str = "Maybe";

    fn container_samples<X: Value>(carrier: &[X], _rng: &mut StdRng) -> Vec<Option<X>> {
        let mut out = vec![None];
        out.extend(carrier.iter().cloned().map(Some));
        out
    }
}

impl ContainerSamples for IdentityBase {
    const NAME: &'static str = "Identity";

    fn container_samples<X: Value>(carrier: &[X], _rng: &mut StdRng) -> Vec<X> {
        carrier.to_vec()
    }
}

impl ContainerSamples for SeqBase {
    const NAME: &'static str = "Seq";

    fn container_samples<X: Value>(carrier: &[X], _rng: &mut StdRng) -> Vec<Vec<X>> {
        let mut out = vec![Vec::new()];
        for x in carrier {
            out.push(vec![x.clone()]);
        }
        for x in carrier {
            for y in carrier {
                out.push(vec![x.clone(), y.clone()]);
            }
        }
        out
    }
}

/// A base container as a monad subject.
pub struct BaseMonad<B>(PhantomData<fn() -> B>);

impl<B> BaseMonad<B> {
    pub fn new() -> Self {
        BaseMonad(PhantomData)
    }
}

impl<B> Default for BaseMonad<B> {
    fn default() -> Self {
        BaseMonad::new()
    }
}

impl<B> Clone for BaseMonad<B> {
    fn clone(&self) -> Self {
        BaseMonad(PhantomData)
    }
}

impl<B: Base + ContainerSamples> MonadSubject for BaseMonad<B> {
    type M<X: Value> = B::C<X>;

    fn name(&self) -> String {
        B::NAME.to_string()
    }

    fn unit<X: Value>(&self, x: &X) -> B::C<X> {
        B::unit(x.clone())
    }

    fn map<X: Value, Y: Value>(
        &self,
        f: Arc<dyn Fn(&X) -> Y + Send + Sync>,
        m: &B::C<X>,
    ) -> B::C<Y> {
        B::map(|x| f(x), m)
    }

    fn flatten<X: Value>(&self, mm: &B::C<B::C<X>>) -> B::C<X> {
        B::flatten(mm)
    }

    fn equal<X: Value>(&self, a: &B::C<X>, b: &B::C<X>) -> bool {
        a == b
    }

    fn samples<X: Value>(&self, carrier: &[X], rng: &mut StdRng) -> Vec<B::C<X>> {
        B::container_samples(carrier, rng)
    }
}

/// Streams over a base as a monad subject; equality is extensional over
/// the subject's domain and values are random total tables.
pub struct StreamMonad<B> {
    dom: FiniteDomain,
    marker: PhantomData<fn() -> B>,
}

impl<B> StreamMonad<B> {
    pub fn new(dom: FiniteDomain) -> Self {
        StreamMonad { dom, marker: PhantomData }
    }

    pub fn domain(&self) -> &FiniteDomain {
        &self.dom
    }
}

impl<B> Clone for StreamMonad<B> {
    fn clone(&self) -> Self {
        StreamMonad { dom: self.dom, marker: PhantomData }
    }
}

const STREAM_SAMPLES: usize = 8;

impl<B: Base + ContainerSamples> MonadSubject for StreamMonad<B> {
    type M<X: Value> = Stream<B, X>;

    fn name(&self) -> String {
        format!("Stream<{}>", B::NAME)
    }

    fn unit<X: Value>(&self, x: &X) -> Stream<B, X> {
        unit_stream(x.clone())
    }

    fn map<X: Value, Y: Value>(
        &self,
        f: Arc<dyn Fn(&X) -> Y + Send + Sync>,
        m: &Stream<B, X>,
    ) -> Stream<B, Y> {
        map_stream(move |x| f(x), m)
    }

    fn flatten<X: Value>(&self, mm: &Stream<B, Stream<B, X>>) -> Stream<B, X> {
        flatten_stream(mm)
    }

    fn equal<X: Value>(&self, a: &Stream<B, X>, b: &Stream<B, X>) -> bool {
        a.eq_on(b, self.dom.iter())
    }

    fn samples<X: Value>(&self, carrier: &[X], rng: &mut StdRng) -> Vec<Stream<B, X>> {
        let pool = B::container_samples(carrier, rng);
        let first = self.dom.first();
        (0..STREAM_SAMPLES)
            .map(|_| {
                let mut table: HashMap<_, B::C<X>> = HashMap::new();
                for t in self.dom.iter() {
                    table.insert(t, pool[rng.random_range(0..pool.len())].clone());
                }
                Stream::from_fn(move |t| {
                    table.get(&t).cloned().unwrap_or_else(|| table[&first].clone())
                })
            })
            .collect()
    }

    fn describe<X: Value>(&self, m: &Stream<B, X>) -> String {
        let cells: Vec<String> = self
            .dom
            .iter()
            .map(|t| format!("{} -> {:?}", t.tick(), m.eval(t)))
            .collect();
        format!("{{{}}}", cells.join(", "))
    }
}
