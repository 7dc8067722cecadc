//! Named law suites with their default case counts, shared by the
//! integration tests and the command-line `--check-laws` mode.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::mutants::{BrokenFlattenBag, BrokenMapSeq, BrokenUnitMaybe, TruncatedEventModel};
use super::{
    check_monad_laws, check_monoid_laws, check_right_inverse, check_snapshot_reducible,
    check_snapshot_reducible2, random_bag_fn, random_bag_stream, BaseMonad, LawInputs, LawResult,
    StreamMonad,
};
use crate::base::{
    cross_product, filter_elems, Bag, BagBase, Base, IdentityBase, MaybeBase, MonoidBase, SeqBase,
    SetBase, Sum,
};
use crate::kinds::{infer_kinds, join_kind, KindNode, KindPipeline, StreamKind};
use crate::physical::{
    as_stream, derive_monadic, right_inverse_probes, EventModel, IntervalModel, SnapshotRepr,
};
use crate::stream::{
    cross, disjoint_union, flatten_stream, map_stream, sel_elem, sel_time, union_stream, Stream,
};
use crate::time::{FiniteDomain, TimePoint};
use crate::windows::window_time;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub results: Vec<LawResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "monad", "monoid", "snapshot", "inverse", "derived", "kinds", "mutation",
];

/// Run one named suite, or every suite for `"all"`. Unknown names return
/// `None`.
pub fn run_suites(name: &str) -> Option<Vec<SuiteReport>> {
    match name {
        "all" => Some(SUITE_NAMES.iter().map(|n| run_one(n)).collect()),
        n if SUITE_NAMES.contains(&n) => Some(vec![run_one(n)]),
        _ => None,
    }
}

fn run_one(name: &str) -> SuiteReport {
    match name {
        "monad" => monad_suite(),
        "monoid" => monoid_suite(1000),
        "snapshot" => snapshot_suite(100),
        "inverse" => inverse_suite(100),
        "derived" => derived_suite(100),
        "kinds" => kinds_suite(),
        "mutation" => mutation_suite(),
        other => unreachable!("unknown suite {other}"),
    }
}

/// The seven monad laws for the five base containers and for streams over
/// each of them, exhaustively over carriers of three payloads and a
/// six-tick domain.
pub fn monad_suite() -> SuiteReport {
    let dom = FiniteDomain::new(0, 5);
    let inputs = LawInputs::default();
    let mut results = Vec::new();
    results.extend(check_monad_laws(&BaseMonad::<BagBase>::new(), &inputs));
    results.extend(check_monad_laws(&BaseMonad::<SetBase>::new(), &inputs));
    results.extend(check_monad_laws(&BaseMonad::<MaybeBase>::new(), &inputs));
    results.extend(check_monad_laws(&BaseMonad::<IdentityBase>::new(), &inputs));
    results.extend(check_monad_laws(&BaseMonad::<SeqBase>::new(), &inputs));
    results.extend(check_monad_laws(&StreamMonad::<BagBase>::new(dom), &inputs));
    results.extend(check_monad_laws(&StreamMonad::<SetBase>::new(dom), &inputs));
    results.extend(check_monad_laws(&StreamMonad::<MaybeBase>::new(dom), &inputs));
    results.extend(check_monad_laws(&StreamMonad::<IdentityBase>::new(dom), &inputs));
    results.extend(check_monad_laws(&StreamMonad::<SeqBase>::new(dom), &inputs));
    SuiteReport { suite: "monad", results }
}

/// Monoid identity and associativity on random triples for the four
/// monoid bases.
pub fn monoid_suite(triples: usize) -> SuiteReport {
    let mut results = Vec::new();
    results.extend(check_monoid_laws::<BagBase>(triples, 101));
    results.extend(check_monoid_laws::<SetBase>(triples, 102));
    results.extend(check_monoid_laws::<MaybeBase>(triples, 103));
    results.extend(check_monoid_laws::<SeqBase>(triples, 104));
    SuiteReport { suite: "monoid", results }
}

/// Commutation of the snapshot-reducible operators with their per-instant
/// base operators on random bag streams, plus the window negative control.
pub fn snapshot_suite(cases: usize) -> SuiteReport {
    let dom = FiniteDomain::new(0, 5);
    let mut rng = StdRng::seed_from_u64(2024);
    let mut results = Vec::new();

    let mut unary = |law: &str,
                     rng: &mut StdRng,
                     op_s: &dyn Fn(&Stream<BagBase, i32>) -> Stream<BagBase, i32>,
                     op_base: &dyn Fn(&Bag<i32>) -> Bag<i32>| {
        let mut failure = None;
        for case in 0..cases {
            let s = random_bag_stream(&dom, rng);
            let outcome = check_snapshot_reducible(op_s, op_base, &s, dom.iter());
            if !outcome.pass && failure.is_none() {
                failure = Some(format!("case {case}: {:?}", outcome.detail));
            }
        }
        results.push(match failure {
            None => LawResult::pass(law, "snapshot-reducible"),
            Some(ce) => LawResult::fail(law, "snapshot-reducible", ce),
        });
    };

    unary(
        "map_stream",
        &mut rng,
        &|s| map_stream(|x: &i32| x * 2 + 1, s),
        &|c| BagBase::map(|x: &i32| x * 2 + 1, c),
    );
    unary(
        "sel_elem",
        &mut rng,
        &|s| sel_elem(|x: &i32| x % 2 == 0, s),
        &|c| filter_elems::<BagBase, _>(|x: &i32| x % 2 == 0, c),
    );
    unary(
        "sel_time",
        &mut rng,
        &|s| sel_time(|c: &Bag<i32>| c.cardinality() >= 2, s),
        &|c| {
            if c.cardinality() >= 2 {
                c.clone()
            } else {
                Bag::new()
            }
        },
    );

    let mut binary = |law: &str,
                      rng: &mut StdRng,
                      op_s: &dyn Fn(&Stream<BagBase, i32>, &Stream<BagBase, i32>) -> Stream<BagBase, (i32, i32)>,
                      op_base: &dyn Fn(&Bag<i32>, &Bag<i32>) -> Bag<(i32, i32)>| {
        let mut failure = None;
        for case in 0..cases {
            let s1 = random_bag_stream(&dom, rng);
            let s2 = random_bag_stream(&dom, rng);
            let outcome = check_snapshot_reducible2(op_s, op_base, &s1, &s2, dom.iter());
            if !outcome.pass && failure.is_none() {
                failure = Some(format!("case {case}: {:?}", outcome.detail));
            }
        }
        results.push(match failure {
            None => LawResult::pass(law, "snapshot-reducible"),
            Some(ce) => LawResult::fail(law, "snapshot-reducible", ce),
        });
    };

    binary("cross", &mut rng, &|a, b| cross(a, b), &|a, b| {
        cross_product::<BagBase, _, _>(a, b)
    });

    // union keeps the payload type; run it through the binary checker by
    // tagging with a throwaway pair
    {
        let mut failure = None;
        for case in 0..cases {
            let s1 = random_bag_stream(&dom, &mut rng);
            let s2 = random_bag_stream(&dom, &mut rng);
            let outcome = check_snapshot_reducible2(
                |a, b| union_stream(a, b),
                |a, b| BagBase::combine(a, b),
                &s1,
                &s2,
                dom.iter(),
            );
            if !outcome.pass && failure.is_none() {
                failure = Some(format!("case {case}: {:?}", outcome.detail));
            }
        }
        results.push(match failure {
            None => LawResult::pass("union_stream", "snapshot-reducible"),
            Some(ce) => LawResult::fail("union_stream", "snapshot-reducible", ce),
        });
    }
    {
        let mut failure = None;
        for case in 0..cases {
            let s1 = random_bag_stream(&dom, &mut rng);
            let s2 = random_bag_stream(&dom, &mut rng);
            let outcome = check_snapshot_reducible2(
                |a, b| disjoint_union(a, b),
                |a, b| {
                    BagBase::combine(
                        &BagBase::map(|x: &i32| Sum::Left(*x), a),
                        &BagBase::map(|y: &i32| Sum::Right(*y), b),
                    )
                },
                &s1,
                &s2,
                dom.iter(),
            );
            if !outcome.pass && failure.is_none() {
                failure = Some(format!("case {case}: {:?}", outcome.detail));
            }
        }
        results.push(match failure {
            None => LawResult::pass("disjoint_union", "snapshot-reducible"),
            Some(ce) => LawResult::fail("disjoint_union", "snapshot-reducible", ce),
        });
    }

    // negative control: a window of width >= 2 must fail the same check
    {
        let mut failures = 0usize;
        for _ in 0..cases {
            let s = random_bag_stream(&dom, &mut rng);
            let outcome = check_snapshot_reducible(
                |s| window_time(2, s, &dom),
                |c: &Bag<i32>| c.clone(),
                &s,
                dom.iter(),
            );
            if !outcome.pass {
                failures += 1;
            }
        }
        // deterministic witness independent of the random draw
        let witness: Stream<BagBase, i32> =
            Stream::from_table([(TimePoint(0), Bag::from_elems([1]))]);
        let witness_fails = !check_snapshot_reducible(
            |s| window_time(2, s, &dom),
            |c: &Bag<i32>| c.clone(),
            &witness,
            dom.iter(),
        )
        .pass;
        results.push(if failures > 0 && witness_fails {
            LawResult::pass("window_time(2)", "not-snapshot-reducible")
        } else {
            LawResult::fail(
                "window_time(2)",
                "not-snapshot-reducible",
                format!("commutation unexpectedly held on all {cases} random instances"),
            )
        });
    }

    SuiteReport { suite: "snapshot", results }
}

/// Right-inverse round trips for both table representations on random
/// stream functions, plus the split-interval witness.
pub fn inverse_suite(cases: usize) -> SuiteReport {
    let dom = FiniteDomain::new(0, 6);
    let mut rng = StdRng::seed_from_u64(31);
    let mut fns: Vec<Box<dyn Fn(TimePoint) -> Bag<i32> + Send + Sync>> = right_inverse_probes(&dom);
    fns.extend((0..cases).map(|_| random_bag_fn(&dom, &mut rng)));

    let mut results = Vec::new();
    for (subject, outcome) in [
        ("EventTable", check_right_inverse::<EventModel>(&fns, &dom)),
        ("IntervalTable", check_right_inverse::<IntervalModel>(&fns, &dom)),
    ] {
        results.push(match outcome.pass {
            true => LawResult::pass(subject, "right-inverse"),
            false => LawResult::fail(
                subject,
                "right-inverse",
                format!("{:?} at {:?}", outcome.detail, outcome.failing_at),
            ),
        });
    }

    // split validity intervals denote the same stream
    {
        use crate::physical::{snapshot_intervals, IntervalTable};
        use crate::time::TimeInterval;
        let whole = IntervalTable::from_pairs([('e', TimeInterval::closed_open(1, 5))]);
        let split = IntervalTable::from_pairs([
            ('e', TimeInterval::closed_open(1, 3)),
            ('e', TimeInterval::closed_open(3, 5)),
        ]);
        let equal = (-2..9).all(|tick| {
            snapshot_intervals(&whole, TimePoint(tick)) == snapshot_intervals(&split, TimePoint(tick))
        });
        results.push(if equal {
            LawResult::pass("IntervalTable", "split-interval-equivalence")
        } else {
            LawResult::fail(
                "IntervalTable",
                "split-interval-equivalence",
                "split representation has a differing snapshot".to_string(),
            )
        });
    }

    SuiteReport { suite: "inverse", results }
}

/// Derived map/unit/flatten agree with the reference operators through
/// snapshot, for both representations, on random cases.
pub fn derived_suite(cases: usize) -> SuiteReport {
    let dom = FiniteDomain::new(0, 5);
    let mut results = Vec::new();
    results.extend(derived_model_results::<EventModel>("EventTable", cases, &dom, 57));
    results.extend(derived_model_results::<IntervalModel>("IntervalTable", cases, &dom, 58));
    SuiteReport { suite: "derived", results }
}

fn derived_model_results<M: SnapshotRepr>(
    subject: &str,
    cases: usize,
    dom: &FiniteDomain,
    seed: u64,
) -> Vec<LawResult> {
    let mut rng = StdRng::seed_from_u64(seed);
    let ops = match derive_monadic::<M>(dom) {
        Ok(ops) => ops,
        Err(e) => {
            return vec![LawResult::fail(subject, "derive-monadic", format!("{e}"))];
        }
    };

    let mut map_failure = None;
    let mut unit_failure = None;
    let mut flatten_failure = None;

    for case in 0..cases {
        // map
        let f = random_bag_fn(dom, &mut rng);
        let table = M::reconstruct(&*f, dom);
        let derived = ops.map(|x: &i32| x * 3 - 1, &table);
        let reference = map_stream(|x: &i32| x * 3 - 1, &as_stream::<M, _>(&table));
        for t in dom.iter() {
            if M::snapshot(&derived, t) != reference.eval(t) && map_failure.is_none() {
                map_failure = Some(format!("case {case} at {t:?}"));
            }
        }

        // unit
        let payload = rng.random_range(0..5);
        let derived = ops.unit(payload);
        for t in dom.iter() {
            if M::snapshot(&derived, t) != BagBase::unit(payload) && unit_failure.is_none() {
                unit_failure = Some(format!("case {case} at {t:?}"));
            }
        }

        // flatten: two random inner tables, a random outer arrangement
        let inner_a = M::reconstruct(&*random_bag_fn(dom, &mut rng), dom);
        let inner_b = M::reconstruct(&*random_bag_fn(dom, &mut rng), dom);
        let mut outer_rows: Vec<(TimePoint, Bag<M::Repr<i32>>)> = Vec::new();
        for t in dom.iter() {
            let mut bag = Bag::new();
            bag.insert(inner_a.clone(), rng.random_range(0..3u64));
            bag.insert(inner_b.clone(), rng.random_range(0..2u64));
            if !bag.is_empty() {
                outer_rows.push((t, bag));
            }
        }
        let outer_fn = {
            let rows = outer_rows.clone();
            move |t: TimePoint| {
                rows.iter()
                    .find(|(u, _)| *u == t)
                    .map(|(_, bag)| bag.clone())
                    .unwrap_or_default()
            }
        };
        let outer = M::reconstruct(&outer_fn, dom);
        let derived = ops.flatten(&outer);

        let sa = as_stream::<M, _>(&inner_a);
        let sb = as_stream::<M, _>(&inner_b);
        let nested: Stream<BagBase, Stream<BagBase, i32>> = Stream::from_table(
            outer_rows.iter().map(|(t, bag)| {
                let mut streams = Bag::new();
                for (inner, n) in bag.iter() {
                    let s = if *inner == inner_a { sa.clone() } else { sb.clone() };
                    streams.insert(s, *n);
                }
                (*t, streams)
            }),
        );
        let reference = flatten_stream(&nested);
        for t in dom.iter() {
            if M::snapshot(&derived, t) != reference.eval(t) && flatten_failure.is_none() {
                flatten_failure = Some(format!("case {case} at {t:?}"));
            }
        }
    }

    let entry = |law: &str, failure: Option<String>| match failure {
        None => LawResult::pass(subject, law),
        Some(ce) => LawResult::fail(subject, law, ce),
    };
    vec![
        entry("derived-map", map_failure),
        entry("derived-unit", unit_failure),
        entry("derived-flatten", flatten_failure),
    ]
}

/// The kind join table, its algebraic laws, and the three reference
/// pipelines.
pub fn kinds_suite() -> SuiteReport {
    use StreamKind::*;
    let mut results = Vec::new();

    let table_ok = [
        (Eternal, Eternal, Eternal),
        (Eternal, State, State),
        (Eternal, Event, Event),
        (State, State, State),
        (State, Event, Event),
        (Event, Event, Event),
    ]
    .into_iter()
    .all(|(a, b, want)| join_kind(a, b) == want && join_kind(b, a) == want);
    results.push(if table_ok {
        LawResult::pass("StreamKind", "join-table")
    } else {
        LawResult::fail("StreamKind", "join-table", "table mismatch".to_string())
    });

    let all = [Eternal, State, Event];
    let comm = all
        .iter()
        .all(|&a| all.iter().all(|&b| join_kind(a, b) == join_kind(b, a)));
    let assoc = all.iter().all(|&a| {
        all.iter().all(|&b| {
            all.iter()
                .all(|&c| join_kind(join_kind(a, b), c) == join_kind(a, join_kind(b, c)))
        })
    });
    results.push(if comm && assoc {
        LawResult::pass("StreamKind", "join-commutative-associative")
    } else {
        LawResult::fail(
            "StreamKind",
            "join-commutative-associative",
            "algebraic law violated".to_string(),
        )
    });

    let pipelines = [
        (
            "cross(ev, et)",
            KindPipeline::new(vec![
                KindNode::Source { kind: Some(Event) },
                KindNode::Source { kind: Some(Eternal) },
                KindNode::SnapshotReducible { inputs: vec![0, 1] },
            ]),
            Event,
        ),
        (
            "window(ev)",
            KindPipeline::new(vec![
                KindNode::Source { kind: Some(Event) },
                KindNode::Collecting { input: 0 },
            ]),
            State,
        ),
        (
            "et-only",
            KindPipeline::new(vec![
                KindNode::Source { kind: Some(Eternal) },
                KindNode::Source { kind: Some(Eternal) },
                KindNode::SnapshotReducible { inputs: vec![0, 1] },
            ]),
            Eternal,
        ),
    ];
    for (name, pipeline, want) in pipelines {
        let got = infer_kinds(&pipeline).map(|kinds| kinds[pipeline.sink()]);
        results.push(match got {
            Ok(kind) if kind == want => LawResult::pass(name, "inferred-kind"),
            Ok(kind) => LawResult::fail(name, "inferred-kind", format!("got {kind}, want {want}")),
            Err(e) => LawResult::fail(name, "inferred-kind", format!("{e}")),
        });
    }

    SuiteReport { suite: "kinds", results }
}

/// Harness validation: every seeded broken instance must fail at least
/// one check, with the broken flatten failing law (6) specifically.
pub fn mutation_suite() -> SuiteReport {
    let inputs = LawInputs::default();
    let mut results = Vec::new();

    let flatten_results = check_monad_laws(&BrokenFlattenBag, &inputs);
    let law6_failed = flatten_results
        .iter()
        .any(|r| r.law == "flatten-map-unit" && !r.pass && r.counterexample.is_some());
    results.push(if law6_failed {
        LawResult::pass("Bag[broken flatten]", "mutant-detected")
    } else {
        LawResult::fail(
            "Bag[broken flatten]",
            "mutant-detected",
            "flatten-map-unit did not fail".to_string(),
        )
    });

    let unit_results = check_monad_laws(&BrokenUnitMaybe, &inputs);
    results.push(detected("Maybe[broken unit]", &unit_results));

    let map_results = check_monad_laws(&BrokenMapSeq, &inputs);
    results.push(detected("Seq[broken map]", &map_results));

    // broken reconstruct: right-inverse check fails at the dropped tick
    let dom = FiniteDomain::new(0, 5);
    let mut rng = StdRng::seed_from_u64(77);
    let fns = vec![random_bag_fn(&dom, &mut rng)];
    let outcome = check_right_inverse::<TruncatedEventModel>(&fns, &dom);
    results.push(
        if !outcome.pass && outcome.failing_at == Some(dom.last()) {
            LawResult::pass("EventTable[truncated reconstruct]", "mutant-detected")
        } else {
            LawResult::fail(
                "EventTable[truncated reconstruct]",
                "mutant-detected",
                format!("expected failure at {:?}, got {outcome:?}", dom.last()),
            )
        },
    );

    // and derive_monadic refuses to produce operators for it
    let derive = derive_monadic::<TruncatedEventModel>(&dom);
    results.push(if derive.is_err() {
        LawResult::pass("EventTable[truncated reconstruct]", "derive-monadic-rejected")
    } else {
        LawResult::fail(
            "EventTable[truncated reconstruct]",
            "derive-monadic-rejected",
            "broken representation produced operators".to_string(),
        )
    });

    SuiteReport { suite: "mutation", results }
}

fn detected(subject: &str, results: &[LawResult]) -> LawResult {
    if results.iter().any(|r| !r.pass) {
        LawResult::pass(subject, "mutant-detected")
    } else {
        LawResult::fail(subject, "mutant-detected", "no law failed".to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs_and_passes() {
        for name in SUITE_NAMES {
            let reports = run_suites(name).unwrap();
            for report in reports {
                for r in &report.results {
                    assert!(
                        r.pass,
                        "[{}] {}: {} — {:?}",
                        report.suite, r.subject, r.law, r.counterexample
                    );
                }
            }
        }
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suites("nope").is_none());
    }

    #[test]
    fn all_runs_every_suite() {
        let reports = run_suites("all").unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.suite).collect();
        assert_eq!(names, SUITE_NAMES);
    }
}
