//! The ev/st/et stream-kind semi-lattice and kind propagation over
//! operator pipelines.
//!
//! Event streams carry instant-associated data, state streams carry
//! span-associated data, and eternal streams are lifted static relations.
//! Kinds join when streams are combined: eternal is neutral, event is
//! absorbing. The induced order is et <= st <= ev.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StreamKind {
    /// `et` — static data lifted to a constant stream.
    Eternal,
    /// `st` — data associated with a time span.
    State,
    /// `ev` — data associated with a single instant.
    Event,
}

impl fmt::Display for StreamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StreamKind::Eternal => "et",
            StreamKind::State => "st",
            StreamKind::Event => "ev",
        })
    }
}

impl FromStr for StreamKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "et" => Ok(StreamKind::Eternal),
            "st" => Ok(StreamKind::State),
            "ev" => Ok(StreamKind::Event),
            other => Err(format!("unknown stream kind {other:?} (expected ev, st or et)")),
        }
    }
}

/// The join table of the kind semi-lattice.
pub fn join_kind(a: StreamKind, b: StreamKind) -> StreamKind {
    use StreamKind::*;
    match (a, b) {
        (Eternal, Eternal) => Eternal,
        (Eternal, State) | (State, Eternal) | (State, State) => State,
        (Event, _) | (_, Event) => Event,
    }
}

/// One node of an operator DAG for kind inference. `inputs` refer to
/// earlier node indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KindNode {
    /// An external source; must carry a kind annotation. Lifted static
    /// relations are sources annotated `et`.
    Source { kind: Option<StreamKind> },
    /// A snapshot-reducible operator: its output kind is the join of its
    /// input kinds.
    SnapshotReducible { inputs: Vec<usize> },
    /// A collecting operator (window, pattern, resample): combines data
    /// over a span, so its output is a state stream regardless of input.
    Collecting { input: usize },
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KindPipeline {
    pub nodes: Vec<KindNode>,
}

impl KindPipeline {
    pub fn new(nodes: Vec<KindNode>) -> Self {
        KindPipeline { nodes }
    }

    pub fn sink(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }
}

/// Infer the kind of every node.
pub fn infer_kinds(pipeline: &KindPipeline) -> Result<Vec<StreamKind>, Error> {
    let mut kinds: Vec<StreamKind> = Vec::with_capacity(pipeline.nodes.len());
    for (idx, node) in pipeline.nodes.iter().enumerate() {
        let kind = match node {
            KindNode::Source { kind } => kind.ok_or(Error::UnannotatedSource(idx))?,
            KindNode::SnapshotReducible { inputs } => {
                let mut joined = StreamKind::Eternal;
                for &input in inputs {
                    if input >= idx {
                        return Err(Error::InvalidPipelineEdge { node: idx, input });
                    }
                    joined = join_kind(joined, kinds[input]);
                }
                joined
            }
            KindNode::Collecting { input } => {
                if *input >= idx {
                    return Err(Error::InvalidPipelineEdge { node: idx, input: *input });
                }
                StreamKind::State
            }
        };
        kinds.push(kind);
    }
    Ok(kinds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use StreamKind::*;

    const ALL: [StreamKind; 3] = [Eternal, State, Event];

    #[test]
    fn join_table_is_exactly_the_expected_nine_cases() {
        assert_eq!(join_kind(Eternal, Eternal), Eternal);
        assert_eq!(join_kind(Eternal, State), State);
        assert_eq!(join_kind(Eternal, Event), Event);
        assert_eq!(join_kind(State, Eternal), State);
        assert_eq!(join_kind(State, State), State);
        assert_eq!(join_kind(State, Event), Event);
        assert_eq!(join_kind(Event, Eternal), Event);
        assert_eq!(join_kind(Event, State), Event);
        assert_eq!(join_kind(Event, Event), Event);
    }

    #[test]
    fn join_is_commutative_associative_idempotent() {
        for a in ALL {
            assert_eq!(join_kind(a, a), a);
            for b in ALL {
                assert_eq!(join_kind(a, b), join_kind(b, a));
                for c in ALL {
                    assert_eq!(
                        join_kind(join_kind(a, b), c),
                        join_kind(a, join_kind(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn event_absorbs_and_eternal_is_neutral() {
        for x in ALL {
            assert_eq!(join_kind(Event, x), Event);
            assert_eq!(join_kind(Eternal, x), x);
        }
    }

    #[test]
    fn cross_of_event_source_and_static_relation_is_event() {
        let pipeline = KindPipeline::new(vec![
            KindNode::Source { kind: Some(Event) },
            KindNode::Source { kind: Some(Eternal) },
            KindNode::SnapshotReducible { inputs: vec![0, 1] },
        ]);
        assert_eq!(infer_kinds(&pipeline).unwrap(), vec![Event, Eternal, Event]);
    }

    #[test]
    fn window_over_event_source_is_state() {
        let pipeline = KindPipeline::new(vec![
            KindNode::Source { kind: Some(Event) },
            KindNode::Collecting { input: 0 },
        ]);
        assert_eq!(infer_kinds(&pipeline).unwrap(), vec![Event, State]);
    }

    #[test]
    fn eternal_sources_stay_eternal_through_snapshot_reducible_ops() {
        let pipeline = KindPipeline::new(vec![
            KindNode::Source { kind: Some(Eternal) },
            KindNode::Source { kind: Some(Eternal) },
            KindNode::SnapshotReducible { inputs: vec![0, 1] },
            KindNode::SnapshotReducible { inputs: vec![2] },
        ]);
        assert_eq!(
            infer_kinds(&pipeline).unwrap(),
            vec![Eternal, Eternal, Eternal, Eternal]
        );
    }

    #[test]
    fn unannotated_source_is_an_error() {
        let pipeline = KindPipeline::new(vec![KindNode::Source { kind: None }]);
        assert_eq!(infer_kinds(&pipeline).err(), Some(Error::UnannotatedSource(0)));
    }

    #[test]
    fn forward_edges_are_rejected() {
        let pipeline = KindPipeline::new(vec![KindNode::Collecting { input: 0 }]);
        assert!(matches!(
            infer_kinds(&pipeline),
            Err(Error::InvalidPipelineEdge { node: 0, input: 0 })
        ));
    }

    #[test]
    fn inference_is_monotone_in_source_kinds() {
        // upgrading any source along et <= st <= ev never downgrades a node
        let shapes = [
            vec![
                KindNode::Source { kind: Some(Eternal) },
                KindNode::Source { kind: Some(Eternal) },
                KindNode::SnapshotReducible { inputs: vec![0, 1] },
                KindNode::Collecting { input: 2 },
                KindNode::SnapshotReducible { inputs: vec![1, 3] },
            ],
            vec![
                KindNode::Source { kind: Some(Eternal) },
                KindNode::SnapshotReducible { inputs: vec![0] },
            ],
        ];
        for shape in shapes {
            for a in ALL {
                for b in ALL {
                    for up_a in ALL.into_iter().filter(|k| *k >= a) {
                        for up_b in ALL.into_iter().filter(|k| *k >= b) {
                            let assign = |x: StreamKind, y: StreamKind| {
                                let mut nodes = shape.clone();
                                let mut sources = [x, y].into_iter();
                                for node in &mut nodes {
                                    if let KindNode::Source { kind } = node {
                                        if let Some(k) = sources.next() {
                                            *kind = Some(k);
                                        }
                                    }
                                }
                                infer_kinds(&KindPipeline::new(nodes)).unwrap()
                            };
                            let lo = assign(a, b);
                            let hi = assign(up_a, up_b);
                            for (l, h) in lo.iter().zip(&hi) {
                                assert!(h >= l, "upgrade downgraded a node");
                            }
                        }
                    }
                }
            }
        }
    }
}
