use crate::time::TimePoint;

/// Errors surfaced by operator constructors and contract checks.
///
/// Algebraic law *failures* are not errors; the checking harness reports
/// them as data (see [`crate::laws::LawResult`]).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("period must be at least 1 tick, got {0}")]
    NonPositivePeriod(i64),

    #[error("row count must be at least 1, got {0}")]
    ZeroRows(usize),

    #[error("window size must be at least 1 tick, got {0}")]
    ZeroWindow(u64),

    #[error("empty pattern text")]
    EmptyPattern,

    #[error("pattern syntax error at byte {at}: {message}")]
    PatternSyntax { at: usize, message: String },

    #[error("broken representation: snapshot ∘ reconstruct differs from the input at {at:?}")]
    BrokenRepresentation { at: TimePoint },

    #[error("key changed during distributed evaluation: expected {expected}, found {found} at {at:?}")]
    KeyChanged {
        expected: String,
        found: String,
        at: TimePoint,
    },

    #[error("pipeline node {0} is a source without a kind annotation")]
    UnannotatedSource(usize),

    #[error("pipeline node {node} references node {input}, which is not an earlier node")]
    InvalidPipelineEdge { node: usize, input: usize },
}
