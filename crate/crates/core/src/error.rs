use std::time::Duration;

use crate::model::{ValidationReport, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph is disconnected: no path between {0} and {1}")]
    DisconnectedGraph(VertexId, VertexId),

    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(VertexId, VertexId, f64),

    #[error("points {0} and {1} coincide")]
    DuplicatePoint(VertexId, VertexId),

    #[error("at least 2 terminals are required, got {0}")]
    TooFewTerminals(usize),

    #[error("edge ({0}, {1}) references a vertex outside the instance")]
    UnknownEdge(VertexId, VertexId),

    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("line {line}: {detail}")]
    Syntax { line: usize, detail: String },

    #[error("missing section {0}")]
    MissingSection(String),

    #[error("line {line}: vertex index {index} outside 1..={nodes}")]
    IndexOutOfRange {
        line: usize,
        index: i64,
        nodes: usize,
    },

    #[error("line {line}: edge ({u}, {v}) repeated with conflicting weight")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("{count} terminals exceed the configured limit of {limit}")]
    TooManyTerminals { count: usize, limit: usize },

    #[error("multiplier {value} on ({u}, {v}) outside [1, {gamma}]")]
    MultiplierOutOfRange {
        u: VertexId,
        v: VertexId,
        value: f64,
        gamma: f64,
    },

    #[error("rival tree equals the optimum")]
    SameTree,

    #[error("instance has no coordinates")]
    MissingCoordinates,

    #[error("angle {0} outside (pi/2, pi]")]
    ThetaOutOfRange(f64),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no feasible growth step")]
    NoFeasibleStep,

    #[error("oracle {label} returned weight {returned} above (1 + {epsilon}) x {exact}")]
    OracleContractViolated {
        label: String,
        returned: f64,
        exact: f64,
        epsilon: f64,
    },

    #[error("inconsistent contraction trace: {0}")]
    InconsistentTrace(String),

    #[error("search exhausted after {tries} tries (best gamma* {best})")]
    SearchExhausted { tries: usize, best: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn deadline(limit: Duration) -> Self {
        Error::BudgetExceeded(format!("deadline of {:.3}s reached", limit.as_secs_f64()))
    }
}
