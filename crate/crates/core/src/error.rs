use thiserror::Error;

use crate::sequence::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range (quiver has {total} vertices)")]
    VertexOutOfRange { vertex: usize, total: usize },

    #[error("vertex {0} is frozen and cannot be mutated")]
    FrozenVertex(Vertex),

    #[error("mutation sequence is not reduced: vertex {vertex} repeats at position {position}")]
    NotReduced { position: usize, vertex: Vertex },

    #[error("c-vector of vertex {0} has mixed signs")]
    MixedSigns(Vertex),

    #[error("vertex {0} is blue (zero c-vector)")]
    BlueVertex(Vertex),

    #[error("matrix is not skew-symmetric at ({i}, {j})")]
    NotSkewSymmetric { i: usize, j: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("quiver contains a directed cycle")]
    CyclicInput,

    #[error("mutable part is not a fork")]
    NotAFork,

    #[error("mutable part is not abundant acyclic")]
    NotAbundantAcyclic,

    #[error("sink {0} of the acyclic ordering is not red")]
    SinkNotRed(Vertex),

    #[error("quiver is not a mutation-cyclic quiver on three vertices")]
    NotRank3Cyclic,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid weight range {lo}..{hi}: {reason}")]
    InvalidRange { lo: i64, hi: i64, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
