use thiserror::Error;

use crate::vertex::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(VertexId),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: VertexId,
        expected: usize,
        found: usize,
    },

    #[error("missing row for vertex {0}")]
    MissingRow(VertexId),

    #[error("diagonal entry b_{0}{0} is nonzero")]
    NonzeroDiagonal(VertexId),

    #[error("principal part is not skew-symmetrizable (entries at {0}, {1})")]
    NotSkewSymmetrizable(VertexId, VertexId),

    #[error("cannot mutate at frozen vertex {0}")]
    FrozenMutation(VertexId),

    #[error("framing requires a matrix without frozen rows")]
    HasFrozen,

    #[error("c-vector of {vertex} has mixed signs")]
    SignIncoherent { vertex: VertexId },

    #[error("c-vector of {vertex} is zero")]
    ZeroCVector { vertex: VertexId },

    #[error("step {step} (vertex {vertex}): {source}")]
    AtStep {
        step: usize,
        vertex: VertexId,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("level {0} is not in the range of the layering")]
    UnknownLevel(i64),

    #[error("operation requires a layering in {0} mode")]
    WrongMode(&'static str),

    #[error("invalid layering: {0}")]
    InvalidLayering(String),

    #[error("layering has no level for vertex {0}")]
    MissingLevel(VertexId),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutation {0} is not in Xi_N")]
    NotInXi(String),

    #[error("invalid tau presentation: {0}")]
    InvalidPresentation(String),

    #[error("word is not a contiguous path: prefix of length {prefix} fails ({reason})")]
    NotContiguous { prefix: usize, reason: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Wraps `self` with the 1-based step index and vertex at which it arose.
    pub fn at_step(self, step: usize, vertex: VertexId) -> Error {
        Error::AtStep {
            step,
            vertex,
            source: Box::new(self),
        }
    }

    /// Strips any step context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self.root(),
            Error::SignIncoherent { .. } | Error::ZeroCVector { .. } | Error::Invariant(_)
        )
    }
}
