use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("ground set may not be empty")]
    EmptyGround,

    #[error("ground set too large: {actual} labels (limit {limit})")]
    GroundTooLarge { actual: usize, limit: usize },

    #[error("duplicate ground label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("set does not belong to the space: {0}")]
    GroundMismatch(String),

    #[error("invalid component index {index}: {reason}")]
    InvalidIndex { index: u32, reason: String },

    #[error("germ does not belong to this subalgebra")]
    AlgebraMismatch,

    #[error("{what} bound exceeded: {actual} > {limit}")]
    BoundExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("set is not a union of atoms of the subalgebra")]
    NotAtomUnion,

    #[error("missing basepoint for component {0}")]
    MissingBasepoint(u32),

    #[error("map is not total: no image for `{0}`")]
    MapNotTotal(String),

    #[error("invalid refinement assignment: {0}")]
    InvalidAssignment(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
