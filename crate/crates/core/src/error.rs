use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("arc label {label} is used {count} times (expected 2)")]
    ArcMultiplicity { label: u32, count: usize },

    #[error("diagram is not connected")]
    Disconnected,

    #[error("rotation system is not planar: V - E + F = {0} (expected 2)")]
    NotPlanar(i64),

    #[error("inconsistent orientation on component containing arc {0}")]
    Orientation(u32),

    #[error("basepoint arc {0} does not exist")]
    BadBasepoint(u32),

    #[error("graph is not connected")]
    GraphDisconnected,

    #[error("edge {edge}: {msg}")]
    EdgeMembership { edge: usize, msg: String },

    #[error("state has unresolved positions")]
    Unresolved,

    #[error("activity words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid flip move: {0}")]
    InvalidFlip(String),

    #[error("edge order is not a permutation of 1..={0}")]
    BadEdgeOrder(usize),

    #[error("diagram has {crossings} crossings, above the limit of {limit}")]
    TooLarge { crossings: usize, limit: usize },

    #[error("kmax must be at least 1")]
    BadKmax,

    #[error("colored matroids are not isomorphic")]
    NotIsomorphic,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
