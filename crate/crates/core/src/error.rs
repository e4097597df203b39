use thiserror::Error;

/// Errors raised by graph construction, spectral routines, bound evaluators
/// and experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("edge {{{0}, {1}}} is not present in the graph")]
    MissingEdge(usize, usize),

    #[error("invalid edge {{{0}, {1}}}: {2}")]
    InvalidEdge(usize, usize, &'static str),

    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),

    #[error("degree bound {delta} is below the maximum degree {max_degree}")]
    DegreeBound { delta: usize, max_degree: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("cluster of {size} vertices exceeds the spectral size limit {limit}")]
    Oversize { size: usize, limit: usize },

    #[error("{touching} of {total} origin clusters touch the box boundary (limit 1%)")]
    BoundaryTruncation { touching: usize, total: usize },

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
