use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("BS(1,N) requires N >= 2, got {0}")]
    InvalidParameter(u32),
    #[error("a-exponent would need about {bits} bits, above the arithmetic budget")]
    Overflow { bits: u64 },
    #[error("b-exponent (level) overflow")]
    LevelOverflow,
    #[error("unexpected {found:?} at position {position}")]
    Parse { position: usize, found: char },
}

/// Failures that come from running out of a configured budget. These are
/// never mathematical verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("window would hold {requested} vertices, budget is {budget}")]
    Vertices { requested: u128, budget: usize },
    #[error("search exceeded node budget {budget}")]
    Nodes { budget: u64 },
    #[error("state table needs {requested} entries, budget is {budget}")]
    States { requested: u128, budget: usize },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
