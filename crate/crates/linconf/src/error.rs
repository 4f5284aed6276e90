use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group mismatch: operands belong to different groups")]
    GroupMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("enumeration cap exceeded: needs {needed} items, cap is {cap}")]
    CapExceeded { needed: String, cap: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the batch front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        }
    }
}
