use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a partition: {0:?} is not weakly decreasing")]
    NotAPartition(Vec<u32>),

    #[error("malformed integer list {0:?}")]
    Parse(String),

    #[error("degree mismatch: {left} != {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("invalid staircase parameters a={a}, m={m}, b={b}: need a >= m >= 2 and b >= 1")]
    FamilyRange { a: u32, m: u32, b: u32 },

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("exchange would create a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("margin mismatch: {0}")]
    Margin(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parity condition a - m = b (mod 2) fails for a={a}, m={m}, b={b}")]
    Parity { a: u32, m: u32, b: u32 },

    #[error("assertion `{name}` failed: {detail}")]
    Assertion { name: String, detail: String },
}

impl Error {
    pub(crate) fn assertion(name: &str, detail: impl Into<String>) -> Self {
        Error::Assertion {
            name: name.to_string(),
            detail: detail.into(),
        }
    }

    /// True for errors that come from a failed mathematical assertion rather
    /// than from bad input or resource limits.
    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::Assertion { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
