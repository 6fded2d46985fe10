use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor order must be at least 2, got {0}")]
    InvalidOrder(usize),

    #[error("tensor dimension must be at least 1, got {0}")]
    InvalidDim(usize),

    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("multi-index has length {got}, expected order {expected}")]
    IndexLength { got: usize, expected: usize },

    #[error("index set must be non-empty")]
    EmptyIndexSet,

    #[error("dimension mismatch: tensor has dim {expected}, vector has length {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("dense input has {got} values, expected {expected}")]
    DenseLength { got: usize, expected: usize },

    #[error("tensor is not symmetric: entries {first:?} and {second:?} differ by {diff}")]
    Asymmetric {
        first: Vec<usize>,
        second: Vec<usize>,
        diff: f64,
    },

    #[error("tensor of order {order} and dimension {dim} is too large")]
    TooLarge { order: usize, dim: usize },

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("vector must be nonzero")]
    ZeroVector,

    #[error("tensor is not a B0 tensor: row {row} violates {reason}")]
    NotB0 { row: usize, reason: String },

    #[error("tensor has a negative entry {value} at {index:?}")]
    NegativeEntry { index: Vec<usize>, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("certificate was issued for a different tensor (digest {cert}, input {input})")]
    DigestMismatch { cert: String, input: String },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by the caller's data rather than by this crate.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}
