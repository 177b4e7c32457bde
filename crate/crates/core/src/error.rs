use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("the trivial irrep λ = 0 is excluded")]
    TrivialIrrep,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("parity mismatch: 2j = {two_j} but 2q = {two_q}")]
    ParityMismatch { two_j: u32, two_q: i32 },

    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point at infinity: {0}")]
    PointAtInfinity(String),

    #[error("λ = {lambda} exceeds the cap {cap} for {what}")]
    CapExceeded {
        lambda: u32,
        cap: u32,
        what: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expansion residual {residual:e} exceeds tolerance {tol:e} ({context})")]
    Residual {
        residual: f64,
        tol: f64,
        context: String,
    },

    #[error("non-finite integrand value {value} at sample {index} (angles {angles:?})")]
    NonFinite {
        index: u64,
        value: f64,
        angles: [f64; 8],
    },
}

impl Error {
    /// True for failures of an internal consistency check, as opposed to a
    /// rejected input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Residual { .. } | Error::NonFinite { .. })
    }
}
