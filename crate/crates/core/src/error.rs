use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at offset {position} ({token:?}): {message}")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },

    #[error("determinant of a {n}x{n} matrix exceeds the cofactor limit {max}")]
    UnsupportedSize { n: usize, max: usize },

    #[error("cannot evaluate at a zero coordinate (variable t{0})")]
    ZeroCoordinate(usize),

    #[error("braid is not pure (induced permutation {0})")]
    NotPure(String),

    #[error("t{index} is within {guard:e} of the pole at t = 1")]
    NearPole { index: usize, guard: f64 },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
}
