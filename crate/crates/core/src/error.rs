use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error(
        "eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("operators {first} and {second} do not commute (residual {residual:.3e})")]
    NonCommuting {
        first: usize,
        second: usize,
        residual: f64,
    },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("generator set is not closed under commutation (residual {0:.3e})")]
    NotClosed(f64),

    #[error("wrong trace normalization: expected T = {expected}, found {found}")]
    WrongNormalization { expected: f64, found: f64 },

    #[error("structure constants violate the Jacobi identity (residual {0:.3e})")]
    JacobiViolation(f64),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("block of dimension {dim} with C2 = {c2:.9}, C3 = {c3:.9} matches no catalog irrep")]
    UnknownIrrep { dim: usize, c2: f64, c3: f64 },

    #[error("commutant decomposition failed: {0}")]
    CommutantFailure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("question coefficients are not unit-norm (norm {0})")]
    NotNormalized(f64),

    #[error("coefficient vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("unknown session `{0}`")]
    UnknownSession(String),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}
