use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("could not parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("outside the analytic regime: {0}")]
    OutOfRegime(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("generator has {count} steady states (zero eigenvalue is degenerate)")]
    MultipleSteadyStates { count: usize },

    #[error("wall-clock budget exceeded ({elapsed:.1} s of {limit} s); partial output kept in {partial}")]
    Budget { elapsed: f64, limit: f64, partial: String },

    #[error(transparent)]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for errors caused by user-supplied parameters or input files.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Parse { .. }
                | Error::InvalidInput(_)
                | Error::NotHermitian { .. }
                | Error::Dimension { .. }
        )
    }
}
