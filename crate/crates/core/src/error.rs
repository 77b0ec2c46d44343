use thiserror::Error;

/// Errors raised by the fitting, path and diagnostics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("column {0} is constant after centering")]
    ConstantColumn(usize),

    #[error("design matrix is rank deficient (condition ratio {ratio:.3e})")]
    RankDeficient { ratio: f64 },

    #[error("active set {active:?} is rank deficient")]
    RankDeficientActiveSet { active: Vec<usize> },

    #[error("path made no progress at step {step} (step length {step_length:.3e})")]
    NoProgress { step: usize, step_length: f64 },

    #[error("design is not standardized: column {column} has norm {norm}")]
    NotStandardized { column: usize, norm: f64 },

    #[error("the sign-step update is not a linear smoother")]
    NotLinearSmoother,

    #[error("{what} = {value} is out of range (max {max})")]
    OutOfRange { what: &'static str, value: f64, max: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: String,
        message: String,
    },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerical routines themselves, as opposed to
    /// bad input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::RankDeficientActiveSet { .. }
                | Error::NoProgress { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
