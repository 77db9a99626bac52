use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the decomposition pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lex error at position {position}: {message}")]
    Lex { position: usize, message: String },

    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("evaluation failed at x = {x}: {message}")]
    Eval { x: f64, message: String },

    #[error("ingest error: {0}")]
    Ingest(String),

    #[error("value {0} is outside the admissible domain")]
    OutOfDomain(f64),

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature did not converge (best value {best_value}, error estimate {error_estimate})"
    )]
    NotConverged {
        best_value: f64,
        error_estimate: f64,
    },

    #[error("squared norm {0} is negative beyond tolerance")]
    NegativeNorm(f64),

    #[error("angle undefined: function norm {0} is below the zero threshold")]
    ZeroFunction(f64),

    #[error("collinearity scalar must be nonzero")]
    ZeroScalar,

    #[error("no sign change of the fluctuation found on the scan grid")]
    NoSignChange,
}

impl Error {
    pub(crate) fn eval(x: f64, message: impl Into<String>) -> Self {
        Error::Eval {
            x,
            message: message.into(),
        }
    }
}
