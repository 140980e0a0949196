use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid payoff: {0}")]
    InvalidPayoff(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("cannot calibrate: {0}")]
    CannotCalibrate(String),

    #[error("spot does not satisfy the forward condition: residual {residual} exceeds {tolerance}")]
    UncalibratedSpot { residual: f64, tolerance: f64 },
}

impl Error {
    /// Whether the error stems from malformed inputs (as opposed to a valid
    /// input on which the computation is undefined).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::InvalidPayoff(_) | Error::InvalidMeasure(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid_arg(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
