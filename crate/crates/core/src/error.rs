use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid parameter (λ out of range, α outside (0, 1], mismatched α, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Argument hits a pole or lies outside the domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not reach its target accuracy.
    #[error("accuracy error: best estimate {best} with error estimate {error_estimate} (target {target})")]
    Accuracy {
        best: f64,
        error_estimate: f64,
        target: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
