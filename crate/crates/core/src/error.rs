use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Two inputs that must differ were equal.
    #[error("degenerate comparison: {0}")]
    DegenerateComparison(String),

    /// Conditioning on an event of probability zero.
    #[error("degenerate conditioning: {0}")]
    DegenerateConditioning(String),

    /// A scenario with no positive results.
    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    /// A simulation report with no positive results.
    #[error("degenerate report: {0}")]
    DegenerateReport(String),
}

impl Error {
    /// True for failures that come out of the numerics rather than from
    /// malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::DegenerateConditioning(_) | Error::DegenerateScenario(_) | Error::DegenerateReport(_))
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
