use thiserror::Error;

/// Failures raised by evaluators. Every variant is a per-case diagnostic in a
/// sweep; none of them aborts a run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("exact arithmetic cannot evaluate {0}")]
    ExactModeUnsupported(String),
    #[error("outside the admissible domain: {0}")]
    Domain(String),
    #[error("denominator vanishes: {0}")]
    DenominatorPole(String),
    #[error("no convergence after {terms} terms: {detail}")]
    NoConvergence { terms: usize, detail: String },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl QError {
    pub fn domain(msg: impl Into<String>) -> Self {
        QError::Domain(msg.into())
    }

    pub fn pole(msg: impl Into<String>) -> Self {
        QError::DenominatorPole(msg.into())
    }

    pub fn no_convergence(terms: usize, detail: impl Into<String>) -> Self {
        QError::NoConvergence {
            terms,
            detail: detail.into(),
        }
    }
}

pub type QResult<T> = Result<T, QError>;
