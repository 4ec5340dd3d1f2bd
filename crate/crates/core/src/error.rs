use thiserror::Error;

/// Errors and numeric refusals raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tail energy diverges: {0}")]
    Divergent(String),

    #[error("block index overflow: N_{k} does not fit in 128 bits")]
    Overflow { k: usize },

    #[error("moment E|X|^{beta} is infinite for {law}")]
    InfiniteMoment { law: String, beta: f64 },

    #[error("moment E|X|^{beta} has no available evaluation for {law}")]
    MomentUnavailable { law: String, beta: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("law is not aperiodic: |phi(t)| = 1 at t = {t}")]
    AperiodicityViolated { t: f64 },

    #[error("quadrature under-resolved: {0}")]
    QuadratureUnderResolved(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expression error at offset {offset}: {message}")]
    Expression { offset: usize, message: String },
}

impl Error {
    /// Numeric refusals are reported separately from configuration errors.
    pub fn is_numeric_refusal(&self) -> bool {
        matches!(
            self,
            Error::GridTooCoarse(_)
                | Error::InfiniteMoment { .. }
                | Error::MomentUnavailable { .. }
                | Error::QuadratureUnderResolved(_)
                | Error::AperiodicityViolated { .. }
                | Error::Divergent(_)
                | Error::Overflow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
