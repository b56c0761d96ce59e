use thiserror::Error;

/// Errors raised by the numerical kernels, evaluators and configuration layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("{func} did not converge after {terms} terms (partial value {partial})")]
    Convergence {
        func: &'static str,
        partial: f64,
        terms: usize,
    },

    #[error("numerical tolerance not met in {context}: {msg}")]
    Tolerance { context: String, msg: String },

    #[error("invalid configuration at `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error("failed to parse configuration: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            func,
            msg: msg.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            msg: msg.into(),
        }
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Parse(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
