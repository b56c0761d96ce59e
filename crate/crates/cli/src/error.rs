use thiserror::Error;

/// Failures of the command-line driver, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("numerical failure at {point}: {source}")]
    Numerical {
        point: String,
        #[source]
        source: skyshare_core::Error,
    },

    #[error("cannot write {path}: {msg}")]
    Output { path: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }

    /// Wraps a core error raised while evaluating sweep point `point`.
    pub fn at(point: impl Into<String>, err: skyshare_core::Error) -> Self {
        if err.is_config() {
            CliError::Config(err.to_string())
        } else {
            CliError::Numerical { point: point.into(), source: err }
        }
    }
}

impl From<skyshare_core::Error> for CliError {
    fn from(err: skyshare_core::Error) -> Self {
        CliError::at("setup", err)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
