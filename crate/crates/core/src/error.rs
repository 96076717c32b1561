use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this input (e.g. `N = 2` inversion).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A stated precondition of a check does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two fields or trajectories that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A numerical scheme produced an inadmissible result.
    #[error("solver error: {0}")]
    Solver(String),

    /// Invalid experiment configuration; `line` is 0 for command-line
    /// options.
    #[error("config error ({}, field `{field}`): {message}", config_location(*.line))]
    Config {
        line: usize,
        field: String,
        message: String,
    },

    #[error("io error: {0}")]
    Io(String),
}

fn config_location(line: usize) -> String {
    if line == 0 {
        "command line".into()
    } else {
        format!("line {line}")
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
