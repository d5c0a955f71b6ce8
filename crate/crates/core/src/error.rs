use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator, the analytic helpers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `1 - (1 - x/2)^d = x` only has an interior root for `d >= 3`.
    #[error("no interior fixed point for d = {d}")]
    NoInteriorRoot { d: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("exact enumeration capped at n = {cap}, requested {requested}")]
    StateSpaceTooLarge { requested: u32, cap: u32 },

    #[error(transparent)]
    Spec(#[from] SpecError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// A rejected experiment specification. `line` is `None` for values supplied
/// on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{}", location(.line, .key), .message)]
pub struct SpecError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

fn location(line: &Option<usize>, key: &Option<String>) -> String {
    match (line, key) {
        (Some(l), Some(k)) => format!("line {l}: key `{k}`: "),
        (Some(l), None) => format!("line {l}: "),
        (None, Some(k)) => format!("key `{k}`: "),
        (None, None) => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
