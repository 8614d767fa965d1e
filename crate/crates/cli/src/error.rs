use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid configuration or distribution file.
    #[error("{path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },

    /// Invalid command-line values.
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] icdms_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    /// An oracle comparison failed.
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use icdms_core::Error as E;
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Core(E::EmptyUnion | E::EmptyRegion) => 3,
            CliError::Core(
                E::InvalidParameter { .. }
                | E::Normalization { .. }
                | E::NegativeMass { .. }
                | E::FactorShape { .. }
                | E::CapExceeded { .. }
                | E::Axis(_)
                | E::UnknownAxis(_),
            ) => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// 1-based line of the first occurrence of `"key"` in `src`, or 1.
pub fn line_of_key(src: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    src.lines()
        .position(|l| l.contains(&needle))
        .map_or(1, |i| i + 1)
}

pub(crate) fn json_error(path: &str, err: &serde_json::Error) -> CliError {
    // serde_json appends " at line L column C"; keep only the message.
    let text = err.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    CliError::Config {
        path: path.to_string(),
        line: err.line().max(1),
        message: format!("{message} (column {})", err.column()),
    }
}
