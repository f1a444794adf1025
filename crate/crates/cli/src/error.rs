use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", config_message(.line, .message))]
    Config {
        line: Option<usize>,
        message: String,
    },

    #[error("{0}")]
    NoEquilibrium(String),

    #[error("{0}")]
    Solver(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn config_message(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("line {l}: {message}"),
        None => message.to_string(),
    }
}

impl CliError {
    /// Process exit status: 2 when no equilibrium exists, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoEquilibrium(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Config { line, message } => CliError::Config {
                line,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        }
    }
}

impl From<parimutuel_core::Error> for CliError {
    fn from(e: parimutuel_core::Error) -> Self {
        match e {
            parimutuel_core::Error::NoEquilibrium { .. } => CliError::NoEquilibrium(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}
