//! Command-line front end for the plane-map classification library: parses
//! map expressions, classifies the groups they generate, and emits
//! deterministic text or JSON reports.

pub mod commands;
pub mod parser;
pub mod report;

pub use commands::{run, Cli};

use cremona_core::error::Error as CoreError;
use thiserror::Error;

/// Errors surfaced by the command-line layer.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// Process exit code: 2 for invalid input, 3 when the computation needs
    /// a constant the chosen field does not contain.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                CoreError::FieldExtensionRequired(_)
                | CoreError::MissingRootOfUnity { .. }
                | CoreError::UndeterminedPower,
            ) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
