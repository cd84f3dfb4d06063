//! Command-line front end for `zpbox-core`: scenario parsing, dispatch and
//! deterministic CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod format;
pub mod grid;
mod run;
pub mod scenario;

use thiserror::Error;

pub use format::{csv_table, format_number, JsonValue};
pub use grid::Grid;
pub use run::{run, RunSummary};
pub use scenario::{parse_config, parse_scenario, Command, Parameters, Scenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Clap(#[from] clap::Error),

    #[error(transparent)]
    Numerical(#[from] zpbox_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for usage errors, 1 for numerical and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Clap(e) => e.exit_code(),
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}
