//! Command-line front end: configuration, pipeline runs and result tables.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;
pub mod units;

pub use commands::{run, Command};
pub use config::{Format, RunConfig};
pub use error::{CliError, CliResult};
pub use table::ResultTable;
