//! Library half of the `netslice` command-line tool: configuration files,
//! trace CSVs and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod trace_csv;

pub use commands::{cmd_compare, cmd_run, cmd_stability, cmd_validate, Check, Exit};
