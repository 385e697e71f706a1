//! Command-line front end: a group-expression language, replication suites
//! and JSON reports.

pub mod commands;
pub mod dsl;
pub mod report;
pub mod suites;

pub use commands::{run_command, Outcome};
