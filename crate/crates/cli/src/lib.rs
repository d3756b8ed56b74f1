//! Batch front end for the `cauchylab` library: fixture generation, input
//! parsing, demo suites and canonical JSON reports.

pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod suite;

pub use config::{Command, FixtureKind, RunConfig};
pub use error::CliError;
pub use report::{emit_report, Report};
pub use suite::{run_suite, RunOutput};
