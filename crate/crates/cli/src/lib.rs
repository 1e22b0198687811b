//! Command-line front end for the `qstail` estimators: simulate and ingest
//! datasets, run single estimates, trace conditional tail curves and run
//! Monte Carlo studies. Output is CSV or JSON for external plotting.

pub mod args;
pub mod commands;
pub mod error;
pub mod ingest;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, Result};
