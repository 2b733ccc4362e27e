//! Command-line front end and I/O for the `fldma-core` simulator:
//! TOML configuration, CSV output, golden vectors and a rayon trial runner.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod golden;
pub mod output;
pub mod runner;

pub use error::{CliError, Result};
