//! Command-line front end for `kolmocycle`: JSON configs in, sorted JSON and CSV reports out.

pub mod commands;
pub mod config;
pub mod error;
pub mod verify;

pub use config::RunConfig;
pub use error::CliError;
