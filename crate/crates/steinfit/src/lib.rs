//! Command-line front end and file formats for `steinfit-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod json;

pub use error::CliError;
