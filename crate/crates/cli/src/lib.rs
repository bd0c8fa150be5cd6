//! Command-line front end: germ files in, text or JSON reports out.

pub mod commands;
pub mod error;
pub mod germfile;
pub mod report;

pub use commands::Outcome;
pub use error::{CliError, CliResult};
pub use germfile::GermFile;
