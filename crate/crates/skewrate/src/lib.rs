//! Germ files, report formats and the commands behind the `skewrate` binary.

pub mod cli;
pub mod commands;
pub mod germfile;
pub mod json;

pub use commands::{run, CliError, Status, CSV_HEADER};
pub use germfile::{parse_germ, GermFile, GermFileError};
