//! Library side of the `icdms` command: configuration and distribution
//! file parsing, subcommand bodies, CSV/SVG/metadata writers.

pub mod commands;
pub mod config;
pub mod distfile;
pub mod error;
pub mod output;

pub use error::{CliError, Result};
