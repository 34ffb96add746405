//! File formats, report rendering and command implementations behind the
//! `lcbayes` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;

pub use error::{CliError, CliResult};
