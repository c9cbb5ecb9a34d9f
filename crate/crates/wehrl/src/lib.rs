//! File formats, command-line driver and acceptance suite built on `wehrl-core`.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod meta;
pub mod parallel;
pub mod verify;

pub use error::{CliError, CliResult};
