//! Command implementations behind the `qwalk` binary.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{CoinSource, CompileOutputs, Output, Partitions};
pub use error::CliError;
