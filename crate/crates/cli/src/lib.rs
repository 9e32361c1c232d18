//! Command-line front end for `dlrkit`: text formats and subcommands.

pub mod commands;
pub mod text;

pub use commands::{run, Outcome};
