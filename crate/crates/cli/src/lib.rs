//! Batch front end for the `symbiont` engine: file formats, reports and
//! the command dispatcher behind the `symbiont` binary.

mod commands;
pub mod input;
pub mod report;

pub use commands::{run, Cli, Command, Method, Outcome, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, MAX_AGENTS_ENV};
