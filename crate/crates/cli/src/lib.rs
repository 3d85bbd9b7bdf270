//! Command-line front end for the `symnorm` library: JSON matrix files in,
//! deterministic JSON (or aligned text) reports out.
//!
//! Exit codes: 0 when the checked claim holds (or there is nothing to decide),
//! 1 when it is violated, 2 for usage and input errors.

pub mod commands;
pub mod matfile;
pub mod report;

pub use commands::{run, run_from_args, Cli, Outcome};
