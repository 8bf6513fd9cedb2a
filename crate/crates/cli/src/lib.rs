//! Command-line front end: problem files in, canonical reports out.

pub mod app;
pub mod commands;
pub mod problem;
pub mod report;

pub use commands::{run_command, CliError, Command, Flags};
pub use problem::{load_problem, parse_problem, LoadError, ProblemFile, WallCrossingBlock};
pub use report::{emit_report, validate_report, Format, Report};
