//! Command-line front end for twistpair: an input format, six subcommands and their reports.

pub mod commands;
pub mod format;

pub use commands::{parse_summary, CliError, Report};
pub use format::{parse_input, write_twist, InputDocument, ParseError};
