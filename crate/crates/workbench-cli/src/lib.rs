//! Command-line front end: JSON object I/O, subcommand dispatch and
//! verification reports.

pub mod codec;
pub mod commands;
pub mod error;
pub mod object;
pub mod report;

pub use commands::{parse_group, run_command, Cli};
pub use error::{CliError, EXIT_OK, EXIT_SCHEMA, EXIT_USAGE, EXIT_VERIFICATION};
pub use object::{load_object, Kind, WorkbenchObject};
pub use report::VerificationReport;
