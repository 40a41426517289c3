//! Command layer for the `ghz` binary: reports, model documents and
//! one function per subcommand, each a thin wrapper over `ghz-core`.

pub mod commands;
mod error;
pub mod model_file;
pub mod render;
pub mod report;

pub use error::CliError;
pub use render::{Format, Output, Table};
pub use report::Report;
