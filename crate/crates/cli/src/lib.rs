//! Command-line front end for `modtrace`: state files, report formatting,
//! parameter sweeps, the entropy crossing search and seeded verification suites.

pub mod crossing;
pub mod error;
pub mod report;
pub mod state_file;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result};
