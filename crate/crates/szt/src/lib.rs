//! File formats, suite configuration, report output and the command-line
//! driver around [`szt_core`].

pub mod config;
pub mod dump;
pub mod setfile;
pub mod suite;

pub use config::{CheckConfig, ConfigError, SuiteConfig, SUITE_VERSION};
pub use setfile::{parse_set, read_set, render_set, write_set, SetFileError};
pub use suite::{run_suite, CheckFailure, StatementSummary, SuiteReport};
