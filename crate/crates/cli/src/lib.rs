//! Verification suites, witness bank and report formats of the `tracelab`
//! command-line tool.

pub mod bank;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;

pub use bank::generate_bank;
pub use config::SuiteConfig;
pub use error::CliError;
pub use report::{CaseRecord, Check, SuiteReport};
pub use suites::run_suite;
