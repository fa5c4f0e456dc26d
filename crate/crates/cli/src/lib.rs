//! Workbench plumbing for the `innerkit` binary: layered configuration,
//! check suites and schema-versioned reports.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

pub use config::{Config, Layer};
pub use report::{CheckRecord, Format, Report, Status};
pub use suites::{run_suite, SuiteId};

/// Errors that stem from the command line or config rather than from a
/// computation; they exit with status 2.
#[derive(Debug)]
pub struct UsageError(pub anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(r: anyhow::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| UsageError(e).into())
}

/// Exit status for an error: 2 for usage errors, including invalid
/// parameters and malformed input files rejected by the library, and 3
/// otherwise.
pub fn error_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<innerkit::Error>() {
        Some(innerkit::Error::Usage(_) | innerkit::Error::Json(_)) => 2,
        _ => 3,
    }
}
