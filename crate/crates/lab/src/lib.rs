//! Command-line lab around `ontic-core`: catalog files, the expected-verdict
//! table, report formats and a parallel Monte Carlo driver.

pub mod catalog;
pub mod config;
pub mod parallel;
pub mod patterns;
pub mod report;
pub mod run;

pub use config::{CheckKind, ModelKind, OutputFormat, RunConfig};
pub use report::emit_report;
pub use run::{run, RunError, RunOutcome};
