//! Command line front end and benchmark harness.

pub mod bench;
pub mod commands;
pub mod options;
pub mod trace;

pub use bench::{emit_report, run_bench, BenchReport, BenchRow, CertStatus, ReportFormat, SuiteConfig};
pub use commands::{run, Cli};
