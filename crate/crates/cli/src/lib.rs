//! Experiment runner for the SU(2) toric-code lab: configuration, the named
//! verification suites, and JSON reports with archive and consolidation.

pub mod config;
pub mod lab;
pub mod report;
pub mod suites;

pub use config::{ConfigError, RunConfig, OUTPUT_DIR_ENV};
pub use lab::Lab;
pub use report::{consolidate, Check, ConsolidatedReport, Gate, ReportError, VerificationReport};
