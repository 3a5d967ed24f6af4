//! Case files, verification suite and JSON reports on top of
//! `resweil-core`.

pub mod case;
pub mod report;
pub mod suite;

pub use case::{parse_case, render, Case, CaseError};
pub use report::Report;
pub use suite::{run_case, run_suite, SuiteOptions, SuiteOutcome};
