//! Experiment configs, inequality suites and their reports.

mod config;
mod fit;
pub mod random;
mod report;
mod suites;

pub use config::{CoeffLaw, ExperimentConfig, FamilySpec, Suite, Tolerances, SCHEMA_VERSION};
pub use fit::{fit_constant, spread, FittedConstant};
pub use report::{CaseRecord, Environment, InequalityReport, Table, Verdict};
pub use suites::run_suite;
