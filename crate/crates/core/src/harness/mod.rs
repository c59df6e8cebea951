//! Theorem checks, input families, regression baselines and the suite.

mod baseline;
mod checks;
mod family;
mod report;
mod suite;
mod sweeps;
pub mod tail;

pub use baseline::{
    BaselineFile, BaselineRecord, BaselineStatus, BASELINE_SCHEMA, BASELINE_TOLERANCE,
};
pub use checks::*;
pub use family::{case_rng, Generator, InputFamily};
pub use report::{InequalityReport, SweepReport, TheoremId, Verdict, Witness};
pub use suite::*;
pub use sweeps::*;
