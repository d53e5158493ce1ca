//! Plumbing for the command-line front end: configuration, manifests,
//! identity drivers, the acceptance suite and CSV tables.

pub mod config;
pub mod suite;
pub mod table;

pub use config::{parse_rational, Manifest, RunConfig};
pub use suite::{acceptance_suite, run_criterion, CriterionOutcome, CRITERIA};
