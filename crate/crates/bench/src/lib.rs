//! Operational surface of `modmvnf-core`: the `modmvnf` command line,
//! result files, quality metrics, figure data and the experiment suite.

pub mod cli;
pub mod compare;
pub mod error;
pub mod experiment;
pub mod figures;
pub mod metrics;
pub mod result;
pub mod runner;

pub use error::BenchError;
pub use result::{Algorithm, ExperimentResult};
