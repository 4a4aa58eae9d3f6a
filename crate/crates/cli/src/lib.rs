//! Data ingestion and experiment orchestration for the `vtctf` command.

pub mod error;
pub mod experiment;
pub mod ingest;
pub mod rawio;
pub mod synthetic;

pub use error::{CliError, Result};
pub use experiment::{compare, make_mask, run_experiment, sample_indices, v_sweep, ExperimentSpec, Method, RunRecord};
pub use ingest::{ingest, DataKind};
