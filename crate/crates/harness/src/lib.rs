//! Experiment runner behind the `dmdlab` CLI: configuration, the
//! solve → fit → predict → report pipeline, and the CSV comparison artifacts.

use thiserror::Error;

pub mod config;
pub mod report;
pub mod runner;
pub mod sweep;

pub use config::{ExperimentConfig, Method, TestId};
pub use report::{compare_methods, ComparisonRow, RankedSummary};
pub use runner::{run_experiment, ExperimentOutput};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Solver(#[from] dmd_core::solvers::SolverError),
    #[error(transparent)]
    Snapshot(#[from] dmd_core::snapshots::SnapshotError),
    #[error(transparent)]
    Dmd(#[from] dmd_core::dmd::DmdError),
    #[error(transparent)]
    ErrorAnalysis(#[from] dmd_core::error_analysis::ErrorAnalysisError),
    #[error(transparent)]
    Pod(#[from] dmd_core::pod_deim::PodError),
    #[error(transparent)]
    TrajectoryIo(#[from] dmd_core::snapshots::io::TrajectoryIoError),
    #[error(transparent)]
    ModelIo(#[from] dmd_core::dmd::io::ModelIoError),
}
