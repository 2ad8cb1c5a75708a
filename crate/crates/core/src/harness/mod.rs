//! Experiment orchestration: metrics, configuration, repeats and output files.

mod config;
mod experiment;
mod metrics;
pub mod verify;

pub use config::{default_vqc_depth, ExperimentConfig};
pub use experiment::{
    read_records_csv, records_csv, run_experiment, summarize, ExperimentOutput, RepeatSeeds, RunRecord, Summary,
    SummaryRow, CSV_HEADER,
};
pub use metrics::{improvement, phase_aligned_similarity, similarity, PhaseAligned};
