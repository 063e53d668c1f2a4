//! Library surface of the `qsc` binary: experiment configuration and
//! orchestration, artifact writing, and report comparison. Kept as a library
//! so integration tests can drive the pipeline directly.

pub mod experiment;
pub mod output;
pub mod table;

pub use experiment::{
    build_kernel, config_hash, fnv1a64, materialize, run_experiment, Aggregate, ExperimentConfig,
    ExperimentReport, ExperimentRun, KernelBuild, KernelId, KernelOptions, Repetition,
    SpectralOptions, SweepSummary,
};
pub use output::{resolve_out_dir, write_run};
pub use table::{compare, load_report, render_markdown, write_comparison, Comparison};
