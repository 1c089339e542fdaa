//! Command-line experiment runner: configuration, GAN/CEN runs, CSV logs,
//! SVG snapshots and the comparison summary.

pub mod config;
mod compare;
pub mod csv;
pub mod experiment;
pub mod svg;

pub use compare::{compare_runs, ComparisonSummary, ModeSummary};
pub use config::{parse_cli, Cli, DatasetKind, ExperimentConfig, MnistPaths, RunMode};
pub use csv::{emit_metrics_csv, format_metrics_csv, format_summary_csv};
pub use experiment::{initial_model, prepare_dataset, run_experiment, ExperimentOutcome};
pub use svg::{emit_image_grid_svg, emit_scatter_svg, render_image_grid_svg, render_scatter_svg};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_DIVERGENCE: i32 = 4;
pub const EXIT_INTERNAL: i32 = 1;

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_) | Error::Config(_) => EXIT_USAGE,
        Error::Format(_) | Error::Io { .. } | Error::Consistency(_) => EXIT_DATA,
        Error::Divergence { .. } | Error::NonFinite(_) => EXIT_DIVERGENCE,
        Error::Shape { .. } | Error::Ordering(_) | Error::Invariant(_) | Error::Comparison(_) => {
            EXIT_INTERNAL
        }
    }
}
