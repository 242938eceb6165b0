//! Scenario runner and figure reproduction behind the `lifting` binary.
//!
//! Everything here is deterministic: the same config and tolerance give
//! byte-identical output regardless of the worker count.

mod figures;
mod output;
mod scenario;

pub use figures::{reproduce_figure, FigureId, FIGURE_IDS};
pub use output::{Format, Table};
pub use scenario::{
    run_scenario, Amplitudes, ComparisonReport, ParamsConfig, PHASE_FLOOR, ModelName, ModelSummary, ReportRow, RowModel, Scenario, ShapeConfig, ShapeName,
    SweepConfig, SweepParameter,
};

use std::path::PathBuf;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// A configured threshold (or an acceptance criterion) was breached.
pub const EXIT_THRESHOLD: i32 = 2;
/// The config could not be read or is invalid.
pub const EXIT_CONFIG: i32 = 3;
/// A numerical evaluation failed.
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Config { path: String, message: String },
    #[error("{0}")]
    Numeric(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Numeric(_) | CliError::Io { .. } => EXIT_NUMERIC,
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { path: path.into(), message: message.into() }
    }
}

/// Evaluation settings shared by every verb.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Integrator tolerance.
    pub tol: f64,
    /// Worker threads for sweep rows; 0 lets rayon decide.
    pub workers: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tol: crate::propagator::DEFAULT_TOL, workers: 0 }
    }
}

impl RunOptions {
    /// Runs `f` inside a pool of the configured size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

/// Continues a sequence of phases across 2 pi jumps, skipping non-finite
/// entries (failed rows) without breaking the branch.
pub(crate) fn unwrap_skipping(phases: &mut [f64]) {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut prev: Option<f64> = None;
    for p in phases.iter_mut().filter(|p| p.is_finite()) {
        if let Some(q) = prev {
            *p -= two_pi * ((*p - q) / two_pi).round();
        }
        prev = Some(*p);
    }
}
