use std::fmt;
use std::str::FromStr;

use crate::datasets::{batches, Rng};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::{fit_support, js_on_support, pixel_moments, CheckpointRow, RunLog, Support};
use crate::training::{cen_iteration, gan_iteration, GanModel, GateState, StepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Gan,
    Cen,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Gan => "gan",
            Mode::Cen => "cen",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gan" => Ok(Mode::Gan),
            "cen" => Ok(Mode::Cen),
            other => Err(Error::Config(format!("unknown training mode `{other}`"))),
        }
    }
}

/// Space in which generated and real samples are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSpace {
    /// Samples are already 2-D points.
    Plane,
    /// Images projected to (pixel mean, pixel variance).
    PixelMoments,
}

impl MetricSpace {
    fn project(self, samples: &Matrix) -> Matrix {
        match self {
            MetricSpace::Plane => samples.clone(),
            MetricSpace::PixelMoments => pixel_moments(samples),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingConfig {
    pub mode: Mode,
    pub epochs: usize,
    pub batch_size: usize,
    pub checkpoint_every: usize,
    pub bins: usize,
    pub metric: MetricSpace,
}

/// Epochs (1-based) at which a checkpoint is taken: every multiple of
/// `every`, or just the final epoch when `epochs < every`.
pub fn checkpoint_epochs(epochs: usize, every: usize) -> Vec<usize> {
    if every == 0 || epochs == 0 {
        return Vec::new();
    }
    if epochs < every {
        return vec![epochs];
    }
    (1..=epochs / every).map(|k| k * every).collect()
}

/// One training iteration as seen by an observer.
#[derive(Debug, Clone, Copy)]
pub struct IterationEvent<'a> {
    pub epoch: usize,
    pub batch: usize,
    pub report: &'a StepReport,
    /// Gate memory entering the iteration (always cold in GAN mode).
    pub gate_before: GateState,
}

/// Hooks into [`run_training_observed`].
pub trait TrainingObserver {
    fn on_iteration(&mut self, _event: &IterationEvent<'_>) {}

    /// Called with the fresh sample drawn for each checkpoint.
    fn on_checkpoint(&mut self, _epoch: usize, _generated: &Matrix) -> Result<()> {
        Ok(())
    }
}

pub struct NoObserver;

impl TrainingObserver for NoObserver {}

pub fn run_training(
    model: &mut GanModel,
    dataset: &Matrix,
    config: &TrainingConfig,
    rng: &mut Rng,
) -> Result<RunLog> {
    run_training_observed(model, dataset, config, rng, &mut NoObserver)
}

/// Trains for `config.epochs` epochs. Gate memory carries across epoch
/// boundaries. Checkpoint samples come from a stream forked off `rng` up
/// front, so the checkpoint cadence does not perturb training.
pub fn run_training_observed(
    model: &mut GanModel,
    dataset: &Matrix,
    config: &TrainingConfig,
    rng: &mut Rng,
    observer: &mut dyn TrainingObserver,
) -> Result<RunLog> {
    if config.epochs == 0 {
        return Err(Error::Config("epochs must be at least 1".into()));
    }
    if config.checkpoint_every == 0 {
        return Err(Error::Config("checkpoint interval must be at least 1".into()));
    }
    if dataset.rows() == 0 || dataset.cols() != model.data_dim() {
        return Err(Error::shape(
            "run_training",
            format!("non-empty dataset with {} columns", model.data_dim()),
            format!("{:?}", dataset.shape()),
        ));
    }

    let truth = config.metric.project(dataset);
    let support: Support = fit_support(&truth)?;
    let checkpoints = checkpoint_epochs(config.epochs, config.checkpoint_every);
    let mut eval_rng = rng.fork();

    let mut log = RunLog::new();
    let mut gate = GateState::cold();
    let (mut g_updates, mut d_updates, mut elapsed_ns) = (0u64, 0u64, 0u64);

    for epoch in 1..=config.epochs {
        for (batch_idx, batch) in batches(dataset, config.batch_size, rng)?.iter().enumerate() {
            let gate_before = gate;
            let outcome = match config.mode {
                Mode::Gan => gan_iteration(model, batch, rng),
                Mode::Cen => cen_iteration(model, batch, &gate, rng).map(|(report, next)| {
                    gate = next;
                    report
                }),
            };
            let report = outcome.map_err(|e| match e {
                Error::NonFinite(detail) => Error::Divergence {
                    epoch,
                    batch: batch_idx,
                    detail,
                },
                other => other,
            })?;
            if !report.errors.is_finite() {
                return Err(Error::Divergence {
                    epoch,
                    batch: batch_idx,
                    detail: format!("dx = {}, dz = {}", report.errors.dx, report.errors.dz),
                });
            }
            g_updates += u64::from(report.g_updated);
            d_updates += u64::from(report.d_updated);
            elapsed_ns += u64::try_from(report.elapsed.as_nanos()).unwrap_or(u64::MAX);
            observer.on_iteration(&IterationEvent {
                epoch,
                batch: batch_idx,
                report: &report,
                gate_before,
            });
        }

        if checkpoints.contains(&epoch) {
            let generated = model
                .generate(dataset.rows(), &mut eval_rng)
                .map_err(|e| match e {
                    Error::NonFinite(detail) => Error::Divergence {
                        epoch,
                        batch: 0,
                        detail,
                    },
                    other => other,
                })?;
            let js = js_on_support(&config.metric.project(&generated), &truth, support, config.bins)?;
            log.record_checkpoint(CheckpointRow {
                epoch,
                js_divergence: js,
                cumulative_elapsed_ns: elapsed_ns,
                g_update_count: g_updates,
                d_update_count: d_updates,
            })?;
            observer.on_checkpoint(epoch, &generated)?;
        }
    }
    Ok(log)
}
