use std::path::{Path, PathBuf};

use rand::RngCore;

use crate::datasets::{
    digits_123_request, gen_circles, gen_ellipses, gen_sine, load_mnist_idx, subset_mnist, Rng,
};
use crate::error::{Error, Result};
use crate::harness::csv::{emit_metrics_csv, format_summary_csv, write_file};
use crate::harness::svg::{emit_image_grid_svg, emit_scatter_svg};
use crate::harness::{compare_runs, ComparisonSummary, DatasetKind, ExperimentConfig};
use crate::matrix::Matrix;
use crate::metrics::RunLog;
use crate::nn::{init_mlp, Activation, AdamConfig};
use crate::training::{
    run_training_observed, GanModel, MetricSpace, Mode, TrainingConfig, TrainingObserver,
};

pub const LATENT_DIM_2D: usize = 2;
pub const LATENT_DIM_MNIST: usize = 64;

/// Layer sizes and activations for both networks.
#[derive(Debug, Clone, PartialEq)]
pub struct Architecture {
    pub generator: (Vec<usize>, Vec<Activation>),
    pub discriminator: (Vec<usize>, Vec<Activation>),
}

pub fn architecture(dataset: DatasetKind, data_dim: usize) -> Architecture {
    use Activation::*;
    if dataset.is_mnist() {
        Architecture {
            generator: (vec![LATENT_DIM_MNIST, 256, data_dim], vec![LeakyRelu, Sigmoid]),
            discriminator: (vec![data_dim, 256, 1], vec![LeakyRelu, Sigmoid]),
        }
    } else {
        Architecture {
            generator: (vec![LATENT_DIM_2D, 32, 32, data_dim], vec![LeakyRelu, LeakyRelu, Identity]),
            discriminator: (vec![data_dim, 32, 32, 1], vec![LeakyRelu, LeakyRelu, Sigmoid]),
        }
    }
}

/// Seeds for every random stream of an experiment, derived from the master
/// seed in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeds {
    pub data: u64,
    pub generator: u64,
    pub discriminator: u64,
    pub training: u64,
}

impl Seeds {
    pub fn derive(master: u64) -> Self {
        let mut rng = Rng::new(master);
        Self {
            data: rng.next_u64(),
            generator: rng.next_u64(),
            discriminator: rng.next_u64(),
            training: rng.next_u64(),
        }
    }
}

/// Training data plus what is needed to score and draw it.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub points: Matrix,
    pub metric: MetricSpace,
    /// `(rows, cols)` of each image for MNIST data.
    pub image_shape: Option<(usize, usize)>,
}

pub fn prepare_dataset(config: &ExperimentConfig) -> Result<PreparedData> {
    let mut rng = Rng::new(Seeds::derive(config.seed).data);
    let size = config.dataset_size;
    let synthetic = |points: Matrix| PreparedData {
        points,
        metric: MetricSpace::Plane,
        image_shape: None,
    };
    let n = size.unwrap_or(crate::harness::config::DEFAULT_DATASET_SIZE);
    match config.dataset {
        DatasetKind::Sine => Ok(synthetic(gen_sine(n, &mut rng)?.into_points())),
        DatasetKind::Ellipses => Ok(synthetic(gen_ellipses(n, &mut rng)?.into_points())),
        DatasetKind::Circles => Ok(synthetic(gen_circles(n, &mut rng)?.into_points())),
        DatasetKind::Mnist | DatasetKind::Mnist123 => {
            let paths = config
                .mnist
                .as_ref()
                .ok_or_else(|| Error::Usage("MNIST datasets need --mnist-images and --mnist-labels".into()))?;
            let mut set = load_mnist_idx(&paths.images, &paths.labels)?;
            if config.dataset == DatasetKind::Mnist123 {
                set = subset_mnist(&set, &digits_123_request())?;
            }
            let mut points = set.images;
            if let Some(cap) = size {
                let keep: Vec<usize> = (0..cap.min(points.rows())).collect();
                points = points.select_rows(&keep);
            }
            Ok(PreparedData {
                points,
                metric: MetricSpace::PixelMoments,
                image_shape: Some((set.image_rows, set.image_cols)),
            })
        }
    }
}

/// Freshly initialised networks for `config`. Every mode of one experiment
/// starts from this exact model.
pub fn initial_model(config: &ExperimentConfig, data_dim: usize) -> Result<GanModel> {
    let seeds = Seeds::derive(config.seed);
    let arch = architecture(config.dataset, data_dim);
    let generator = init_mlp(&arch.generator.0, &arch.generator.1, seeds.generator)?;
    let discriminator = init_mlp(&arch.discriminator.0, &arch.discriminator.1, seeds.discriminator)?;
    GanModel::new(generator, discriminator, AdamConfig::default())
}

pub fn metrics_path(out_dir: &Path, mode: Mode) -> PathBuf {
    out_dir.join(format!("metrics_{mode}.csv"))
}

pub fn snapshot_path(out_dir: &Path, mode: Mode, epoch: usize, images: bool) -> PathBuf {
    let stem = if images { "grid" } else { "scatter" };
    out_dir.join(format!("{stem}_{mode}_{epoch}.svg"))
}

pub fn summary_path(out_dir: &Path) -> PathBuf {
    out_dir.join("summary.csv")
}

struct SnapshotWriter<'a> {
    out_dir: &'a Path,
    mode: Mode,
    data: &'a PreparedData,
}

impl TrainingObserver for SnapshotWriter<'_> {
    fn on_checkpoint(&mut self, epoch: usize, generated: &Matrix) -> Result<()> {
        match self.data.image_shape {
            Some((rows, cols)) => emit_image_grid_svg(
                generated,
                rows,
                cols,
                &snapshot_path(self.out_dir, self.mode, epoch, true),
            ),
            None => emit_scatter_svg(
                &self.data.points,
                generated,
                &snapshot_path(self.out_dir, self.mode, epoch, false),
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub runs: Vec<(Mode, RunLog)>,
    /// Present when both modes ran.
    pub summary: Option<ComparisonSummary>,
}

/// Runs every requested mode from identical initial weights on identical
/// data, writing metrics, snapshots and (for both modes) a summary under
/// `config.out_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    std::fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))?;
    let data = prepare_dataset(config)?;
    let initial = initial_model(config, data.points.cols())?;
    let training_seed = Seeds::derive(config.seed).training;

    let mut runs = Vec::new();
    for &mode in config.mode.modes() {
        let mut model = initial.clone();
        let train_cfg = TrainingConfig {
            mode,
            epochs: config.epochs,
            batch_size: config.batch_size,
            checkpoint_every: config.checkpoint_every,
            bins: config.bins,
            metric: data.metric,
        };
        let mut writer = SnapshotWriter {
            out_dir: &config.out_dir,
            mode,
            data: &data,
        };
        let log = run_training_observed(
            &mut model,
            &data.points,
            &train_cfg,
            &mut Rng::new(training_seed),
            &mut writer,
        )
        .map_err(|e| match e {
            Error::Divergence { epoch, batch, detail } => Error::Divergence {
                epoch,
                batch,
                detail: format!("{mode} on {}: {detail}", config.dataset),
            },
            other => other,
        })?;
        emit_metrics_csv(&log, &metrics_path(&config.out_dir, mode), config.no_timing)?;
        runs.push((mode, log));
    }

    let summary = match runs.as_slice() {
        [(Mode::Gan, gan), (Mode::Cen, cen)] => {
            let summary = compare_runs(gan, cen)?;
            write_file(&summary_path(&config.out_dir), &format_summary_csv(&summary, config.no_timing))?;
            Some(summary)
        }
        _ => None,
    };
    Ok(ExperimentOutcome { runs, summary })
}
