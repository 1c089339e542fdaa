use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::{Error, Result};
use crate::training::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Gan,
    Cen,
    Both,
}

impl RunMode {
    pub fn modes(self) -> &'static [Mode] {
        match self {
            RunMode::Gan => &[Mode::Gan],
            RunMode::Cen => &[Mode::Cen],
            RunMode::Both => &[Mode::Gan, Mode::Cen],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatasetKind {
    Sine,
    Ellipses,
    Circles,
    Mnist,
    Mnist123,
}

impl DatasetKind {
    pub fn is_mnist(self) -> bool {
        matches!(self, DatasetKind::Mnist | DatasetKind::Mnist123)
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

pub const DEFAULT_BATCH_2D: usize = 64;
pub const DEFAULT_BATCH_MNIST: usize = 128;
pub const DEFAULT_DATASET_SIZE: usize = 2048;

/// Command-line flags.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "cenlab",
    version,
    about = "Train a GAN and/or a gated cooperative (CEN) variant and compare them"
)]
pub struct Cli {
    /// Which training loop(s) to run.
    #[arg(long, value_enum, default_value_t = RunMode::Both)]
    pub mode: RunMode,

    #[arg(long, value_enum, default_value_t = DatasetKind::Sine)]
    pub dataset: DatasetKind,

    #[arg(long, default_value_t = 800)]
    pub epochs: usize,

    /// Defaults to 64 for 2-D datasets and 128 for MNIST.
    #[arg(long)]
    pub batch_size: Option<usize>,

    /// Points to generate for 2-D datasets (default 2048); for MNIST, keeps
    /// only the first N images.
    #[arg(long)]
    pub dataset_size: Option<usize>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, default_value_t = 100)]
    pub checkpoint_every: usize,

    /// Histogram bins per axis for the JS divergence.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,

    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,

    /// IDX image file (required for mnist datasets).
    #[arg(long)]
    pub mnist_images: Option<PathBuf>,

    /// IDX label file (required for mnist datasets).
    #[arg(long)]
    pub mnist_labels: Option<PathBuf>,

    /// Write zeros in every wall-clock column so outputs are byte-stable.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MnistPaths {
    pub images: PathBuf,
    pub labels: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: RunMode,
    pub dataset: DatasetKind,
    pub epochs: usize,
    pub batch_size: usize,
    /// `None` for MNIST means the whole (sub)set.
    pub dataset_size: Option<usize>,
    pub seed: u64,
    pub checkpoint_every: usize,
    pub bins: usize,
    pub out_dir: PathBuf,
    pub mnist: Option<MnistPaths>,
    pub no_timing: bool,
}

impl ExperimentConfig {
    /// Non-fatal oddities worth telling the user about.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.epochs < self.checkpoint_every {
            out.push(format!(
                "epochs ({}) < checkpoint interval ({}); only the final epoch will be checkpointed",
                self.epochs, self.checkpoint_every
            ));
        } else if self.epochs % self.checkpoint_every != 0 {
            out.push(format!(
                "epochs ({}) is not a multiple of the checkpoint interval ({}); trailing epochs are not checkpointed",
                self.epochs, self.checkpoint_every
            ));
        }
        out
    }
}

impl Cli {
    pub fn into_config(self) -> Result<ExperimentConfig> {
        for (name, value) in [
            ("--epochs", self.epochs),
            ("--checkpoint-every", self.checkpoint_every),
            ("--bins", self.bins),
        ] {
            if value == 0 {
                return Err(Error::Usage(format!("{name} must be at least 1")));
            }
        }
        if self.batch_size == Some(0) {
            return Err(Error::Usage("--batch-size must be at least 1".into()));
        }
        if self.dataset_size == Some(0) {
            return Err(Error::Usage("--dataset-size must be at least 1".into()));
        }
        let mnist = if self.dataset.is_mnist() {
            match (self.mnist_images, self.mnist_labels) {
                (Some(images), Some(labels)) => Some(MnistPaths { images, labels }),
                (None, _) => return Err(Error::Usage(format!("--dataset {} requires --mnist-images", self.dataset))),
                (_, None) => return Err(Error::Usage(format!("--dataset {} requires --mnist-labels", self.dataset))),
            }
        } else {
            None
        };
        let (batch_default, size_default) = if self.dataset.is_mnist() {
            (DEFAULT_BATCH_MNIST, None)
        } else {
            (DEFAULT_BATCH_2D, Some(DEFAULT_DATASET_SIZE))
        };
        Ok(ExperimentConfig {
            mode: self.mode,
            dataset: self.dataset,
            epochs: self.epochs,
            batch_size: self.batch_size.unwrap_or(batch_default),
            dataset_size: self.dataset_size.or(size_default),
            seed: self.seed,
            checkpoint_every: self.checkpoint_every,
            bins: self.bins,
            out_dir: self.out_dir,
            mnist,
            no_timing: self.no_timing,
        })
    }
}

/// Parses and validates `argv` (program name first).
pub fn parse_cli<I, T>(argv: I) -> Result<ExperimentConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
        .map_err(|e| Error::Usage(e.to_string()))?
        .into_config()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<ExperimentConfig> {
        parse_cli(std::iter::once("cenlab").chain(args.iter().copied()))
    }

    #[test]
    fn defaults() {
        let c = parse(&["--mode", "both", "--dataset", "sine"]).unwrap();
        assert_eq!(c.mode, RunMode::Both);
        assert_eq!((c.epochs, c.checkpoint_every, c.batch_size), (800, 100, 64));
        assert_eq!((c.dataset_size, c.seed, c.bins), (Some(2048), 42, 50));
        assert!(!c.no_timing);
        assert!(c.warnings().is_empty());
    }

    #[test]
    fn mnist_needs_paths() {
        assert!(matches!(parse(&["--dataset", "mnist"]), Err(Error::Usage(_))));
        assert!(matches!(
            parse(&["--dataset", "mnist123", "--mnist-images", "a"]),
            Err(Error::Usage(_))
        ));
        let c = parse(&["--dataset", "mnist", "--mnist-images", "a", "--mnist-labels", "b"]).unwrap();
        assert_eq!(c.batch_size, 128);
        assert_eq!(c.dataset_size, None);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(parse(&["--epochs", "0"]), Err(Error::Usage(_))));
        assert!(matches!(parse(&["--epochs", "ten"]), Err(Error::Usage(_))));
        assert!(matches!(parse(&["--mode", "coop"]), Err(Error::Usage(_))));
        assert!(matches!(parse(&["--frobnicate"]), Err(Error::Usage(_))));
        assert!(matches!(parse(&["--batch-size", "0"]), Err(Error::Usage(_))));
    }

    #[test]
    fn short_run_warns() {
        let c = parse(&["--epochs", "50"]).unwrap();
        assert_eq!(c.warnings().len(), 1);
    }
}
