//! Sample-based Jensen–Shannon divergence and per-checkpoint run logs.
//!
//! Distributions are estimated with a fixed-geometry 2-D histogram whose
//! support comes from the ground truth alone, so values stay comparable
//! across checkpoints and across training modes.

mod runlog;

pub use runlog::{CheckpointRow, RunLog};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Fraction of the ground-truth extent added on each side of the support.
pub const SUPPORT_MARGIN: f64 = 0.1;
/// Half-width used for an axis on which every ground-truth point coincides.
pub const DEGENERATE_HALF_WIDTH: f64 = 0.5;
pub const DEFAULT_BINS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Support {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(Error::Config(format!(
                "degenerate support ({x_min}, {x_max}, {y_min}, {y_max})"
            )));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

fn check_2d(points: &Matrix, op: &'static str) -> Result<()> {
    if points.cols() != 2 {
        return Err(Error::shape(op, "2 columns", points.cols()));
    }
    Ok(())
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = SUPPORT_MARGIN * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - DEGENERATE_HALF_WIDTH, hi + DEGENERATE_HALF_WIDTH)
    }
}

/// Ground-truth bounding box grown by 10% per side; a zero-extent axis is
/// widened by ±0.5 instead.
pub fn fit_support(ground_truth: &Matrix) -> Result<Support> {
    check_2d(ground_truth, "fit_support")?;
    if ground_truth.rows() == 0 {
        return Err(Error::Config("cannot fit a support to zero points".into()));
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for r in 0..ground_truth.rows() {
        for (k, &v) in ground_truth.row(r).iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let (x_min, x_max) = padded(lo[0], hi[0]);
    let (y_min, y_max) = padded(lo[1], hi[1]);
    Support::new(x_min, x_max, y_min, y_max)
}

/// Normalised square-binned histogram over a fixed support.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2D {
    pub bins: usize,
    pub support: Support,
    /// Row-major `bins × bins`, indexed `[ix * bins + iy]`.
    pub mass: Vec<f64>,
    /// Points that fell outside the support.
    pub dropped: usize,
}

impl Histogram2D {
    pub fn is_empty(&self) -> bool {
        self.mass.iter().all(|&m| m == 0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    fn same_geometry(&self, other: &Histogram2D) -> bool {
        self.bins == other.bins && self.support == other.support && self.mass.len() == other.mass.len()
    }
}

#[inline]
fn bin_index(v: f64, lo: f64, hi: f64, bins: usize) -> usize {
    let t = ((v - lo) / (hi - lo) * bins as f64).floor() as usize;
    t.min(bins - 1)
}

pub fn histogram2d(points: &Matrix, support: Support, bins: usize) -> Result<Histogram2D> {
    check_2d(points, "histogram2d")?;
    if bins == 0 {
        return Err(Error::Config("histogram needs at least one bin".into()));
    }
    let mut counts = vec![0usize; bins * bins];
    let mut dropped = 0;
    for r in 0..points.rows() {
        let (x, y) = (points.get(r, 0), points.get(r, 1));
        if !support.contains(x, y) {
            dropped += 1;
            continue;
        }
        let ix = bin_index(x, support.x_min, support.x_max, bins);
        let iy = bin_index(y, support.y_min, support.y_max, bins);
        counts[ix * bins + iy] += 1;
    }
    let inside = points.rows() - dropped;
    let mass = if inside == 0 {
        vec![0.0; bins * bins]
    } else {
        counts.iter().map(|&c| c as f64 / inside as f64).collect()
    };
    Ok(Histogram2D { bins, support, mass, dropped })
}

/// Jensen–Shannon divergence in bits between two normalised mass vectors.
/// Bins where a distribution has no mass contribute nothing for it.
fn js_bits(p: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let m = 0.5 * (a + b);
        if m == 0.0 {
            continue;
        }
        if a > 0.0 {
            total += 0.5 * a * (a / m).log2();
        }
        if b > 0.0 {
            total += 0.5 * b * (b / m).log2();
        }
    }
    total.clamp(0.0, 1.0)
}

/// `½·KL(P‖M) + ½·KL(Q‖M)` with `M = ½(P+Q)`, base-2 logs, so the value lies
/// in `[0, 1]`. An empty histogram against a non-empty one scores 1.
pub fn js_divergence(p: &Histogram2D, q: &Histogram2D) -> Result<f64> {
    if !p.same_geometry(q) {
        return Err(Error::Config(
            "histograms differ in bin count or support".into(),
        ));
    }
    match (p.is_empty(), q.is_empty()) {
        (true, true) => Ok(0.0),
        (true, false) | (false, true) => Ok(1.0),
        (false, false) => Ok(js_bits(&p.mass, &q.mass)),
    }
}

/// JS divergence between two point clouds, binned on the ground truth's
/// support.
pub fn js_between_samples(generated: &Matrix, ground_truth: &Matrix, bins: usize) -> Result<f64> {
    if generated.rows() == 0 || ground_truth.rows() == 0 {
        return Err(Error::Config("JS divergence needs non-empty samples".into()));
    }
    let support = fit_support(ground_truth)?;
    js_on_support(generated, ground_truth, support, bins)
}

/// As [`js_between_samples`] with a support fixed in advance.
pub fn js_on_support(generated: &Matrix, ground_truth: &Matrix, support: Support, bins: usize) -> Result<f64> {
    let p = histogram2d(generated, support, bins)?;
    let q = histogram2d(ground_truth, support, bins)?;
    js_divergence(&p, &q)
}

/// Projects flattened images onto `(pixel mean, pixel variance)` per row.
pub fn pixel_moments(images: &Matrix) -> Matrix {
    let n = images.cols().max(1) as f64;
    let mut data = Vec::with_capacity(images.rows() * 2);
    for r in 0..images.rows() {
        let row = images.row(r);
        let mean = row.iter().sum::<f64>() / n;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        data.push(mean);
        data.push(var);
    }
    Matrix::from_vec(images.rows(), 2, data).expect("sized above")
}
