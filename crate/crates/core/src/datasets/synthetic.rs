//! Noiseless 2-D ground-truth shapes.

use std::f64::consts::TAU;

use crate::datasets::{Dataset2D, Rng};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Ellipse centred at `(cx, cy)` with axis-aligned semi-axes `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub cx: f64,
    pub cy: f64,
    pub a: f64,
    pub b: f64,
}

pub const ELLIPSE_A: Ellipse = Ellipse { cx: 0.0, cy: 0.0, a: 2.0, b: 1.0 };
pub const ELLIPSE_B: Ellipse = Ellipse { cx: 1.0, cy: 0.0, a: 1.0, b: 2.0 };
pub const CIRCLE_RADII: [f64; 3] = [1.0, 2.0, 3.0];

/// `x ~ U[0, 2π)`, `y = sin x`.
pub fn gen_sine(n: usize, rng: &mut Rng) -> Result<Dataset2D> {
    if n == 0 {
        return Err(Error::Config("sine dataset needs at least one point".into()));
    }
    let mut data = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let x = rng.uniform(0.0, TAU);
        data.push(x);
        data.push(x.sin());
    }
    Dataset2D::new(Matrix::from_vec(n, 2, data)?)
}

fn push_ellipse(e: Ellipse, count: usize, rng: &mut Rng, out: &mut Vec<f64>) {
    for _ in 0..count {
        let t = rng.uniform(0.0, TAU);
        out.push(e.cx + e.a * t.cos());
        out.push(e.cy + e.b * t.sin());
    }
}

/// Two overlapping ellipse outlines; the first `ceil(n/2)` points lie on
/// [`ELLIPSE_A`], the rest on [`ELLIPSE_B`].
pub fn gen_ellipses(n: usize, rng: &mut Rng) -> Result<Dataset2D> {
    if n < 2 {
        return Err(Error::Config(format!("ellipses dataset needs n >= 2, got {n}")));
    }
    let first = n.div_ceil(2);
    let mut data = Vec::with_capacity(2 * n);
    push_ellipse(ELLIPSE_A, first, rng, &mut data);
    push_ellipse(ELLIPSE_B, n - first, rng, &mut data);
    Dataset2D::new(Matrix::from_vec(n, 2, data)?)
}

/// Point counts per circle: `n / 3` each, remainder to the innermost ones.
pub fn circle_counts(n: usize) -> [usize; 3] {
    let base = n / 3;
    let extra = n % 3;
    [0, 1, 2].map(|i| base + usize::from(i < extra))
}

/// Three concentric origin-centred circles of radius 1, 2 and 3, in that
/// order.
pub fn gen_circles(n: usize, rng: &mut Rng) -> Result<Dataset2D> {
    if n < 3 {
        return Err(Error::Config(format!("circles dataset needs n >= 3, got {n}")));
    }
    let mut data = Vec::with_capacity(2 * n);
    for (r, count) in CIRCLE_RADII.iter().zip(circle_counts(n)) {
        let circle = Ellipse { cx: 0.0, cy: 0.0, a: *r, b: *r };
        push_ellipse(circle, count, rng, &mut data);
    }
    Dataset2D::new(Matrix::from_vec(n, 2, data)?)
}
