//! Ground-truth data: synthetic 2-D shapes, MNIST via IDX, batching and
//! latent sampling.

mod idx;
mod rng;
mod synthetic;

pub use idx::{
    decode_mnist, digits_123_request, encode_images, encode_labels, load_mnist_idx, subset_mnist,
    IMAGES_MAGIC, LABELS_MAGIC,
};
pub use rng::Rng;
pub use synthetic::{
    circle_counts, gen_circles, gen_ellipses, gen_sine, Ellipse, CIRCLE_RADII, ELLIPSE_A, ELLIPSE_B,
};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// An `N × 2` point cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset2D {
    points: Matrix,
}

impl Dataset2D {
    pub fn new(points: Matrix) -> Result<Self> {
        if points.cols() != 2 || points.rows() == 0 {
            return Err(Error::shape("Dataset2D::new", "N x 2 with N >= 1", format!("{:?}", points.shape())));
        }
        if !points.all_finite() {
            return Err(Error::Config("dataset contains non-finite coordinates".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn into_points(self) -> Matrix {
        self.points
    }
}

/// Images flattened to `N × (rows·cols)` with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MnistSet {
    pub images: Matrix,
    pub labels: Vec<u8>,
    pub image_rows: usize,
    pub image_cols: usize,
}

impl MnistSet {
    pub fn new(images: Matrix, labels: Vec<u8>, image_rows: usize, image_cols: usize) -> Result<Self> {
        if images.rows() != labels.len() {
            return Err(Error::Consistency(format!(
                "{} images but {} labels",
                images.rows(),
                labels.len()
            )));
        }
        if images.cols() != image_rows * image_cols {
            return Err(Error::shape(
                "MnistSet::new",
                format!("{} pixels per image", image_rows * image_cols),
                images.cols(),
            ));
        }
        if images.as_slice().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Format("pixel value outside [0, 1]".into()));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 9) {
            return Err(Error::Format(format!("label {bad} outside 0-9")));
        }
        Ok(Self {
            images,
            labels,
            image_rows,
            image_cols,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of images carrying each digit.
    pub fn digit_counts(&self) -> [usize; 10] {
        let mut counts = [0; 10];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }
}

/// One epoch of mini-batches: rows are shuffled once, then chunked. The last
/// batch keeps the remainder.
pub fn batches(points: &Matrix, batch_size: usize, rng: &mut Rng) -> Result<Vec<Matrix>> {
    if batch_size == 0 {
        return Err(Error::Config("batch size must be at least 1".into()));
    }
    let mut order: Vec<usize> = (0..points.rows()).collect();
    rng.shuffle(&mut order);
    Ok(order.chunks(batch_size).map(|idx| points.select_rows(idx)).collect())
}

/// `n × dim` matrix of i.i.d. `U[-1, 1)` draws.
pub fn sample_latent(n: usize, dim: usize, rng: &mut Rng) -> Result<Matrix> {
    if n == 0 || dim == 0 {
        return Err(Error::Config(format!("latent sample needs n, dim >= 1, got {n}x{dim}")));
    }
    Matrix::from_vec(n, dim, (0..n * dim).map(|_| rng.uniform(-1.0, 1.0)).collect())
}
