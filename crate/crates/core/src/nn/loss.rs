use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Predictions are clamped to `[BCE_EPS, 1 - BCE_EPS]` before taking logs.
pub const BCE_EPS: f64 = 1e-12;

/// Mean binary cross-entropy over all elements.
pub fn bce_loss(predictions: &Matrix, labels: &Matrix) -> Result<f64> {
    if predictions.shape() != labels.shape() {
        return Err(Error::shape(
            "bce_loss",
            format!("{:?}", predictions.shape()),
            format!("{:?}", labels.shape()),
        ));
    }
    if predictions.is_empty() {
        return Err(Error::Config("bce_loss on an empty batch".into()));
    }
    let total: f64 = predictions
        .as_slice()
        .iter()
        .zip(labels.as_slice())
        .map(|(&p, &y)| {
            let p = p.clamp(BCE_EPS, 1.0 - BCE_EPS);
            -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
        })
        .sum();
    Ok((total / predictions.as_slice().len() as f64).max(0.0))
}
