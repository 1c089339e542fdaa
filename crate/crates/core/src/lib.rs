//! Adversarial (GAN) and cooperatively gated (CEN) generative training over a
//! small dense-network engine, with Jensen–Shannon benchmarking.
//!
//! - [`nn`]: dense layers, BCE loss, reverse-mode gradients, Adam, and a
//!   finite-difference gradient check.
//! - [`datasets`]: sine / ellipses / circles generators, IDX (MNIST) loading,
//!   batching and latent sampling.
//! - [`training`]: the two training loops and the CEN gate.
//! - [`metrics`]: histogram-based Jensen–Shannon divergence and run logs.
//! - [`harness`]: configuration, experiment runner, CSV and SVG output.

pub mod datasets;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod metrics;
pub mod nn;
pub mod training;

pub use error::{Error, Result};
pub use matrix::Matrix;
