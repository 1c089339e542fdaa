//! Adversarial and cooperatively gated training loops.
//!
//! Both loops are written against [`AdversarialSteps`], so the only thing
//! separating a GAN iteration from a CEN iteration is the gate. [`GanModel`]
//! is the real implementation; tests substitute scripted ones.

mod gate;
mod model;
mod run;

pub use gate::{cen_gate, GateState};
pub use model::{compute_errors, train_discriminator_step, train_generator_step, GanModel};
pub use run::{
    checkpoint_epochs, run_training, run_training_observed, IterationEvent, MetricSpace, Mode,
    NoObserver, TrainingConfig, TrainingObserver,
};

use std::time::{Duration, Instant};

use crate::datasets::Rng;
use crate::error::Result;
use crate::matrix::Matrix;

/// Discriminator losses on one real batch and one generated batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    /// BCE of `D(X)` against label 1.
    pub dx: f64,
    /// BCE of `D(G(z))` against label 0.
    pub dz: f64,
}

impl ErrorPair {
    /// The generator's gate quantity, `dz`.
    pub fn gen_error(&self) -> f64 {
        self.dz
    }

    /// The discriminator's gate quantity, `dx + dz`.
    pub fn disc_error(&self) -> f64 {
        self.dx + self.dz
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dz.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub errors: ErrorPair,
    pub g_updated: bool,
    pub d_updated: bool,
    pub elapsed: Duration,
}

/// The three primitives both training loops are built from.
pub trait AdversarialSteps {
    /// Errors on `real` and a fresh generated batch of the same size. No
    /// parameters change.
    fn compute_errors(&mut self, real: &Matrix, rng: &mut Rng) -> Result<ErrorPair>;

    /// One descent step on `dx + dz`; returns the pre-update errors.
    fn train_discriminator(&mut self, real: &Matrix, rng: &mut Rng) -> Result<ErrorPair>;

    /// One ascent step on `dz` for a fresh batch of `rows` samples; returns
    /// the pre-update `dz`.
    fn train_generator(&mut self, rows: usize, rng: &mut Rng) -> Result<f64>;
}

fn elapsed_since(start: Instant) -> Duration {
    start.elapsed().max(Duration::from_nanos(1))
}

/// Discriminator step, then generator step on fresh latents. Both modules are
/// updated every time.
pub fn gan_iteration<S: AdversarialSteps + ?Sized>(
    steps: &mut S,
    real: &Matrix,
    rng: &mut Rng,
) -> Result<StepReport> {
    let start = Instant::now();
    let errors = steps.train_discriminator(real, rng)?;
    steps.train_generator(real.rows(), rng)?;
    Ok(StepReport {
        errors,
        g_updated: true,
        d_updated: true,
        elapsed: elapsed_since(start),
    })
}

/// Errors first, then a gated generator step, then a gated discriminator
/// step. The returned state always holds this iteration's top errors.
pub fn cen_iteration<S: AdversarialSteps + ?Sized>(
    steps: &mut S,
    real: &Matrix,
    state: &GateState,
    rng: &mut Rng,
) -> Result<(StepReport, GateState)> {
    cen_iteration_with_gate(steps, real, state, rng, cen_gate)
}

/// [`cen_iteration`] with a substitute gate.
pub fn cen_iteration_with_gate<S, G>(
    steps: &mut S,
    real: &Matrix,
    state: &GateState,
    rng: &mut Rng,
    gate: G,
) -> Result<(StepReport, GateState)>
where
    S: AdversarialSteps + ?Sized,
    G: Fn(&ErrorPair, &GateState) -> (bool, bool),
{
    let start = Instant::now();
    let errors = steps.compute_errors(real, rng)?;
    let (train_g, train_d) = gate(&errors, state);
    if train_g {
        steps.train_generator(real.rows(), rng)?;
    }
    if train_d {
        steps.train_discriminator(real, rng)?;
    }
    let report = StepReport {
        errors,
        g_updated: train_g,
        d_updated: train_d,
        elapsed: elapsed_since(start),
    };
    Ok((report, GateState::after(&errors)))
}
