use crate::datasets::{sample_latent, Rng};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::{
    backward, bce_loss, loss_preactivation_grad, optimizer_step, Activation, AdamConfig, AdamState,
    LossKind, Mlp,
};
use crate::training::{AdversarialSteps, ErrorPair};

/// Generator, discriminator and their optimizer states.
#[derive(Debug, Clone, PartialEq)]
pub struct GanModel {
    pub generator: Mlp,
    pub discriminator: Mlp,
    pub gen_opt: AdamState,
    pub disc_opt: AdamState,
}

impl GanModel {
    pub fn new(generator: Mlp, discriminator: Mlp, adam: AdamConfig) -> Result<Self> {
        if generator.out_dim() != discriminator.in_dim() {
            return Err(Error::shape(
                "GanModel::new",
                format!("discriminator input {}", generator.out_dim()),
                discriminator.in_dim(),
            ));
        }
        if discriminator.out_dim() != 1 || discriminator.output_activation() != Activation::Sigmoid {
            return Err(Error::Config(
                "discriminator must end in a single sigmoid unit".into(),
            ));
        }
        let gen_opt = AdamState::new(&generator, adam);
        let disc_opt = AdamState::new(&discriminator, adam);
        Ok(Self {
            generator,
            discriminator,
            gen_opt,
            disc_opt,
        })
    }

    pub fn latent_dim(&self) -> usize {
        self.generator.in_dim()
    }

    pub fn data_dim(&self) -> usize {
        self.generator.out_dim()
    }

    /// `n` generated samples from fresh latents.
    pub fn generate(&self, n: usize, rng: &mut Rng) -> Result<Matrix> {
        let z = sample_latent(n, self.latent_dim(), rng)?;
        self.generator.predict(&z)
    }

    fn check_batch(&self, real: &Matrix) -> Result<()> {
        if real.rows() == 0 {
            return Err(Error::Config("empty real batch".into()));
        }
        if real.cols() != self.data_dim() {
            return Err(Error::shape(
                "real batch",
                format!("{} columns", self.data_dim()),
                real.cols(),
            ));
        }
        Ok(())
    }
}

pub fn compute_errors(model: &GanModel, real: &Matrix, rng: &mut Rng) -> Result<ErrorPair> {
    model.check_batch(real)?;
    let fake = model.generate(real.rows(), rng)?;
    let dx = bce_loss(&model.discriminator.predict(real)?, &Matrix::filled(real.rows(), 1, 1.0))?;
    let dz = bce_loss(&model.discriminator.predict(&fake)?, &Matrix::zeros(fake.rows(), 1))?;
    Ok(ErrorPair { dx, dz })
}

/// One Adam step on the discriminator against `dx + dz`. The generator only
/// runs forward.
pub fn train_discriminator_step(model: &mut GanModel, real: &Matrix, rng: &mut Rng) -> Result<ErrorPair> {
    model.check_batch(real)?;
    let fake = model.generate(real.rows(), rng)?;
    let ones = Matrix::filled(real.rows(), 1, 1.0);
    let zeros = Matrix::zeros(fake.rows(), 1);
    let d = &model.discriminator;

    let (p_real, real_cache) = d.forward(real)?;
    let (p_fake, fake_cache) = d.forward(&fake)?;
    let errors = ErrorPair {
        dx: bce_loss(&p_real, &ones)?,
        dz: bce_loss(&p_fake, &zeros)?,
    };
    let grads = backward(d, &real_cache, LossKind::Bce, &ones)?
        .add(&backward(d, &fake_cache, LossKind::Bce, &zeros)?)?;
    optimizer_step(&mut model.discriminator, &grads, &mut model.disc_opt)?;
    Ok(errors)
}

/// One Adam step on the generator that increases `dz = BCE(D(G(z)), 0)`.
/// The discriminator only supplies gradients.
pub fn train_generator_step(model: &mut GanModel, rows: usize, rng: &mut Rng) -> Result<f64> {
    let z = sample_latent(rows, model.latent_dim(), rng)?;
    let (fake, gen_cache) = model.generator.forward(&z)?;
    let (p_fake, disc_cache) = model.discriminator.forward(&fake)?;
    let zeros = Matrix::zeros(rows, 1);
    let dz = bce_loss(&p_fake, &zeros)?;

    let logit_grad = loss_preactivation_grad(&model.discriminator, &disc_cache, LossKind::Bce, &zeros)?;
    let (_, fake_grad) = model
        .discriminator
        .backward_from_preactivation(&disc_cache, logit_grad)?;
    let (mut grads, _) = model.generator.backward_from_output(&gen_cache, &fake_grad)?;
    // ascent on dz
    grads.negate();
    optimizer_step(&mut model.generator, &grads, &mut model.gen_opt)?;
    Ok(dz)
}

impl AdversarialSteps for GanModel {
    fn compute_errors(&mut self, real: &Matrix, rng: &mut Rng) -> Result<ErrorPair> {
        compute_errors(self, real, rng)
    }

    fn train_discriminator(&mut self, real: &Matrix, rng: &mut Rng) -> Result<ErrorPair> {
        train_discriminator_step(self, real, rng)
    }

    fn train_generator(&mut self, rows: usize, rng: &mut Rng) -> Result<f64> {
        train_generator_step(self, rows, rng)
    }
}
