use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::{backward, bce_loss, LossKind, Mlp};

/// Largest relative error between the analytic BCE gradient and a central
/// finite difference `(L(θ+h) - L(θ-h)) / 2h`, taken over every parameter.
///
/// The relative error of one coordinate is
/// `|analytic - numeric| / max(1e-8, |analytic| + |numeric|)`.
pub fn gradient_check(mlp: &Mlp, input: &Matrix, labels: &Matrix, h: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::Config(format!("step {h} outside [1e-7, 1e-3]")));
    }
    let (_, cache) = mlp.forward(input)?;
    let analytic: Vec<f64> = backward(mlp, &cache, LossKind::Bce, labels)?.flat().collect();

    let loss_at = |net: &Mlp| -> Result<f64> { bce_loss(&net.predict(input)?, labels) };
    let mut probe = mlp.clone();
    let mut worst = 0.0f64;
    for (i, &a) in analytic.iter().enumerate() {
        let original = *probe.param_mut(i);
        *probe.param_mut(i) = original + h;
        let plus = loss_at(&probe)?;
        *probe.param_mut(i) = original - h;
        let minus = loss_at(&probe)?;
        *probe.param_mut(i) = original;
        let numeric = (plus - minus) / (2.0 * h);
        let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-8);
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::Rng;
    use crate::nn::{init_mlp, Activation};

    fn random(rows: usize, cols: usize, rng: &mut Rng) -> Matrix {
        Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.uniform(-1.0, 1.0)).collect())
            .unwrap()
    }

    #[test]
    fn sigmoid_bce_net() {
        let mlp = init_mlp(&[2, 8, 1], &[Activation::Tanh, Activation::Sigmoid], 21).unwrap();
        let mut rng = Rng::new(3);
        let x = random(6, 2, &mut rng);
        let y = Matrix::from_vec(6, 1, vec![1.0, 0.0, 1.0, 1.0, 0.0, 0.0]).unwrap();
        let err = gradient_check(&mlp, &x, &y, 1e-5).unwrap();
        assert!(err <= 1e-4, "{err}");
    }

    #[test]
    fn leaky_relu_away_from_kinks() {
        let mlp = init_mlp(
            &[3, 6, 1],
            &[Activation::LeakyRelu, Activation::Sigmoid],
            4,
        )
        .unwrap();
        let mut rng = Rng::new(8);
        // Keep first-layer pre-activations at least 1e-2 from zero.
        let mut x = random(5, 3, &mut rng);
        loop {
            let (_, cache) = mlp.forward(&x).unwrap();
            let pre = &cache.pre[0];
            if pre.as_slice().iter().all(|z| z.abs() >= 1e-2) {
                break;
            }
            x = random(5, 3, &mut rng);
        }
        let y = Matrix::from_vec(5, 1, vec![1.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let err = gradient_check(&mlp, &x, &y, 1e-5).unwrap();
        assert!(err <= 1e-4, "{err}");
    }

    #[test]
    fn step_out_of_range() {
        let mlp = init_mlp(&[1, 1], &[Activation::Sigmoid], 0).unwrap();
        let x = Matrix::zeros(1, 1);
        assert!(gradient_check(&mlp, &x, &x, 1e-2).is_err());
        assert!(gradient_check(&mlp, &x, &x, 1e-9).is_err());
    }
}
