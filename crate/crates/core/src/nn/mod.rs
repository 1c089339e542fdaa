//! Minimal dense-network engine.
//!
//! Layers compute `a = act(x · W + b)` with `W` stored as `in_dim × out_dim`.
//! Gradients are produced by a hand-written reverse pass over a
//! [`ForwardCache`]; [`gradient_check`] is the independent central-difference
//! oracle used to validate it.

mod adam;
mod gradcheck;
mod loss;

pub use adam::{optimizer_step, AdamConfig, AdamState};
pub use gradcheck::gradient_check;
pub use loss::{bce_loss, BCE_EPS};

use std::str::FromStr;

use crate::datasets::Rng;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const LEAKY_RELU_SLOPE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Relu,
    /// Negative slope 0.2.
    LeakyRelu,
    Tanh,
    Sigmoid,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Relu => z.max(0.0),
            Activation::LeakyRelu => {
                if z > 0.0 {
                    z
                } else {
                    LEAKY_RELU_SLOPE * z
                }
            }
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => sigmoid(z),
        }
    }

    /// Derivative expressed through the pre-activation `z` and output `a`.
    #[inline]
    pub fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu => {
                if z > 0.0 {
                    1.0
                } else {
                    LEAKY_RELU_SLOPE
                }
            }
            Activation::Tanh => 1.0 - a * a,
            Activation::Sigmoid => a * (1.0 - a),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Activation::Identity),
            "relu" => Ok(Activation::Relu),
            "leaky_relu" => Ok(Activation::LeakyRelu),
            "tanh" => Ok(Activation::Tanh),
            "sigmoid" => Ok(Activation::Sigmoid),
            other => Err(Error::Config(format!("unknown activation `{other}`"))),
        }
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    /// `in_dim × out_dim`.
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn new(weights: Matrix, bias: Vec<f64>, activation: Activation) -> Result<Self> {
        if weights.cols() != bias.len() {
            return Err(Error::shape("DenseLayer::new", weights.cols(), bias.len()));
        }
        Ok(Self {
            weights,
            bias,
            activation,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<DenseLayer>,
}

/// Per-layer intermediate values recorded by [`Mlp::forward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Input fed to each layer.
    inputs: Vec<Matrix>,
    /// Pre-activation of each layer.
    pre: Vec<Matrix>,
    /// Post-activation of each layer; the last one is the network output.
    post: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.post.last().expect("cache of a non-empty network")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

/// Gradients mirroring an [`Mlp`]'s parameter shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrad>,
}

impl Gradients {
    pub fn zeros_like(mlp: &Mlp) -> Self {
        Self {
            layers: mlp
                .layers
                .iter()
                .map(|l| LayerGrad {
                    weights: Matrix::zeros(l.in_dim(), l.out_dim()),
                    bias: vec![0.0; l.out_dim()],
                })
                .collect(),
        }
    }

    /// Element-wise sum. Shapes must agree.
    pub fn add(&self, other: &Gradients) -> Result<Gradients> {
        if !self.same_shape(other) {
            return Err(Error::shape("Gradients::add", "matching shapes", "different shapes"));
        }
        let layers = self
            .layers
            .iter()
            .zip(&other.layers)
            .map(|(a, b)| LayerGrad {
                weights: Matrix::from_vec(
                    a.weights.rows(),
                    a.weights.cols(),
                    a.weights
                        .as_slice()
                        .iter()
                        .zip(b.weights.as_slice())
                        .map(|(x, y)| x + y)
                        .collect(),
                )
                .expect("shapes checked"),
                bias: a.bias.iter().zip(&b.bias).map(|(x, y)| x + y).collect(),
            })
            .collect();
        Ok(Gradients { layers })
    }

    pub fn negate(&mut self) {
        for l in &mut self.layers {
            l.weights.as_mut_slice().iter_mut().for_each(|v| *v = -*v);
            l.bias.iter_mut().for_each(|v| *v = -*v);
        }
    }

    pub fn norm(&self) -> f64 {
        self.flat().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Every entry in parameter order (layer by layer, weights then bias).
    pub fn flat(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.as_slice().iter().chain(&l.bias).copied())
    }

    pub(crate) fn same_shape(&self, other: &Gradients) -> bool {
        self.layers.len() == other.layers.len()
            && self
                .layers
                .iter()
                .zip(&other.layers)
                .all(|(a, b)| a.weights.shape() == b.weights.shape() && a.bias.len() == b.bias.len())
    }

    pub(crate) fn matches(&self, mlp: &Mlp) -> bool {
        self.layers.len() == mlp.layers.len()
            && self
                .layers
                .iter()
                .zip(&mlp.layers)
                .all(|(g, l)| g.weights.shape() == l.weights.shape() && g.bias.len() == l.bias.len())
    }
}

/// Which loss the reverse pass starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// Mean binary cross-entropy over every output element.
    Bce,
}

/// Glorot-uniform weights, zero biases, fully determined by `seed`.
pub fn init_mlp(layer_sizes: &[usize], activations: &[Activation], seed: u64) -> Result<Mlp> {
    if layer_sizes.len() < 2 {
        return Err(Error::Config(format!(
            "need at least two layer sizes, got {}",
            layer_sizes.len()
        )));
    }
    if activations.len() != layer_sizes.len() - 1 {
        return Err(Error::Config(format!(
            "{} layer sizes need {} activations, got {}",
            layer_sizes.len(),
            layer_sizes.len() - 1,
            activations.len()
        )));
    }
    if let Some(pos) = layer_sizes.iter().position(|&s| s == 0) {
        return Err(Error::Config(format!("layer size at position {pos} is zero")));
    }
    let mut rng = Rng::new(seed);
    let layers = layer_sizes
        .windows(2)
        .zip(activations)
        .map(|(dims, &activation)| {
            let (fan_in, fan_out) = (dims[0], dims[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let data = (0..fan_in * fan_out)
                .map(|_| rng.uniform(-bound, bound))
                .collect();
            DenseLayer {
                weights: Matrix::from_vec(fan_in, fan_out, data).expect("sized above"),
                bias: vec![0.0; fan_out],
                activation,
            }
        })
        .collect();
    Ok(Mlp { layers })
}

impl Mlp {
    pub fn new(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("an Mlp needs at least one layer".into()));
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(Error::shape(
                    "Mlp::new",
                    format!("layer {} in_dim {}", i + 1, pair[0].out_dim()),
                    pair[1].in_dim(),
                ));
            }
        }
        for l in &layers {
            if l.weights.cols() != l.bias.len() {
                return Err(Error::shape("Mlp::new", l.weights.cols(), l.bias.len()));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    pub fn output_activation(&self) -> Activation {
        self.layers[self.layers.len() - 1].activation
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.rows() * l.weights.cols() + l.bias.len())
            .sum()
    }

    /// Mutable reference to the `index`-th parameter in [`Gradients::flat`] order.
    pub(crate) fn param_mut(&mut self, mut index: usize) -> &mut f64 {
        for l in &mut self.layers {
            let nw = l.weights.rows() * l.weights.cols();
            if index < nw {
                return &mut l.weights.as_mut_slice()[index];
            }
            index -= nw;
            if index < l.bias.len() {
                return &mut l.bias[index];
            }
            index -= l.bias.len();
        }
        panic!("parameter index out of range");
    }

    /// All parameters in [`Gradients::flat`] order.
    pub fn flat_params(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.as_slice().iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn forward(&self, input: &Matrix) -> Result<(Matrix, ForwardCache)> {
        if input.cols() != self.in_dim() {
            return Err(Error::shape(
                "Mlp::forward",
                format!("{} input columns", self.in_dim()),
                format!("{} columns", input.cols()),
            ));
        }
        let n = self.layers.len();
        let mut cache = ForwardCache {
            inputs: Vec::with_capacity(n),
            pre: Vec::with_capacity(n),
            post: Vec::with_capacity(n),
        };
        let mut x = input.clone();
        for layer in &self.layers {
            let mut z = x.matmul(&layer.weights)?;
            let cols = z.cols();
            for (i, v) in z.as_mut_slice().iter_mut().enumerate() {
                *v += layer.bias[i % cols];
            }
            let a = z.map(|v| layer.activation.apply(v));
            if !a.all_finite() {
                return Err(Error::NonFinite(format!(
                    "layer {} output",
                    cache.inputs.len()
                )));
            }
            cache.inputs.push(x);
            cache.pre.push(z);
            x = a.clone();
            cache.post.push(a);
        }
        Ok((x, cache))
    }

    /// Output only.
    pub fn predict(&self, input: &Matrix) -> Result<Matrix> {
        self.forward(input).map(|(out, _)| out)
    }

    fn check_cache(&self, cache: &ForwardCache) -> Result<()> {
        let ok = cache.pre.len() == self.layers.len()
            && cache.inputs.len() == self.layers.len()
            && cache.post.len() == self.layers.len()
            && self
                .layers
                .iter()
                .zip(&cache.pre)
                .zip(&cache.inputs)
                .all(|((l, z), x)| z.cols() == l.out_dim() && x.cols() == l.in_dim());
        if ok {
            Ok(())
        } else {
            Err(Error::Consistency(
                "forward cache was not produced by this network".into(),
            ))
        }
    }

    /// Reverse pass from `dL/d(output)`. Returns parameter gradients and
    /// `dL/d(input)`.
    pub fn backward_from_output(
        &self,
        cache: &ForwardCache,
        output_grad: &Matrix,
    ) -> Result<(Gradients, Matrix)> {
        self.check_cache(cache)?;
        let last = self.layers.len() - 1;
        if output_grad.shape() != cache.post[last].shape() {
            return Err(Error::shape(
                "Mlp::backward_from_output",
                format!("{:?}", cache.post[last].shape()),
                format!("{:?}", output_grad.shape()),
            ));
        }
        let act = self.layers[last].activation;
        let mut delta = output_grad.clone();
        for ((d, &z), &a) in delta
            .as_mut_slice()
            .iter_mut()
            .zip(cache.pre[last].as_slice())
            .zip(cache.post[last].as_slice())
        {
            *d *= act.derivative(z, a);
        }
        self.backward_from_preactivation(cache, delta)
    }

    /// Reverse pass from `dL/d(pre-activation of the last layer)`.
    pub fn backward_from_preactivation(
        &self,
        cache: &ForwardCache,
        mut delta: Matrix,
    ) -> Result<(Gradients, Matrix)> {
        self.check_cache(cache)?;
        let last = self.layers.len() - 1;
        if delta.shape() != cache.pre[last].shape() {
            return Err(Error::shape(
                "Mlp::backward_from_preactivation",
                format!("{:?}", cache.pre[last].shape()),
                format!("{:?}", delta.shape()),
            ));
        }
        let mut grads = Vec::with_capacity(self.layers.len());
        for i in (0..self.layers.len()).rev() {
            let layer = &self.layers[i];
            let weights = cache.inputs[i].t_matmul(&delta)?;
            let bias = delta.column_sums();
            grads.push(LayerGrad { weights, bias });
            let mut upstream = delta.matmul_t(&layer.weights)?;
            if i > 0 {
                let prev = self.layers[i - 1].activation;
                for ((d, &z), &a) in upstream
                    .as_mut_slice()
                    .iter_mut()
                    .zip(cache.pre[i - 1].as_slice())
                    .zip(cache.post[i - 1].as_slice())
                {
                    *d *= prev.derivative(z, a);
                }
            }
            delta = upstream;
        }
        grads.reverse();
        Ok((Gradients { layers: grads }, delta))
    }
}

/// `dL/d(last pre-activation)` for the given loss. Sigmoid outputs under BCE
/// use the fused form `(p - y) / n`.
pub fn loss_preactivation_grad(
    mlp: &Mlp,
    cache: &ForwardCache,
    loss: LossKind,
    labels: &Matrix,
) -> Result<Matrix> {
    let out = cache.output();
    if out.shape() != labels.shape() {
        return Err(Error::shape(
            "backward",
            format!("labels {:?}", out.shape()),
            format!("{:?}", labels.shape()),
        ));
    }
    let n = out.as_slice().len() as f64;
    match (loss, mlp.output_activation()) {
        (LossKind::Bce, Activation::Sigmoid) => {
            let data = out
                .as_slice()
                .iter()
                .zip(labels.as_slice())
                .map(|(p, y)| (p - y) / n)
                .collect();
            Matrix::from_vec(out.rows(), out.cols(), data)
        }
        (LossKind::Bce, act) => {
            let last = cache.pre.len() - 1;
            let data = out
                .as_slice()
                .iter()
                .zip(labels.as_slice())
                .zip(cache.pre[last].as_slice())
                .map(|((&p, &y), &z)| {
                    let pc = p.clamp(BCE_EPS, 1.0 - BCE_EPS);
                    let dp = if p == pc { (pc - y) / (pc * (1.0 - pc)) / n } else { 0.0 };
                    dp * act.derivative(z, p)
                })
                .collect();
            Matrix::from_vec(out.rows(), out.cols(), data)
        }
    }
}

/// Gradient of `loss(forward(input), labels)` with respect to every parameter.
pub fn backward(mlp: &Mlp, cache: &ForwardCache, loss: LossKind, labels: &Matrix) -> Result<Gradients> {
    mlp.check_cache(cache)?;
    let delta = loss_preactivation_grad(mlp, cache, loss, labels)?;
    mlp.backward_from_preactivation(cache, delta).map(|(g, _)| g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_deterministic_with_zero_bias() {
        let acts = [Activation::Tanh, Activation::Sigmoid];
        let a = init_mlp(&[2, 4, 1], &acts, 7).unwrap();
        let b = init_mlp(&[2, 4, 1], &acts, 7).unwrap();
        assert_eq!(a, b);
        for l in a.layers() {
            assert!(l.bias.iter().all(|&b| b == 0.0));
        }
        // first layer bound: sqrt(6 / (2 + 4)) = 1
        assert!(a.layers()[0].weights.as_slice().iter().all(|w| w.abs() <= 1.0));
        let c = init_mlp(&[2, 4, 1], &acts, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn init_rejects_bad_config() {
        assert!(matches!(
            init_mlp(&[2, 4, 1], &[Activation::Tanh], 0),
            Err(Error::Config(_))
        ));
        assert!(init_mlp(&[2, 0, 1], &[Activation::Tanh, Activation::Tanh], 0).is_err());
        assert!(init_mlp(&[2], &[], 0).is_err());
    }

    #[test]
    fn identity_network_passes_input_through() {
        let layer = DenseLayer::new(Matrix::identity(3), vec![0.0; 3], Activation::Identity).unwrap();
        let mlp = Mlp::new(vec![layer]).unwrap();
        let x = Matrix::from_vec(2, 3, vec![1.0, -2.0, 3.5, 0.0, 4.0, -1.0]).unwrap();
        assert_eq!(mlp.predict(&x).unwrap(), x);
    }

    #[test]
    fn sigmoid_output_is_open_unit_interval() {
        let mlp = init_mlp(&[3, 5, 2], &[Activation::LeakyRelu, Activation::Sigmoid], 3).unwrap();
        let x = Matrix::from_vec(2, 3, vec![5.0, -5.0, 3.0, -1.0, 0.2, 9.0]).unwrap();
        let out = mlp.predict(&x).unwrap();
        assert!(out.as_slice().iter().all(|&p| p > 0.0 && p < 1.0));
    }

    #[test]
    fn forward_shape_error_reports_dims() {
        let mlp = init_mlp(&[2, 3], &[Activation::Tanh], 0).unwrap();
        let err = mlp.forward(&Matrix::zeros(1, 5)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('2') && msg.contains('5'), "{msg}");
    }

    #[test]
    fn forward_is_row_independent() {
        let mlp = init_mlp(&[3, 6, 2], &[Activation::Tanh, Activation::Identity], 11).unwrap();
        let mut rng = Rng::new(1);
        let a = Matrix::from_vec(4, 3, (0..12).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap();
        let b = Matrix::from_vec(3, 3, (0..9).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap();
        let joint = mlp.predict(&a.vstack(&b).unwrap()).unwrap();
        let split = mlp.predict(&a).unwrap().vstack(&mlp.predict(&b).unwrap()).unwrap();
        assert_eq!(joint, split);
        assert_eq!(mlp.predict(&a).unwrap(), mlp.predict(&a).unwrap());
    }

    #[test]
    fn perfect_prediction_gives_zero_gradient() {
        // A sigmoid cannot output exactly 0 or 1 at moderate logits, so use
        // an identity output producing exact labels.
        let layer = DenseLayer::new(
            Matrix::from_vec(1, 1, vec![0.0]).unwrap(),
            vec![1.0],
            Activation::Identity,
        )
        .unwrap();
        let mlp = Mlp::new(vec![layer]).unwrap();
        let x = Matrix::from_vec(2, 1, vec![0.3, -0.7]).unwrap();
        let (_, cache) = mlp.forward(&x).unwrap();
        let labels = Matrix::filled(2, 1, 1.0);
        let g = backward(&mlp, &cache, LossKind::Bce, &labels).unwrap();
        assert!(g.norm() <= 1e-9);
    }

    #[test]
    fn duplicated_rows_do_not_change_mean_gradient() {
        let mlp = init_mlp(&[2, 4, 1], &[Activation::Tanh, Activation::Sigmoid], 5).unwrap();
        let x1 = Matrix::from_vec(1, 2, vec![0.4, -0.3]).unwrap();
        let x2 = x1.vstack(&x1).unwrap();
        let (_, c1) = mlp.forward(&x1).unwrap();
        let (_, c2) = mlp.forward(&x2).unwrap();
        let g1 = backward(&mlp, &c1, LossKind::Bce, &Matrix::filled(1, 1, 1.0)).unwrap();
        let g2 = backward(&mlp, &c2, LossKind::Bce, &Matrix::filled(2, 1, 1.0)).unwrap();
        for (a, b) in g1.flat().zip(g2.flat()) {
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn backward_rejects_foreign_cache() {
        let a = init_mlp(&[2, 4, 1], &[Activation::Tanh, Activation::Sigmoid], 5).unwrap();
        let b = init_mlp(&[3, 4, 1], &[Activation::Tanh, Activation::Sigmoid], 5).unwrap();
        let (_, cache) = b.forward(&Matrix::zeros(1, 3)).unwrap();
        assert!(matches!(
            backward(&a, &cache, LossKind::Bce, &Matrix::zeros(1, 1)),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn non_sigmoid_bce_path_matches_finite_differences() {
        // tanh output squashed into (0, 1) range is not guaranteed, so use a
        // single-layer identity output fed small positive values.
        let layer = DenseLayer::new(
            Matrix::from_vec(2, 1, vec![0.1, 0.2]).unwrap(),
            vec![0.4],
            Activation::Identity,
        )
        .unwrap();
        let mlp = Mlp::new(vec![layer]).unwrap();
        let x = Matrix::from_vec(2, 2, vec![0.3, 0.5, 0.2, 0.1]).unwrap();
        let y = Matrix::from_vec(2, 1, vec![1.0, 0.0]).unwrap();
        let err = gradient_check(&mlp, &x, &y, 1e-6).unwrap();
        assert!(err <= 1e-4, "{err}");
    }
}
