//! Fully connected discriminator `1 → hidden… → 1`.
//!
//! Hidden layers use LeakyReLU(0.2), the output a sigmoid giving
//! `D(x) = P(x is real)`. Parameters live in one flat vector, layer by layer,
//! weights (row-major, `out × in`) before biases.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TrainError;

const LEAKY_SLOPE: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiscriminatorType {
    #[serde(rename = "custom_classical_1")]
    CustomClassical1,
    #[serde(rename = "custom_classical_2")]
    CustomClassical2,
}

impl DiscriminatorType {
    pub fn name(self) -> &'static str {
        match self {
            Self::CustomClassical1 => "custom_classical_1",
            Self::CustomClassical2 => "custom_classical_2",
        }
    }

    pub fn default_hidden_sizes(self) -> Vec<usize> {
        match self {
            Self::CustomClassical1 => vec![20],
            Self::CustomClassical2 => vec![40, 10],
        }
    }
}

impl fmt::Display for DiscriminatorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiscriminatorType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Self::CustomClassical1, Self::CustomClassical2]
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown discriminator type {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminatorSpec {
    pub type_name: DiscriminatorType,
    pub hidden_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub betas: (f64, f64),
}

impl DiscriminatorSpec {
    pub fn new(type_name: DiscriminatorType, learning_rate: f64, betas: (f64, f64)) -> Self {
        Self {
            hidden_sizes: type_name.default_hidden_sizes(),
            type_name,
            learning_rate,
            betas,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.hidden_sizes.contains(&0) {
            return Err("hidden sizes must be >= 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(format!("learning rate {} must be positive", self.learning_rate));
        }
        let (b1, b2) = self.betas;
        if !(0.0 < b1 && b1 < b2 && b2 < 1.0) {
            return Err(format!("betas ({b1}, {b2}) must satisfy 0 < b1 < b2 < 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscriminatorNet {
    /// Layer widths including the scalar input and output, e.g. `[1, 20, 1]`.
    sizes: Vec<usize>,
    params: Vec<f64>,
    /// Inputs are fed as `(x − input_shift) · input_scale`.
    input_shift: f64,
    input_scale: f64,
}

fn leaky(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        LEAKY_SLOPE * z
    }
}

fn leaky_grad(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else {
        LEAKY_SLOPE
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Glorot-uniform weights, zero biases.
pub fn init_discriminator<R: Rng + ?Sized>(spec: &DiscriminatorSpec, rng: &mut R) -> DiscriminatorNet {
    let mut sizes = vec![1];
    sizes.extend(&spec.hidden_sizes);
    sizes.push(1);
    let mut params = Vec::new();
    for w in sizes.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        params.extend((0..fan_in * fan_out).map(|_| rng.random_range(-limit..limit)));
        params.extend(std::iter::repeat_n(0.0, fan_out));
    }
    DiscriminatorNet {
        sizes,
        params,
        input_shift: 0.0,
        input_scale: 1.0,
    }
}

struct Trace {
    /// Post-activation values per layer, `acts[0]` is the scaled input.
    acts: Vec<Vec<f64>>,
    /// Pre-activation values of every non-input layer.
    pre: Vec<Vec<f64>>,
}

impl DiscriminatorNet {
    /// Builds a net from explicit parameters (layout as in the module docs).
    pub fn from_params(sizes: Vec<usize>, params: Vec<f64>) -> Result<Self, TrainError> {
        if sizes.len() < 2 || sizes[0] != 1 || *sizes.last().unwrap() != 1 || sizes.contains(&0) {
            return Err(TrainError::InvalidSpec(format!("bad layer sizes {sizes:?}")));
        }
        let expected: usize = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        if params.len() != expected {
            return Err(TrainError::LengthMismatch {
                expected,
                got: params.len(),
            });
        }
        Ok(Self {
            sizes,
            params,
            input_shift: 0.0,
            input_scale: 1.0,
        })
    }

    /// Standardizes inputs so that `[a, b]` maps onto `[−1, 1]`.
    pub fn with_input_range(mut self, a: f64, b: f64) -> Self {
        self.input_shift = 0.5 * (a + b);
        self.input_scale = 2.0 / (b - a);
        self
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// `(weights, biases)` slices of layer `l`.
    fn layer(&self, l: usize) -> (&[f64], &[f64]) {
        let offset: usize = self.sizes.windows(2).take(l).map(|w| w[0] * w[1] + w[1]).sum();
        let (fan_in, fan_out) = (self.sizes[l], self.sizes[l + 1]);
        let w = &self.params[offset..offset + fan_in * fan_out];
        let b = &self.params[offset + fan_in * fan_out..offset + fan_in * fan_out + fan_out];
        (w, b)
    }

    fn trace(&self, x: f64) -> Trace {
        let n_layers = self.sizes.len() - 1;
        let mut acts = vec![vec![(x - self.input_shift) * self.input_scale]];
        let mut pre = Vec::with_capacity(n_layers);
        for l in 0..n_layers {
            let (w, b) = self.layer(l);
            let input = &acts[l];
            let z: Vec<f64> = b
                .iter()
                .enumerate()
                .map(|(o, bias)| {
                    let row = &w[o * input.len()..(o + 1) * input.len()];
                    bias + row.iter().zip(input).map(|(wi, xi)| wi * xi).sum::<f64>()
                })
                .collect();
            let a = if l + 1 < n_layers {
                z.iter().map(|&v| leaky(v)).collect()
            } else {
                z.clone()
            };
            pre.push(z);
            acts.push(a);
        }
        Trace { acts, pre }
    }

    /// Output pre-activation.
    pub fn logit(&self, x: f64) -> Result<f64, TrainError> {
        if !x.is_finite() {
            return Err(TrainError::NonFiniteInput(x));
        }
        Ok(self.trace(x).pre.last().expect("at least one layer")[0])
    }

    /// `D(x) ∈ (0, 1)`, the probability that `x` is a real sample.
    pub fn forward(&self, x: f64) -> Result<f64, TrainError> {
        self.logit(x).map(sigmoid)
    }

    /// Accumulates `scale · ∂logit/∂θ` into `grad`.
    fn accumulate(&self, x: f64, scale: f64, grad: &mut [f64]) {
        let t = self.trace(x);
        let n_layers = self.sizes.len() - 1;
        let mut delta = vec![scale];
        let mut offsets = Vec::with_capacity(n_layers);
        let mut off = 0;
        for w in self.sizes.windows(2) {
            offsets.push(off);
            off += w[0] * w[1] + w[1];
        }
        for l in (0..n_layers).rev() {
            let (fan_in, fan_out) = (self.sizes[l], self.sizes[l + 1]);
            let input = &t.acts[l];
            let base = offsets[l];
            for o in 0..fan_out {
                for i in 0..fan_in {
                    grad[base + o * fan_in + i] += delta[o] * input[i];
                }
                grad[base + fan_in * fan_out + o] += delta[o];
            }
            if l > 0 {
                let (w, _) = self.layer(l);
                delta = (0..fan_in)
                    .map(|i| {
                        let back: f64 = (0..fan_out).map(|o| w[o * fan_in + i] * delta[o]).sum();
                        back * leaky_grad(t.pre[l - 1][i])
                    })
                    .collect();
            }
        }
    }

    /// Gradient of `L_D = −mean log D(real) − mean log(1 − D(fake))` with
    /// respect to every parameter.
    pub fn backward(&self, real: &[f64], fake: &[f64]) -> Result<Vec<f64>, TrainError> {
        if real.is_empty() || fake.is_empty() {
            return Err(TrainError::InvalidSpec("empty batch".into()));
        }
        let mut grad = vec![0.0; self.params.len()];
        let (nr, nf) = (real.len() as f64, fake.len() as f64);
        for &x in real {
            // d/dz [−ln σ(z)] = σ(z) − 1
            let z = self.logit(x)?;
            self.accumulate(x, (sigmoid(z) - 1.0) / nr, &mut grad);
        }
        for &x in fake {
            // d/dz [−ln(1 − σ(z))] = σ(z)
            let z = self.logit(x)?;
            self.accumulate(x, sigmoid(z) / nf, &mut grad);
        }
        Ok(grad)
    }

    /// Discriminator loss on a batch, evaluated through [`super::gan_losses`].
    pub fn loss(&self, real: &[f64], fake: &[f64]) -> Result<f64, TrainError> {
        let pr = real.iter().map(|&x| self.forward(x)).collect::<Result<Vec<_>, _>>()?;
        let pf = fake.iter().map(|&x| self.forward(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(super::gan_losses(&pr, &pf).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(t: DiscriminatorType) -> DiscriminatorSpec {
        DiscriminatorSpec::new(t, 1e-4, (0.9, 0.999))
    }

    #[test]
    fn parameter_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = init_discriminator(&spec(DiscriminatorType::CustomClassical1), &mut rng);
        assert_eq!(a.sizes(), &[1, 20, 1]);
        assert_eq!(a.num_params(), 61);
        let b = init_discriminator(&spec(DiscriminatorType::CustomClassical2), &mut rng);
        assert_eq!(b.sizes(), &[1, 40, 10, 1]);
        // Σ (fan_in·fan_out + fan_out) = 80 + 410 + 11
        assert_eq!(b.num_params(), 501);
    }

    #[test]
    fn init_is_seeded_and_glorot_bounded() {
        let s = spec(DiscriminatorType::CustomClassical2);
        let a = init_discriminator(&s, &mut ChaCha8Rng::seed_from_u64(4));
        let b = init_discriminator(&s, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
        let (w, bias) = a.layer(1);
        let limit = (6.0f64 / 50.0).sqrt();
        assert!(w.iter().all(|v| v.abs() < limit));
        assert!(bias.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_net_is_one_half() {
        let net = DiscriminatorNet::from_params(vec![1, 3, 1], vec![0.0; 10]).unwrap();
        for x in [-5.0, 0.0, 123.0] {
            assert_eq!(net.forward(x).unwrap(), 0.5);
        }
    }

    #[test]
    fn positive_paths_saturate_upward() {
        // w1 = [1, 2], b1 = 0, w2 = [1, 1], b2 = 0
        let net = DiscriminatorNet::from_params(vec![1, 2, 1], vec![1.0, 2.0, 0.0, 0.0, 1.0, 1.0, 0.0])
            .unwrap();
        let mut last = 0.0;
        for x in [0.0, 1.0, 5.0, 20.0, 50.0] {
            let d = net.forward(x).unwrap();
            assert!(d >= last && d > 0.5 - 1e-15);
            last = d;
        }
        assert!(last > 1.0 - 1e-12);
    }

    #[test]
    fn hand_computed_forward() {
        // hidden: z = [0.5x + 0.1, −x + 0.2]; out = 1.5 h0 − 0.5 h1 + 0.3
        let net = DiscriminatorNet::from_params(
            vec![1, 2, 1],
            vec![0.5, -1.0, 0.1, 0.2, 1.5, -0.5, 0.3],
        )
        .unwrap();
        let x = 0.8;
        let h0 = 0.5 * x + 0.1; // 0.5, positive
        let h1 = 0.2 * (-x + 0.2); // leaky branch: −0.12
        let z = 1.5 * h0 - 0.5 * h1 + 0.3;
        assert!((net.logit(x).unwrap() - z).abs() < 1e-15);
        assert!((net.forward(x).unwrap() - 1.0 / (1.0 + (-1.11f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn non_finite_input_rejected() {
        let net = DiscriminatorNet::from_params(vec![1, 1], vec![1.0, 0.0]).unwrap();
        assert!(matches!(net.forward(f64::NAN), Err(TrainError::NonFiniteInput(_))));
        assert!(net.forward(f64::INFINITY).is_err());
    }

    #[test]
    fn output_stays_open_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = init_discriminator(&spec(DiscriminatorType::CustomClassical2), &mut rng)
            .with_input_range(-1.0, 1.0);
        for x in [-3.0, -0.5, 0.0, 0.7, 2.0] {
            let d = net.forward(x).unwrap();
            assert!(d > 0.0 && d < 1.0);
        }
    }

    fn finite_difference(net: &DiscriminatorNet, real: &[f64], fake: &[f64]) -> Vec<f64> {
        let h = 1e-5;
        (0..net.num_params())
            .map(|j| {
                let mut plus = net.clone();
                plus.params_mut()[j] += h;
                let mut minus = net.clone();
                minus.params_mut()[j] -= h;
                (plus.loss(real, fake).unwrap() - minus.loss(real, fake).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn backprop_matches_finite_differences() {
        let s = DiscriminatorSpec {
            hidden_sizes: vec![3],
            ..spec(DiscriminatorType::CustomClassical1)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut net = init_discriminator(&s, &mut rng).with_input_range(0.0, 4.0);
        // non-zero biases exercise every path
        for p in net.params_mut() {
            *p += 0.1;
        }
        let real = [0.3, 1.7, 2.2, 3.9];
        let fake = [0.9, 1.1, 3.0];
        let analytic = net.backward(&real, &fake).unwrap();
        let numeric = finite_difference(&net, &real, &fake);
        let err = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, n)| (a - n).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max abs diff {err}");
    }

    #[test]
    fn one_parameter_net_cancellation() {
        // single bias b: D = σ(b); L_D = −ln σ(b) − ln(1 − σ(b)); dL/db = 2σ(b) − 1
        let net = DiscriminatorNet::from_params(vec![1, 1], vec![0.0, 0.4]).unwrap();
        let g = net.backward(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        let s = sigmoid(0.4);
        assert!((g[1] - (2.0 * s - 1.0)).abs() < 1e-15);
        // weight terms: (σ−1)·mean(x) + σ·mean(x) = (2σ − 1)·mean(x)
        assert!((g[0] - (2.0 * s - 1.0) * 1.5).abs() < 1e-15);
    }

    #[test]
    fn duplicated_batch_same_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = init_discriminator(&spec(DiscriminatorType::CustomClassical1), &mut rng);
        let real = [0.1, 0.5];
        let fake = [0.7];
        let g1 = net.backward(&real, &fake).unwrap();
        let g2 = net.backward(&[0.1, 0.5, 0.1, 0.5], &[0.7, 0.7]).unwrap();
        for (a, b) in g1.iter().zip(&g2) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn spec_validation() {
        let mut s = spec(DiscriminatorType::CustomClassical1);
        assert!(s.validate().is_ok());
        s.betas = (0.999, 0.9);
        assert!(s.validate().is_err());
        s.betas = (0.9, 0.999);
        s.hidden_sizes = vec![0];
        assert!(s.validate().is_err());
    }
}
