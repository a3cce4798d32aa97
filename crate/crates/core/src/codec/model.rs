use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::norm::NormStats;
use crate::chanmodel::CsiDims;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Width of the two encoder layers and the first decoder layer.
pub const HIDDEN_WIDTH: usize = 10;

/// Latent width `2 n_r n_t ceil((1 - kappa) n_sc)`.
///
/// The ceiling ignores products within 1e-9 above an integer so that
/// decimal ratios such as `1 - 0.75` are not pushed up by rounding.
pub fn latent_dim(kappa: f64, n_sc: usize, n_r: usize, n_t: usize) -> Result<usize> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::invalid(
            "compression ratio",
            alloc::format!("kappa = {kappa} is outside (0, 1)"),
        ));
    }
    if n_sc == 0 || n_r == 0 || n_t == 0 {
        return Err(Error::invalid("dimensions", "must be positive"));
    }
    let kept = ((1.0 - kappa) * n_sc as f64 - 1e-9).ceil().max(1.0) as usize;
    Ok(2 * n_r * n_t * kept)
}

/// Layer activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Linear,
    Sigmoid,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Linear => x,
            Activation::Sigmoid => sigmoid(x),
        }
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Fully connected layer; `weights` is `n_out x n_in`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n_in: usize,
    pub n_out: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Dense {
    pub fn zeros(n_in: usize, n_out: usize, activation: Activation) -> Self {
        Dense {
            n_in,
            n_out,
            weights: vec![0.0; n_in * n_out],
            bias: vec![0.0; n_out],
            activation,
        }
    }

    /// Glorot-uniform weights in `+-sqrt(6 / (n_in + n_out))`, zero bias.
    fn glorot<R: Rng>(n_in: usize, n_out: usize, activation: Activation, rng: &mut R) -> Self {
        let limit = (6.0 / (n_in + n_out) as f64).sqrt();
        let weights = (0..n_in * n_out)
            .map(|_| (2.0 * rng.random::<f64>() - 1.0) * limit)
            .collect();
        Dense {
            n_in,
            n_out,
            weights,
            bias: vec![0.0; n_out],
            activation,
        }
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_out);
        for (row, b) in self.weights.chunks_exact(self.n_in).zip(&self.bias) {
            out.push(self.activation.apply(dot(row, x) + b));
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|v| v.is_finite())
    }
}

/// Dot product with four partial sums.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

/// Index of each layer in [`Autoencoder::layers`].
pub mod layer {
    pub const ENC1: usize = 0;
    pub const ENC2: usize = 1;
    pub const LATENT: usize = 2;
    pub const DEC1: usize = 3;
    pub const OUTPUT: usize = 4;
}

/// Dense autoencoder for realified CSI vectors:
///
/// ```text
/// 2N -> 10 (ReLU) -> 10 (ReLU) -> D (linear latent) -> 10 (ReLU) -> 2N (sigmoid)
/// ```
///
/// with `N = n_sc n_r n_t` and `D = latent_dim(kappa, ..)`. Inputs are
/// min-max normalized with statistics stored in the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Autoencoder {
    kappa: f64,
    kappa_index: u8,
    dims: CsiDims,
    pub(crate) layers: [Dense; 5],
    norm: NormStats,
}

impl Autoencoder {
    /// Freshly initialized model, deterministic in `seed`.
    pub fn new(kappa: f64, dims: CsiDims, seed: u64) -> Result<Self> {
        Self::with_hidden_width(kappa, dims, HIDDEN_WIDTH, seed)
    }

    pub fn with_hidden_width(kappa: f64, dims: CsiDims, hidden: usize, seed: u64) -> Result<Self> {
        let d = latent_dim(kappa, dims.n_sc, dims.n_r, dims.n_t)?;
        if hidden == 0 {
            return Err(Error::invalid("hidden width", "must be positive"));
        }
        let n = 2 * dims.len();
        let mut rng = rng_from_seed(seed);
        let layers = [
            Dense::glorot(n, hidden, Activation::Relu, &mut rng),
            Dense::glorot(hidden, hidden, Activation::Relu, &mut rng),
            Dense::glorot(hidden, d, Activation::Linear, &mut rng),
            Dense::glorot(d, hidden, Activation::Relu, &mut rng),
            Dense::glorot(hidden, n, Activation::Sigmoid, &mut rng),
        ];
        Ok(Autoencoder {
            kappa,
            kappa_index: 0,
            dims,
            layers,
            norm: NormStats::default(),
        })
    }

    /// Reassembles a model from stored parts, checking every shape.
    pub fn from_parts(
        kappa: f64,
        kappa_index: u8,
        dims: CsiDims,
        layers: [Dense; 5],
        norm: NormStats,
    ) -> Result<Self> {
        let d = latent_dim(kappa, dims.n_sc, dims.n_r, dims.n_t)?;
        let n = 2 * dims.len();
        let h = layers[0].n_out;
        let expect = [
            (n, h, Activation::Relu),
            (h, h, Activation::Relu),
            (h, d, Activation::Linear),
            (d, h, Activation::Relu),
            (h, n, Activation::Sigmoid),
        ];
        for (l, (n_in, n_out, act)) in layers.iter().zip(expect) {
            if l.n_in != n_in || l.n_out != n_out || l.activation != act {
                return Err(Error::invalid(
                    "autoencoder layers",
                    "shape does not match kappa and dims",
                ));
            }
            if l.weights.len() != n_in * n_out || l.bias.len() != n_out {
                return Err(Error::invalid(
                    "autoencoder layers",
                    "parameter count mismatch",
                ));
            }
            if !l.is_finite() {
                return Err(Error::invalid("autoencoder layers", "non-finite parameter"));
            }
        }
        Ok(Autoencoder {
            kappa,
            kappa_index,
            dims,
            layers,
            norm,
        })
    }

    pub fn with_kappa_index(mut self, index: u8) -> Self {
        self.kappa_index = index;
        self
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn kappa_index(&self) -> u8 {
        self.kappa_index
    }

    pub fn dims(&self) -> CsiDims {
        self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.layers[layer::ENC1].n_in
    }

    pub fn latent_width(&self) -> usize {
        self.layers[layer::LATENT].n_out
    }

    pub fn hidden_width(&self) -> usize {
        self.layers[layer::ENC1].n_out
    }

    pub fn layers(&self) -> &[Dense; 5] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Dense; 5] {
        &mut self.layers
    }

    pub fn norm(&self) -> NormStats {
        self.norm
    }

    pub fn set_norm(&mut self, norm: NormStats) {
        self.norm = norm;
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(Dense::is_finite)
    }

    /// Encoder and latent projection on a normalized input.
    pub fn encode(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                what: "encoder input",
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        let h1 = self.layers[layer::ENC1].forward(x);
        let h2 = self.layers[layer::ENC2].forward(&h1);
        Ok(self.layers[layer::LATENT].forward(&h2))
    }

    /// Decoder; every output lies in `[0, 1]`.
    pub fn decode(&self, latent: &[f64]) -> Result<Vec<f64>> {
        if latent.len() != self.latent_width() {
            return Err(Error::DimensionMismatch {
                what: "decoder input",
                expected: self.latent_width(),
                found: latent.len(),
            });
        }
        let h = self.layers[layer::DEC1].forward(latent);
        Ok(self.layers[layer::OUTPUT].forward(&h))
    }

    /// `decode(encode(x))` without quantization.
    pub fn reconstruct(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.decode(&self.encode(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latent_width_formula() {
        assert_eq!(latent_dim(0.5, 128, 4, 16).unwrap(), 8192);
        assert_eq!(latent_dim(0.9, 128, 4, 16).unwrap(), 2 * 4 * 16 * 13);
        assert_eq!(latent_dim(0.7, 128, 4, 16).unwrap(), 2 * 4 * 16 * 39);
        assert_eq!(latent_dim(127.0 / 128.0, 128, 1, 1).unwrap(), 2);
        assert_eq!(latent_dim(0.75, 100, 1, 1).unwrap(), 50);
        assert!(latent_dim(0.0, 128, 4, 16).is_err());
        assert!(latent_dim(1.0, 128, 4, 16).is_err());
    }

    #[test]
    fn layer_shapes() {
        let dims = CsiDims::new(128, 4, 16).unwrap();
        let m = Autoencoder::new(0.5, dims, 1).unwrap();
        let shapes: Vec<(usize, usize)> = m.layers().iter().map(|l| (l.n_in, l.n_out)).collect();
        assert_eq!(
            shapes,
            [(16384, 10), (10, 10), (10, 8192), (8192, 10), (10, 16384)]
        );
        assert!(m.is_finite());
    }

    #[test]
    fn init_is_deterministic_and_bounded() {
        let dims = CsiDims::new(4, 2, 2).unwrap();
        let a = Autoencoder::new(0.5, dims, 9).unwrap();
        assert_eq!(a, Autoencoder::new(0.5, dims, 9).unwrap());
        assert_ne!(a, Autoencoder::new(0.5, dims, 10).unwrap());
        for l in a.layers() {
            let lim = (6.0 / (l.n_in + l.n_out) as f64).sqrt();
            assert!(l.weights.iter().all(|w| w.abs() <= lim));
            assert!(l.bias.iter().all(|b| *b == 0.0));
        }
    }

    #[test]
    fn zero_input_zero_bias_gives_zero_latent_and_half_output() {
        let dims = CsiDims::new(4, 2, 2).unwrap();
        let m = Autoencoder::new(0.5, dims, 3).unwrap();
        let z = m.encode(&vec![0.0; m.input_dim()]).unwrap();
        assert_eq!(z.len(), m.latent_width());
        assert!(z.iter().all(|v| *v == 0.0));
        let y = m.decode(&z).unwrap();
        assert!(y.iter().all(|v| *v == 0.5));
        assert!(m.encode(&[0.0; 3]).is_err());
        assert!(m.decode(&[0.0; 3]).is_err());
    }
}
