use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::model::{dot, layer, sigmoid, Autoencoder, Dense};
use crate::error::{Error, Result};

/// Gradient of one dense layer, shaped like its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl LayerGrad {
    fn zeros_like(l: &Dense) -> Self {
        LayerGrad {
            weights: vec![0.0; l.weights.len()],
            bias: vec![0.0; l.bias.len()],
        }
    }

    fn fill_zero(&mut self) {
        self.weights.fill(0.0);
        self.bias.fill(0.0);
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|v| v.is_finite())
    }
}

/// Gradients of the batch loss with respect to every layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: [LayerGrad; 5],
}

impl Gradients {
    pub fn zeros_like(model: &Autoencoder) -> Self {
        let l = model.layers();
        Gradients {
            layers: [
                LayerGrad::zeros_like(&l[0]),
                LayerGrad::zeros_like(&l[1]),
                LayerGrad::zeros_like(&l[2]),
                LayerGrad::zeros_like(&l[3]),
                LayerGrad::zeros_like(&l[4]),
            ],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.layers.iter().all(LayerGrad::is_finite)
    }
}

/// Complex-aware reconstruction error: the mean of `|a_i - b_i|^2` over
/// complex entries.
pub fn mse_loss(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            what: "loss operands",
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok(s / a.len() as f64)
}

/// [`mse_loss`] on realified vectors: squared differences summed over both
/// halves and divided by the complex entry count `len / 2`.
pub fn mse_loss_real(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            what: "loss operands",
            expected: a.len(),
            found: b.len(),
        });
    }
    if !a.len().is_multiple_of(2) {
        return Err(Error::invalid("realified vector", "length must be even"));
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(2.0 * s / a.len() as f64)
}

/// Reusable buffers and gradient accumulators for minibatch backprop.
///
/// The latent layer is linear and sits between two small layers, so its
/// contribution is accumulated through the 10x10 outer-product sum
/// `A = sum(d4 h2^T)`. This keeps the per-sample cost independent of the
/// latent width.
pub(crate) struct Workspace {
    grads: Gradients,
    m: Vec<f64>,
    c: Vec<f64>,
    acc_a: Vec<f64>,
    acc_s: Vec<f64>,
    h1: Vec<f64>,
    h2: Vec<f64>,
    h4: Vec<f64>,
    y: Vec<f64>,
    d5: Vec<f64>,
    d4: Vec<f64>,
    d2: Vec<f64>,
    d1: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(model: &Autoencoder) -> Self {
        let h = model.hidden_width();
        let n = model.input_dim();
        Workspace {
            grads: Gradients::zeros_like(model),
            m: vec![0.0; h * h],
            c: vec![0.0; h],
            acc_a: vec![0.0; h * h],
            acc_s: vec![0.0; h],
            h1: vec![0.0; h],
            h2: vec![0.0; h],
            h4: vec![0.0; h],
            y: vec![0.0; n],
            d5: vec![0.0; n],
            d4: vec![0.0; h],
            d2: vec![0.0; h],
            d1: vec![0.0; h],
        }
    }

    pub(crate) fn grads(&self) -> &Gradients {
        &self.grads
    }

    /// Composite map `h2 -> pre-activation of DEC1`, i.e. `M = W4 W3`,
    /// `c = W4 b3 + b4`.
    fn prepare(&mut self, model: &Autoencoder) {
        let w3 = &model.layers[layer::LATENT];
        let w4 = &model.layers[layer::DEC1];
        let h = w4.n_out;
        let d = w3.n_out;
        self.m.fill(0.0);
        for i in 0..h {
            let row4 = &w4.weights[i * d..(i + 1) * d];
            for j in 0..h {
                let mut s = 0.0;
                for (k, w) in row4.iter().enumerate() {
                    s += w * w3.weights[k * h + j];
                }
                self.m[i * h + j] = s;
            }
            self.c[i] = dot(row4, &w3.bias) + w4.bias[i];
        }
    }

    /// Forward pass through the composite path, filling the hidden
    /// activations and `self.y`.
    fn forward(&mut self, model: &Autoencoder, x: &[f64]) {
        let l = &model.layers;
        dense_into(&l[layer::ENC1], x, &mut self.h1);
        dense_into(&l[layer::ENC2], &self.h1, &mut self.h2);
        let h = self.h4.len();
        for i in 0..h {
            let a = dot(&self.m[i * h..(i + 1) * h], &self.h2) + self.c[i];
            self.h4[i] = a.max(0.0);
        }
        let out = &l[layer::OUTPUT];
        for (i, row) in out.weights.chunks_exact(h).enumerate() {
            self.y[i] = sigmoid(dot(row, &self.h4) + out.bias[i]);
        }
    }

    /// Mean loss over `samples` (selected by `idx`) under the current model.
    pub(crate) fn eval_loss(
        &mut self,
        model: &Autoencoder,
        samples: &[Vec<f64>],
        idx: &[usize],
    ) -> f64 {
        self.prepare(model);
        let mut total = 0.0;
        for &i in idx {
            let x = &samples[i];
            self.forward(model, x);
            total += squared_distance(&self.y, x) * 2.0 / x.len() as f64;
        }
        total / idx.len() as f64
    }

    /// Mean batch loss and its gradient, left in [`Workspace::grads`].
    pub(crate) fn backprop<S: AsRef<[f64]>>(
        &mut self,
        model: &Autoencoder,
        batch: &[S],
    ) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::Training("empty batch".into()));
        }
        let n = model.input_dim();
        for s in batch {
            if s.as_ref().len() != n {
                return Err(Error::DimensionMismatch {
                    what: "training sample",
                    expected: n,
                    found: s.as_ref().len(),
                });
            }
        }
        self.prepare(model);
        for g in &mut self.grads.layers {
            g.fill_zero();
        }
        self.acc_a.fill(0.0);
        self.acc_s.fill(0.0);
        let h = model.hidden_width();
        let scale = 4.0 / (n as f64 * batch.len() as f64);
        let mut total = 0.0;
        for s in batch {
            let x = s.as_ref();
            self.forward(model, x);
            total += squared_distance(&self.y, x);

            for i in 0..n {
                let y = self.y[i];
                self.d5[i] = scale * (y - x[i]) * y * (1.0 - y);
            }
            let out = &model.layers[layer::OUTPUT];
            let g5 = &mut self.grads.layers[layer::OUTPUT];
            self.d4.fill(0.0);
            for (i, (&d, row)) in self.d5.iter().zip(out.weights.chunks_exact(h)).enumerate() {
                g5.bias[i] += d;
                let grow = &mut g5.weights[i * h..(i + 1) * h];
                for j in 0..h {
                    grow[j] += d * self.h4[j];
                    self.d4[j] += d * row[j];
                }
            }
            for j in 0..h {
                if self.h4[j] <= 0.0 {
                    self.d4[j] = 0.0;
                }
            }

            for i in 0..h {
                let d = self.d4[i];
                if d != 0.0 {
                    self.acc_s[i] += d;
                    for j in 0..h {
                        self.acc_a[i * h + j] += d * self.h2[j];
                    }
                }
            }
            for j in 0..h {
                let mut s = 0.0;
                if self.h2[j] > 0.0 {
                    for i in 0..h {
                        s += self.m[i * h + j] * self.d4[i];
                    }
                }
                self.d2[j] = s;
            }

            let enc2 = &model.layers[layer::ENC2];
            let g2 = &mut self.grads.layers[layer::ENC2];
            self.d1.fill(0.0);
            for i in 0..h {
                let d = self.d2[i];
                if d == 0.0 {
                    continue;
                }
                g2.bias[i] += d;
                for j in 0..h {
                    g2.weights[i * h + j] += d * self.h1[j];
                    self.d1[j] += d * enc2.weights[i * h + j];
                }
            }
            let g1 = &mut self.grads.layers[layer::ENC1];
            for i in 0..h {
                let d = if self.h1[i] > 0.0 { self.d1[i] } else { 0.0 };
                if d == 0.0 {
                    continue;
                }
                g1.bias[i] += d;
                axpy(d, x, &mut g1.weights[i * n..(i + 1) * n]);
            }
        }

        let w3 = &model.layers[layer::LATENT];
        let w4 = &model.layers[layer::DEC1];
        let d = w3.n_out;
        {
            let g4 = &mut self.grads.layers[layer::DEC1];
            for i in 0..h {
                g4.bias[i] = self.acc_s[i];
                let a_row = &self.acc_a[i * h..(i + 1) * h];
                let g_row = &mut g4.weights[i * d..(i + 1) * d];
                for (k, g) in g_row.iter_mut().enumerate() {
                    *g = dot(a_row, &w3.weights[k * h..(k + 1) * h]) + self.acc_s[i] * w3.bias[k];
                }
            }
        }
        {
            let g3 = &mut self.grads.layers[layer::LATENT];
            for k in 0..d {
                let mut bias = 0.0;
                let g_row = &mut g3.weights[k * h..(k + 1) * h];
                g_row.fill(0.0);
                for i in 0..h {
                    let w = w4.weights[i * d + k];
                    bias += w * self.acc_s[i];
                    for j in 0..h {
                        g_row[j] += w * self.acc_a[i * h + j];
                    }
                }
                g3.bias[k] = bias;
            }
        }
        Ok(2.0 * total / (n as f64 * batch.len() as f64))
    }
}

fn dense_into(l: &Dense, x: &[f64], out: &mut [f64]) {
    for ((o, row), b) in out
        .iter_mut()
        .zip(l.weights.chunks_exact(l.n_in))
        .zip(&l.bias)
    {
        *o = l.activation.apply(dot(row, x) + b);
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Mean loss over `batch` and its exact gradient with respect to every
/// parameter. The ReLU derivative at zero is taken as zero.
pub fn backprop<S: AsRef<[f64]>>(model: &Autoencoder, batch: &[S]) -> Result<(f64, Gradients)> {
    let mut ws = Workspace::new(model);
    let loss = ws.backprop(model, batch)?;
    Ok((loss, ws.grads))
}

/// Mean loss over `samples` without gradients.
pub fn batch_loss<S: AsRef<[f64]>>(model: &Autoencoder, samples: &[S]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Training("empty sample set".into()));
    }
    let mut total = 0.0;
    for s in samples {
        let y = model.reconstruct(s.as_ref())?;
        total += mse_loss_real(&y, s.as_ref())?;
    }
    Ok(total / samples.len() as f64)
}
