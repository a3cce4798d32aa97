use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::backprop::Gradients;
use super::model::Autoencoder;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        AdamConfig {
            lr,
            ..Self::default()
        }
    }
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates for a flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState {
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    cfg: &AdamConfig,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() || params.len() != state.v.len()
    {
        return Err(Error::DimensionMismatch {
            what: "adam state",
            expected: params.len(),
            found: grads.len(),
        });
    }
    if grads.iter().any(|g| !g.is_finite()) {
        return Err(Error::Training("non-finite gradient".into()));
    }
    state.step += 1;
    let t = state.step as i32;
    apply(params, grads, &mut state.m, &mut state.v, cfg, t);
    Ok(())
}

fn apply(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    cfg: &AdamConfig,
    t: i32,
) {
    let c1 = 1.0 - cfg.beta1.powi(t);
    let c2 = 1.0 - cfg.beta2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        params[i] -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps);
    }
}

/// Adam over every parameter of an [`Autoencoder`], one moment pair per
/// weight and bias vector.
#[derive(Debug, Clone)]
pub struct ModelAdam {
    cfg: AdamConfig,
    states: Vec<(Vec<f64>, Vec<f64>)>,
    step: u64,
}

impl ModelAdam {
    pub fn new(model: &Autoencoder, cfg: AdamConfig) -> Self {
        let mut states = Vec::with_capacity(10);
        for l in model.layers() {
            states.push((vec![0.0; l.weights.len()], vec![0.0; l.weights.len()]));
            states.push((vec![0.0; l.bias.len()], vec![0.0; l.bias.len()]));
        }
        ModelAdam {
            cfg,
            states,
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn step(&mut self, model: &mut Autoencoder, grads: &Gradients) -> Result<()> {
        if !grads.is_finite() {
            return Err(Error::Training("non-finite gradient".into()));
        }
        self.step += 1;
        let t = self.step as i32;
        for (i, (l, g)) in model.layers_mut().iter_mut().zip(&grads.layers).enumerate() {
            let (mw, vw) = &mut self.states[2 * i];
            apply(&mut l.weights, &g.weights, mw, vw, &self.cfg, t);
            let (mb, vb) = &mut self.states[2 * i + 1];
            apply(&mut l.bias, &g.bias, mb, vb, &self.cfg, t);
        }
        Ok(())
    }
}
