use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;

use super::adam::{AdamConfig, ModelAdam};
use super::backprop::Workspace;
use super::model::Autoencoder;
use super::norm::NormStats;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Source of wall-clock time in seconds, supplied by the caller.
pub trait Clock {
    fn now(&self) -> f64;
}

/// A clock that always reads zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullClock;

impl Clock for NullClock {
    fn now(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub val_fraction: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 64,
            batch_size: 128,
            lr: 1e-4,
            val_fraction: 0.2,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::invalid(
                "training config",
                "epochs and batch size must be positive",
            ));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::invalid(
                "training config",
                "learning rate must be positive",
            ));
        }
        if !(0.0..1.0).contains(&self.val_fraction) {
            return Err(Error::invalid(
                "training config",
                "validation fraction must lie in [0, 1)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainHistory {
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub seconds: f64,
}

impl TrainHistory {
    pub fn epochs(&self) -> usize {
        self.train_loss.len()
    }

    pub fn final_train_loss(&self) -> Option<f64> {
        self.train_loss.last().copied()
    }

    /// Whether the last training loss is below the first.
    pub fn decreased(&self) -> bool {
        match (self.train_loss.first(), self.train_loss.last()) {
            (Some(a), Some(b)) => b < a,
            _ => false,
        }
    }
}

/// Trains `model` on realified CSI samples.
///
/// Samples are shuffled once into training and validation parts, the
/// normalization statistics are fitted on the training part and stored in
/// the model, and then `epochs` passes of shuffled minibatch Adam follow.
/// The reported training loss of an epoch is the sample-weighted mean of its
/// minibatch losses; the validation loss is measured after the epoch. With a
/// single sample, that sample serves for validation too.
pub fn train<C: Clock>(
    mut model: Autoencoder,
    mut samples: Vec<Vec<f64>>,
    cfg: &TrainConfig,
    clock: &C,
) -> Result<(Autoencoder, TrainHistory)> {
    cfg.validate()?;
    if samples.is_empty() {
        return Err(Error::Training("empty dataset".into()));
    }
    let n = model.input_dim();
    if let Some(bad) = samples.iter().find(|s| s.len() != n) {
        return Err(Error::DimensionMismatch {
            what: "training sample",
            expected: n,
            found: bad.len(),
        });
    }
    if samples.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("training sample", "values must be finite"));
    }
    let start = clock.now();
    let mut rng = rng_from_seed(cfg.seed);

    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.shuffle(&mut rng);
    let n_val = if samples.len() < 2 {
        0
    } else {
        ((cfg.val_fraction * samples.len() as f64).round() as usize).min(samples.len() - 1)
    };
    let val_idx: Vec<usize> = order[..n_val].to_vec();
    let mut train_idx: Vec<usize> = order[n_val..].to_vec();
    let val_idx = if val_idx.is_empty() {
        train_idx.clone()
    } else {
        val_idx
    };

    let norm = NormStats::fit(train_idx.iter().map(|&i| samples[i].as_slice()))?;
    for s in samples.iter_mut() {
        *s = norm.normalize(s);
    }
    model.set_norm(norm);

    let mut ws = Workspace::new(&model);
    let mut opt = ModelAdam::new(&model, AdamConfig::with_lr(cfg.lr));
    let mut history = TrainHistory {
        train_loss: Vec::with_capacity(cfg.epochs),
        val_loss: Vec::with_capacity(cfg.epochs),
        seconds: 0.0,
    };
    let mut batch: Vec<&[f64]> = Vec::with_capacity(cfg.batch_size);
    for _ in 0..cfg.epochs {
        train_idx.shuffle(&mut rng);
        let mut weighted = 0.0;
        for chunk in train_idx.chunks(cfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| samples[i].as_slice()));
            let loss = ws.backprop(&model, &batch)?;
            weighted += loss * chunk.len() as f64;
            opt.step(&mut model, ws.grads())?;
        }
        history.train_loss.push(weighted / train_idx.len() as f64);
        history
            .val_loss
            .push(ws.eval_loss(&model, &samples, &val_idx));
    }
    if !model.is_finite() {
        return Err(Error::Training("parameters diverged".into()));
    }
    history.seconds = clock.now() - start;
    Ok((model, history))
}
