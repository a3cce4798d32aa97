//! Shared experiment state: one link scenario per profile and the trained
//! codecs, keyed by profile, array and compression ratio.

use std::path::{Path, PathBuf};
use std::time::Instant;

use mimocsi_core::adaptive::schedule_slots;
use mimocsi_core::chanmodel::CdlProfile;
use mimocsi_core::codec::{round_trip, train, Autoencoder, TrainHistory};
use mimocsi_core::link::LinkScenario;
use mimocsi_core::rng::{derive_seed, stream};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::model_io::{load_model, save_model};
use crate::timing::MonotonicClock;

/// Tag for the seed that initializes a model's weights.
const INIT_STREAM: u64 = 0x494e_4954;

/// A codec with its training record.
#[derive(Debug, Clone)]
pub struct TrainedCodec {
    pub model: Autoencoder,
    /// `None` when the model was loaded from the cache.
    pub history: Option<TrainHistory>,
    pub train_seconds: f64,
}

pub struct Experiment {
    pub cfg: ExperimentConfig,
    pub ura_label: String,
    pub profiles: Vec<CdlProfile>,
    pub scenarios: Vec<LinkScenario>,
    cache_dir: Option<PathBuf>,
}

impl Experiment {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let profiles = cfg.load_profiles()?;
        let link = cfg.link_config()?;
        let tx = cfg.ura.geometry()?;
        let scenarios = profiles
            .iter()
            .map(|p| LinkScenario {
                profile: p.clone(),
                tx,
                cfg: link.clone(),
                n_blocks: cfg.n_blocks,
                payload_bits: cfg.payload_bits,
            })
            .collect();
        Ok(Experiment {
            ura_label: cfg.ura.label()?,
            cfg,
            profiles,
            scenarios,
            cache_dir: None,
        })
    }

    /// Stores trained models under `dir` and reuses any found there.
    pub fn with_model_cache(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    /// Seed of the training data for profile `p`.
    pub fn train_seed(&self, p: usize) -> u64 {
        derive_seed(self.cfg.master_seed, stream::TRAIN, p as u64)
    }

    /// Training estimates for profile `p`, drawn at the training slots of the
    /// configured schedule.
    pub fn training_set(&self, p: usize) -> Result<Vec<Vec<f64>>> {
        let schedule = schedule_slots(self.cfg.pattern.pattern(), self.cfg.pattern.frame_length())?;
        let slots = schedule.training_slots(self.cfg.train.samples)?;
        Ok(self.scenarios[p].training_set(&slots, self.train_seed(p), &self.cfg.rhos)?)
    }

    fn cache_path(&self, p: usize, k: usize) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| {
            d.join(format!(
                "{}-{}-k{}-s{}.bin",
                file_tag(self.profiles[p].name()),
                self.ura_label,
                self.cfg.kappas[k],
                self.train_seed(p)
            ))
        })
    }

    /// Trains, or loads from the cache, the codec for every ratio of
    /// profile `p`. Models train one after another on the calling thread.
    pub fn codecs_for_profile(&self, p: usize) -> Result<Vec<TrainedCodec>> {
        let mut data = None;
        let mut out = Vec::with_capacity(self.cfg.kappas.len());
        for (k, &kappa) in self.cfg.kappas.iter().enumerate() {
            if let Some(path) = self.cache_path(p, k).filter(|p| p.exists()) {
                let model = load_model(&path)?;
                out.push(TrainedCodec {
                    model,
                    history: None,
                    train_seconds: 0.0,
                });
                continue;
            }
            if data.is_none() {
                data = Some(self.training_set(p)?);
            }
            let init = derive_seed(self.train_seed(p), INIT_STREAM, k as u64);
            let model = Autoencoder::new(kappa, self.cfg.link_config()?.dims(), init)?.with_kappa_index(k as u8);
            let (model, history) = train(
                model,
                data.clone().unwrap_or_default(),
                &self.cfg.train_config(self.train_seed(p)),
                &MonotonicClock::new(),
            )?;
            if let Some(path) = self.cache_path(p, k) {
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).map_err(|e| crate::error::Error::io(dir, e))?;
                }
                save_model(&model, &path)?;
            }
            out.push(TrainedCodec {
                model,
                train_seconds: history.seconds,
                history: Some(history),
            });
        }
        Ok(out)
    }

    pub fn all_codecs(&self) -> Result<Vec<Vec<TrainedCodec>>> {
        (0..self.profiles.len()).map(|p| self.codecs_for_profile(p)).collect()
    }
}

/// Wall time of one compress/decompress pass over the first-block channel
/// estimates of `users` on profile `p`.
pub fn codec_pass_seconds(exp: &Experiment, p: usize, model: &Autoencoder, users: &[u64]) -> Result<f64> {
    let mut estimates = Vec::with_capacity(users.len());
    for &u in users {
        estimates.push(exp.scenarios[p].estimated_channel(u, 0, *exp.cfg.rhos.last().unwrap())?.1);
    }
    let start = Instant::now();
    for h in &estimates {
        round_trip(model, h, exp.cfg.bits_per_element)?;
    }
    Ok(start.elapsed().as_secs_f64())
}

/// Lowercase file-name form of a profile name.
pub fn file_tag(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect()
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| crate::error::Error::io(dir, e))
}
