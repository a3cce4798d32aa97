//! Experiment configuration files.
//!
//! ```toml
//! master_seed = 7
//! profiles = ["profiles/cdl-e.toml", "profiles/cdl-c.toml"]
//! ura = "small"                 # or { rows = 256, cols = 4 }
//! kappas = [0.1, 0.5, 0.7]
//! rhos = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
//! n_users = 10
//! payload_bits = 200000
//! n_blocks = 4
//! bits_per_element = 32
//! b_max = 0.1
//!
//! [link]
//! n_r = 4
//! n_sc = 128
//! n_pilot = 64
//! delta_f = 15000.0
//! crc_poly = "1010011"
//! total_power = 1.0
//! orthogonal_pilots = false
//!
//! [train]
//! epochs = 64
//! batch_size = 128
//! lr = 1e-4
//! val_fraction = 0.2
//! samples = 512
//!
//! [pattern]
//! kind = "duty_cycle"           # or "staggered" with `occasion = 2`
//! frame_length = 10
//! train_fraction = 0.5
//! ```
//!
//! Every key has a default, so an empty file is a valid configuration.
//! Relative profile paths resolve against the configuration file's directory.

use std::path::{Path, PathBuf};

use mimocsi_core::adaptive::Pattern;
use mimocsi_core::chanmodel::{CdlProfile, UraGeometry};
use mimocsi_core::codec::TrainConfig;
use mimocsi_core::link::{CrcPoly, LinkConfig};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::profile::load_cdl_profile;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum UraSpec {
    Named(UraName),
    Grid { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UraName {
    Small,
    Large,
}

impl UraSpec {
    pub fn geometry(&self) -> Result<UraGeometry> {
        Ok(match *self {
            UraSpec::Named(UraName::Small) => UraGeometry::small(),
            UraSpec::Named(UraName::Large) => UraGeometry::large(),
            UraSpec::Grid { rows, cols } => UraGeometry::new(rows, cols)?,
        })
    }

    /// Short label used in output tables, e.g. `4x4`.
    pub fn label(&self) -> Result<String> {
        let g = self.geometry()?;
        Ok(format!("{}x{}", g.rows(), g.cols()))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    pub n_r: usize,
    pub n_sc: usize,
    pub n_pilot: usize,
    pub delta_f: f64,
    pub crc_poly: String,
    pub total_power: f64,
    pub orthogonal_pilots: bool,
}

impl Default for LinkSection {
    fn default() -> Self {
        let l = LinkConfig::small_ura();
        LinkSection {
            n_r: l.n_r,
            n_sc: l.n_sc,
            n_pilot: l.n_pilot,
            delta_f: l.delta_f,
            crc_poly: l.crc_poly.to_string(),
            total_power: l.total_power,
            orthogonal_pilots: l.orthogonal_pilots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub val_fraction: f64,
    /// Channel estimates drawn for each training set.
    pub samples: usize,
}

impl Default for TrainSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainSection {
            epochs: t.epochs,
            batch_size: t.batch_size,
            lr: t.lr,
            val_fraction: t.val_fraction,
            samples: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PatternSection {
    DutyCycle { frame_length: usize, train_fraction: f64 },
    Staggered { frame_length: usize, occasion: usize },
}

impl Default for PatternSection {
    fn default() -> Self {
        PatternSection::DutyCycle {
            frame_length: 10,
            train_fraction: 0.5,
        }
    }
}

impl PatternSection {
    pub fn pattern(&self) -> Pattern {
        match *self {
            PatternSection::DutyCycle { train_fraction, .. } => Pattern::DutyCycle { train_fraction },
            PatternSection::Staggered { occasion, .. } => Pattern::Staggered { occasion },
        }
    }

    pub fn frame_length(&self) -> usize {
        match *self {
            PatternSection::DutyCycle { frame_length, .. } | PatternSection::Staggered { frame_length, .. } => {
                frame_length
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub profiles: Vec<PathBuf>,
    pub ura: UraSpec,
    pub kappas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub n_users: usize,
    pub payload_bits: usize,
    pub n_blocks: usize,
    pub bits_per_element: u8,
    pub b_max: f64,
    pub link: LinkSection,
    pub train: TrainSection,
    pub pattern: PatternSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            master_seed: 0,
            profiles: vec![PathBuf::from("profiles/cdl-e.toml"), PathBuf::from("profiles/cdl-c.toml")],
            ura: UraSpec::Named(UraName::Small),
            kappas: vec![0.1, 0.5, 0.7],
            rhos: (0..=6).map(|i| 5.0 * i as f64).collect(),
            n_users: 10,
            payload_bits: 200_000,
            n_blocks: 4,
            bits_per_element: 32,
            b_max: 0.1,
            link: LinkSection::default(),
            train: TrainSection::default(),
            pattern: PatternSection::default(),
        }
    }
}

impl ExperimentConfig {
    /// Parses configuration text. Relative profile paths are joined onto
    /// `base_dir`.
    pub fn parse(text: &str, origin: &Path, base_dir: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::schema(origin, e.to_string()))?;
        for p in &mut cfg.profiles {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        cfg.validate().map_err(|e| Error::schema(origin, e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, path, base)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::schema("configuration", m));
        if let Some(k) = self.kappas.iter().find(|k| !(**k > 0.0 && **k < 1.0)) {
            return bad(format!("kappa {k} outside (0, 1)"));
        }
        if self.kappas.len() > 255 {
            return bad("at most 255 compression ratios".into());
        }
        if self.rhos.is_empty() || self.rhos.iter().any(|r| !r.is_finite()) {
            return bad("rhos must be a nonempty list of finite values".into());
        }
        if self.n_users == 0 || self.n_blocks == 0 || self.payload_bits == 0 {
            return bad("n_users, n_blocks and payload_bits must be positive".into());
        }
        if self.profiles.is_empty() {
            return bad("at least one profile is required".into());
        }
        if self.bits_per_element != 32 && self.bits_per_element != 64 {
            return bad("bits_per_element must be 32 or 64".into());
        }
        if !(self.b_max >= 0.0 && self.b_max <= 1.0) {
            return bad("b_max must lie in [0, 1]".into());
        }
        if self.train.samples == 0 {
            return bad("train.samples must be positive".into());
        }
        self.train_config(0).validate()?;
        self.link_config()?.validate()?;
        if self.pattern.frame_length() == 0 {
            return bad("pattern.frame_length must be positive".into());
        }
        Ok(())
    }

    pub fn link_config(&self) -> Result<LinkConfig> {
        let crc_poly: CrcPoly = self.link.crc_poly.parse()?;
        Ok(LinkConfig {
            n_t: self.ura.geometry()?.element_count(),
            n_r: self.link.n_r,
            n_sc: self.link.n_sc,
            n_pilot: self.link.n_pilot,
            delta_f: self.link.delta_f,
            crc_poly,
            snr_db: self.rhos[0],
            total_power: self.link.total_power,
            orthogonal_pilots: self.link.orthogonal_pilots,
        })
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            epochs: self.train.epochs,
            batch_size: self.train.batch_size,
            lr: self.train.lr,
            val_fraction: self.train.val_fraction,
            seed,
        }
    }

    pub fn load_profiles(&self) -> Result<Vec<CdlProfile>> {
        self.profiles.iter().map(load_cdl_profile).collect()
    }

    /// Seed of evaluation user `v`.
    pub fn user_seed(&self, v: usize) -> u64 {
        self.master_seed.wrapping_add(v as u64)
    }
}
