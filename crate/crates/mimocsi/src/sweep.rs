use std::io::Write;
use std::path::Path;
use std::time::Instant;

use mimocsi_core::codec::TrainHistory;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiment::{ensure_dir, file_tag, Experiment, TrainedCodec};

/// One operating point of the sweep. `kappa = 0` is uncompressed feedback.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub profile: String,
    pub ura: String,
    pub kappa: f64,
    pub rho_db: f64,
    pub user_seed: u64,
    pub ber: f64,
    pub ber_stderr: f64,
    pub bler: f64,
    pub bler_stderr: f64,
    pub recon_mse: f64,
    #[serde(skip)]
    pub bit_errors: u64,
    #[serde(skip)]
    pub bits_total: u64,
    #[serde(skip)]
    pub block_errors: u64,
    #[serde(skip)]
    pub blocks_total: u64,
    #[serde(skip)]
    pub train_seconds: f64,
    #[serde(skip)]
    pub eval_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
struct TimingRow<'a> {
    profile: &'a str,
    ura: &'a str,
    kappa: f64,
    rho_db: f64,
    user_seed: u64,
    train_seconds: f64,
    eval_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Trained codecs per profile, in configuration order.
    pub codecs: Vec<Vec<TrainedCodec>>,
}

/// Evaluates every `(profile, kappa, rho, user)` point, plus the
/// uncompressed baseline, in a deterministic order: profile, then ratio
/// (baseline first), then SNR, then user.
pub fn run_sweep(exp: &Experiment) -> Result<SweepResult> {
    let cfg = &exp.cfg;
    let codecs = exp.all_codecs()?;
    let mut points = Vec::new();
    for p in 0..exp.profiles.len() {
        for k in std::iter::once(None).chain((0..cfg.kappas.len()).map(Some)) {
            for &rho in &cfg.rhos {
                for v in 0..cfg.n_users {
                    points.push((p, k, rho, cfg.user_seed(v)));
                }
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&(p, k, rho_db, user_seed)| {
            let codec = k.map(|k| &codecs[p][k]);
            let start = Instant::now();
            let out = exp.scenarios[p].evaluate(codec.map(|c| &c.model), cfg.bits_per_element, rho_db, user_seed)?;
            let c = out.counts;
            Ok(SweepRow {
                profile: exp.profiles[p].name().to_owned(),
                ura: exp.ura_label.clone(),
                kappa: k.map_or(0.0, |k| cfg.kappas[k]),
                rho_db,
                user_seed,
                ber: c.ber(),
                ber_stderr: c.ber_stderr(),
                bler: c.bler(),
                bler_stderr: c.bler_stderr(),
                recon_mse: out.recon_mse,
                bit_errors: c.bit_errors,
                bits_total: c.bits_total,
                block_errors: c.block_errors,
                blocks_total: c.blocks_total,
                train_seconds: codec.map_or(0.0, |c| c.train_seconds),
                eval_seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows, codecs })
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("sweep table", e))
}

pub fn write_timing_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(TimingRow {
            profile: &r.profile,
            ura: &r.ura,
            kappa: r.kappa,
            rho_db: r.rho_db,
            user_seed: r.user_seed,
            train_seconds: r.train_seconds,
            eval_seconds: r.eval_seconds,
        })?;
    }
    w.flush().map_err(|e| Error::io("timing table", e))
}

/// Per-epoch losses with header `epoch,train_loss,val_loss`. Returns whether
/// the final training loss is below the first.
pub fn emit_history<W: Write>(history: &TrainHistory, out: W) -> Result<bool> {
    #[derive(Serialize)]
    struct Row {
        epoch: usize,
        train_loss: f64,
        val_loss: f64,
    }
    let mut w = csv::Writer::from_writer(out);
    for (i, (t, v)) in history.train_loss.iter().zip(&history.val_loss).enumerate() {
        w.serialize(Row {
            epoch: i + 1,
            train_loss: *t,
            val_loss: *v,
        })?;
    }
    w.flush().map_err(|e| Error::io("history table", e))?;
    Ok(history.decreased())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Runs the sweep and writes `sweep.csv`, `timing.csv`, one loss history
/// per freshly trained model and the models themselves under `models/`.
pub fn sweep_to_dir(cfg: ExperimentConfig, out_dir: &Path) -> Result<SweepResult> {
    ensure_dir(out_dir)?;
    let exp = Experiment::new(cfg)?.with_model_cache(out_dir.join("models"));
    let result = run_sweep(&exp)?;
    write_sweep_csv(&result.rows, create(&out_dir.join("sweep.csv"))?)?;
    write_timing_csv(&result.rows, create(&out_dir.join("timing.csv"))?)?;
    for (p, codecs) in result.codecs.iter().enumerate() {
        for c in codecs {
            if let Some(h) = &c.history {
                let name = format!(
                    "history-{}-k{}.csv",
                    file_tag(exp.profiles[p].name()),
                    c.model.kappa()
                );
                emit_history(h, create(&out_dir.join(name))?)?;
            }
        }
    }
    Ok(result)
}
