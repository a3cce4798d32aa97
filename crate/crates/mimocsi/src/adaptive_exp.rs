use std::io::Write;
use std::path::Path;

use mimocsi_core::adaptive::{
    build_dataset, run_adaptive, MeasurementRecord, PolicyTable, SnrBuckets,
};
use mimocsi_core::metrics::ErrorCounts;
use mimocsi_core::rng::{derive_seed, stream};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiment::{ensure_dir, file_tag, Experiment};
use crate::policy_csv::write_policy;

/// Ratio of the static comparison trace.
pub const STATIC_KAPPA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trace {
    Adaptive,
    Static,
    NoCompression,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptiveRow {
    pub profile: String,
    pub ura: String,
    pub rho_db: f64,
    pub trace: Trace,
    /// Ratio in use; zero for uncompressed feedback.
    pub kappa: f64,
    pub ber: f64,
    pub ber_stderr: f64,
    pub bler: f64,
    pub bler_stderr: f64,
    /// Dataset BLER of the selected option, adaptive rows only.
    pub table_bler: Option<f64>,
    #[serde(skip)]
    pub counts: ErrorCounts,
}

#[derive(Debug, Clone)]
pub struct AdaptiveResult {
    pub measurements: Vec<MeasurementRecord>,
    /// One table per profile, in configuration order.
    pub policies: Vec<PolicyTable>,
    pub rows: Vec<AdaptiveRow>,
}

fn row(exp: &Experiment, p: usize, rho_db: f64, trace: Trace, kappa: f64, c: ErrorCounts) -> AdaptiveRow {
    AdaptiveRow {
        profile: exp.profiles[p].name().to_owned(),
        ura: exp.ura_label.clone(),
        rho_db,
        trace,
        kappa,
        ber: c.ber(),
        ber_stderr: c.ber_stderr(),
        bler: c.bler(),
        bler_stderr: c.bler_stderr(),
        table_bler: None,
        counts: c,
    }
}

/// Measurement users are drawn from their own seed stream, so the policy
/// is built on channels disjoint from the evaluation users.
pub fn measurement_user(cfg: &ExperimentConfig, v: usize) -> u64 {
    derive_seed(cfg.master_seed, stream::MEASURE, v as u64)
}

/// Builds one policy table per profile from measurement users, then runs
/// the adaptive, static and uncompressed traces on the evaluation users.
/// All three traces see the same channels, payloads and noise.
pub fn run_adaptive_experiment(exp: &Experiment) -> Result<AdaptiveResult> {
    let cfg = &exp.cfg;
    let static_k = cfg
        .kappas
        .iter()
        .position(|&k| k == STATIC_KAPPA)
        .ok_or_else(|| Error::schema("configuration", "kappas must include 0.5 for the static trace"))?;
    let codecs = exp.all_codecs()?;
    let models: Vec<Vec<_>> = codecs
        .iter()
        .map(|cs| cs.iter().map(|c| c.model.clone()).collect())
        .collect();

    let mut jobs = Vec::new();
    for p in 0..exp.profiles.len() {
        for k in std::iter::once(None).chain((0..cfg.kappas.len()).map(Some)) {
            for &rho in &cfg.rhos {
                for v in 0..cfg.n_users {
                    jobs.push((p, k, rho, measurement_user(cfg, v)));
                }
            }
        }
    }
    let measurements = jobs
        .par_iter()
        .map(|&(p, k, rho_db, user)| {
            let model = k.map(|k| &models[p][k]);
            let c = exp.scenarios[p]
                .evaluate(model, cfg.bits_per_element, rho_db, user)?
                .counts;
            Ok(MeasurementRecord::new(
                exp.profiles[p].name(),
                user,
                rho_db,
                k.map_or(0.0, |k| cfg.kappas[k]),
                c.ber(),
                c.bler(),
                cfg.b_max,
            )?)
        })
        .collect::<Result<Vec<_>>>()?;

    let buckets = SnrBuckets::new(cfg.rhos.clone())?;
    let dataset = build_dataset(&measurements, buckets)?;
    let policies = exp
        .profiles
        .iter()
        .map(|prof| PolicyTable::build(&dataset, prof.name(), cfg.b_max))
        .collect::<mimocsi_core::Result<Vec<_>>>()?;

    let users: Vec<u64> = (0..cfg.n_users).map(|v| cfg.user_seed(v)).collect();
    let mut eval_jobs = Vec::new();
    for p in 0..exp.profiles.len() {
        for &u in &users {
            eval_jobs.push((p, u));
        }
    }
    type PerUser = (Vec<ErrorCounts>, Vec<ErrorCounts>, Vec<ErrorCounts>);
    let per_user = eval_jobs
        .par_iter()
        .map(|&(p, u)| -> Result<PerUser> {
            let adaptive = run_adaptive(
                &policies[p],
                &cfg.rhos,
                &models[p],
                &exp.scenarios[p],
                &[u],
                cfg.bits_per_element,
            )?;
            let mut stat = Vec::with_capacity(cfg.rhos.len());
            let mut none = Vec::with_capacity(cfg.rhos.len());
            for &rho in &cfg.rhos {
                let sc = &exp.scenarios[p];
                stat.push(sc.evaluate(Some(&models[p][static_k]), cfg.bits_per_element, rho, u)?.counts);
                none.push(sc.evaluate(None, cfg.bits_per_element, rho, u)?.counts);
            }
            Ok((adaptive.iter().map(|a| a.counts).collect(), stat, none))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for p in 0..exp.profiles.len() {
        let mine = &per_user[p * users.len()..(p + 1) * users.len()];
        for (i, &rho) in cfg.rhos.iter().enumerate() {
            let sum = |f: fn(&PerUser) -> &Vec<ErrorCounts>| mine.iter().map(|u| f(u)[i]).sum::<ErrorCounts>();
            let choice = policies[p].lookup(rho);
            let mut a = row(exp, p, rho, Trace::Adaptive, choice.kappa(), sum(|u| &u.0));
            a.table_bler = policies[p]
                .rows()
                .iter()
                .find(|r| rho < r.high_db)
                .and_then(|r| r.measured_bler);
            rows.push(a);
            rows.push(row(exp, p, rho, Trace::Static, STATIC_KAPPA, sum(|u| &u.1)));
            rows.push(row(exp, p, rho, Trace::NoCompression, 0.0, sum(|u| &u.2)));
        }
    }
    Ok(AdaptiveResult {
        measurements,
        policies,
        rows,
    })
}

pub fn write_adaptive_csv<W: Write>(rows: &[AdaptiveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("adaptive table", e))
}

pub fn write_measurements_csv<W: Write>(records: &[MeasurementRecord], out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        channel_tag: &'a str,
        user_seed: u64,
        rho_db: f64,
        kappa: f64,
        ber: f64,
        bler: f64,
        exceeds_bmax: bool,
    }
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(Row {
            channel_tag: &r.channel_tag,
            user_seed: r.user_seed,
            rho_db: r.rho_db,
            kappa: r.kappa,
            ber: r.ber,
            bler: r.bler,
            exceeds_bmax: r.exceeds_bmax,
        })?;
    }
    w.flush().map_err(|e| Error::io("measurement table", e))
}

/// Runs the adaptive experiment and writes `adaptive.csv`,
/// `measurements.csv` and one `policy-<profile>.csv` per profile.
pub fn adaptive_to_dir(cfg: ExperimentConfig, out_dir: &Path) -> Result<AdaptiveResult> {
    ensure_dir(out_dir)?;
    let exp = Experiment::new(cfg)?.with_model_cache(out_dir.join("models"));
    let result = run_adaptive_experiment(&exp)?;
    let create = |name: &str| {
        let path = out_dir.join(name);
        std::fs::File::create(&path)
            .map(std::io::BufWriter::new)
            .map_err(|e| Error::io(path, e))
    };
    write_adaptive_csv(&result.rows, create("adaptive.csv")?)?;
    write_measurements_csv(&result.measurements, create("measurements.csv")?)?;
    for (prof, table) in exp.profiles.iter().zip(&result.policies) {
        write_policy(table, create(&format!("policy-{}.csv", file_tag(prof.name())))?)?;
    }
    Ok(result)
}

