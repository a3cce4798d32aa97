use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mimocsi::adaptive_exp::adaptive_to_dir;
use mimocsi::heatmap::{emit_csi_heatmap, heatmaps_to_dir};
use mimocsi::sweep::sweep_to_dir;
use mimocsi::{Experiment, ExperimentConfig};

/// Massive-MIMO-OFDM link simulation with autoencoder CSI feedback.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Worker threads for evaluation (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Overrides `master_seed` from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// BER/BLER over profiles, compression ratios, SNRs and users.
    Sweep(Common),
    /// Builds the adaptive policy and compares it with static and uncompressed feedback.
    Adaptive(Common),
    /// Magnitude grids of one estimate, its latent and its reconstruction.
    Heatmap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0)]
        user: usize,
        /// Index of the profile in the configuration.
        #[arg(long, default_value_t = 0)]
        profile: usize,
    },
}

fn load(common: &Common, seed: Option<u64>) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let mut cfg = ExperimentConfig::default();
            let base = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
            for p in &mut cfg.profiles {
                *p = base.join(&*p);
            }
            cfg
        }
    };
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    Ok(cfg)
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match &cli.command {
        Command::Sweep(common) => {
            let result = sweep_to_dir(load(common, cli.seed)?, &common.out)?;
            println!("{} rows written to {}", result.rows.len(), common.out.join("sweep.csv").display());
        }
        Command::Adaptive(common) => {
            let result = adaptive_to_dir(load(common, cli.seed)?, &common.out)?;
            for r in result.rows.iter().filter(|r| r.trace == mimocsi::adaptive_exp::Trace::Adaptive) {
                println!("{} rho {:>5} dB: kappa {} bler {:.4}", r.profile, r.rho_db, r.kappa, r.bler);
            }
        }
        Command::Heatmap {
            common,
            kappa,
            rho,
            user,
            profile,
        } => {
            let exp = Experiment::new(load(common, cli.seed)?)?.with_model_cache(common.out.join("models"));
            let maps = emit_csi_heatmap(&exp, *profile, *kappa, *rho, *user)?;
            heatmaps_to_dir(&maps, &common.out)?;
            println!("heatmaps written to {}", common.out.display());
        }
    }
    Ok(())
}
