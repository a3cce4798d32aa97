use std::path::Path;

use mimocsi::adaptive_exp::{adaptive_to_dir, Trace};
use mimocsi::heatmap::{emit_csi_heatmap, heatmaps_to_dir};
use mimocsi::sweep::{run_sweep, sweep_to_dir};
use mimocsi::{Experiment, ExperimentConfig};
use mimocsi_core::adaptive::KappaChoice;

fn tiny_config() -> ExperimentConfig {
    let text = r#"
master_seed = 21
profiles = ["cdl-e.toml", "cdl-c.toml"]
ura = { rows = 2, cols = 2 }
kappas = [0.5, 0.75]
rhos = [0.0, 20.0]
n_users = 2
payload_bits = 4000
n_blocks = 2

[link]
n_r = 2
n_sc = 16
n_pilot = 8

[train]
epochs = 3
batch_size = 8
samples = 24
"#;
    let base = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/profiles"));
    ExperimentConfig::parse(text, Path::new("tiny"), base).unwrap()
}

#[test]
fn sweep_has_full_cartesian_rows_with_baseline() {
    let cfg = tiny_config();
    let exp = Experiment::new(cfg.clone()).unwrap();
    let result = run_sweep(&exp).unwrap();
    assert_eq!(result.rows.len(), 2 * (2 + 1) * 2 * 2);
    let baseline: Vec<_> = result.rows.iter().filter(|r| r.kappa == 0.0).collect();
    assert_eq!(baseline.len(), 2 * 2 * 2);
    assert!(baseline.iter().all(|r| r.recon_mse == 0.0));
    assert!(result.rows.iter().filter(|r| r.kappa > 0.0).all(|r| r.recon_mse > 0.0));
    assert!(result.rows.iter().all(|r| (0.0..=1.0).contains(&r.ber) && (0.0..=1.0).contains(&r.bler)));
    assert_eq!(result.rows[0].profile, "CDL-E");
    assert_eq!(result.rows[0].ura, "2x2");
    assert_eq!(result.rows[0].user_seed, 21);
    assert_eq!(result.rows[1].user_seed, 22);
    for codecs in &result.codecs {
        for c in codecs {
            assert_eq!(c.history.as_ref().unwrap().epochs(), 3);
        }
    }
}

#[test]
fn sweep_files_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    sweep_to_dir(tiny_config(), a.path()).unwrap();
    sweep_to_dir(tiny_config(), b.path()).unwrap();
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read(a.path(), "sweep.csv"), read(b.path(), "sweep.csv"));
    assert_eq!(read(a.path(), "history-cdl-e-k0.5.csv"), read(b.path(), "history-cdl-e-k0.5.csv"));
    let header = String::from_utf8(read(a.path(), "sweep.csv")).unwrap();
    assert!(header.starts_with(
        "profile,ura,kappa,rho_db,user_seed,ber,ber_stderr,bler,bler_stderr,recon_mse\n"
    ));
    let timing = String::from_utf8(read(a.path(), "timing.csv")).unwrap();
    assert_eq!(timing.lines().count(), 1 + 24);

    // second run in the same directory reuses the cached models
    let again = sweep_to_dir(tiny_config(), a.path()).unwrap();
    assert!(again.codecs.iter().flatten().all(|c| c.history.is_none()));
    assert_eq!(read(a.path(), "sweep.csv"), read(b.path(), "sweep.csv"));
}

#[test]
fn different_master_seeds_give_different_sweeps() {
    let mut other = tiny_config();
    other.master_seed = 22;
    let a = run_sweep(&Experiment::new(tiny_config()).unwrap()).unwrap();
    let b = run_sweep(&Experiment::new(other).unwrap()).unwrap();
    assert_ne!(a.rows, b.rows);
}

#[test]
fn adaptive_experiment_reports_three_traces() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = tiny_config();
    cfg.kappas = vec![0.5, 0.75];
    let result = adaptive_to_dir(cfg.clone(), dir.path()).unwrap();
    assert_eq!(result.rows.len(), 2 * 2 * 3);
    assert_eq!(result.measurements.len(), 2 * 3 * 2 * 2);
    for (p, table) in result.policies.iter().enumerate() {
        for r in table.rows() {
            if let (KappaChoice::Kappa(_), Some(b)) = (r.choice, r.measured_bler) {
                assert!(b <= cfg.b_max);
            }
        }
        let rows: Vec<_> = result.rows[p * 6..(p + 1) * 6].to_vec();
        for chunk in rows.chunks(3) {
            assert_eq!(chunk[0].trace, Trace::Adaptive);
            assert_eq!(chunk[1].trace, Trace::Static);
            assert_eq!(chunk[2].trace, Trace::NoCompression);
            assert_eq!(chunk[1].kappa, 0.5);
            if chunk[0].kappa == 0.0 {
                assert_eq!(chunk[0].counts, chunk[2].counts);
            }
            if chunk[0].kappa == 0.5 {
                assert_eq!(chunk[0].counts, chunk[1].counts);
            }
        }
    }
    for f in ["adaptive.csv", "measurements.csv", "policy-cdl-e.csv", "policy-cdl-c.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }

    let mut no_static = tiny_config();
    no_static.kappas = vec![0.75];
    assert!(adaptive_to_dir(no_static, dir.path()).is_err());
}

#[test]
fn heatmap_grids_have_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let exp = Experiment::new(tiny_config()).unwrap().with_model_cache(dir.path().join("models"));
    let maps = emit_csi_heatmap(&exp, 0, 0.5, 20.0, 0).unwrap();
    assert_eq!(maps.original.len(), 16);
    assert!(maps.original.iter().all(|r| r.len() == 4));
    assert_eq!(maps.reconstructed.len(), 16);
    let latent: usize = maps.latent.iter().map(Vec::len).sum();
    assert_eq!(latent, mimocsi_core::codec::latent_dim(0.5, 16, 2, 4).unwrap());
    heatmaps_to_dir(&maps, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("heatmap-original.csv")).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(emit_csi_heatmap(&exp, 0, 0.3, 20.0, 0).is_err());
    assert!(emit_csi_heatmap(&exp, 5, 0.5, 20.0, 0).is_err());
}
