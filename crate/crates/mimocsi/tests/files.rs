use std::path::Path;

use mimocsi::config::{PatternSection, UraSpec};
use mimocsi::model_io::{decode_model, encode_model, load_model, save_model};
use mimocsi::policy_csv::{read_policy, write_policy};
use mimocsi::profile::{load_cdl_profile, parse_cdl_profile};
use mimocsi::sweep::emit_history;
use mimocsi::timing::Stopwatch;
use mimocsi::{Error, ExperimentConfig};
use mimocsi_core::adaptive::{KappaChoice, PolicyRow, PolicyTable};
use mimocsi_core::chanmodel::CsiDims;
use mimocsi_core::codec::{Autoencoder, NormStats, TrainHistory};

fn profiles_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/profiles"))
}

#[test]
fn shipped_profiles_load() {
    let e = load_cdl_profile(profiles_dir().join("cdl-e.toml")).unwrap();
    let c = load_cdl_profile(profiles_dir().join("cdl-c.toml")).unwrap();
    assert_eq!(e.name(), "CDL-E");
    assert_eq!(c.name(), "CDL-C");
    assert!(e.is_los());
    assert!(!c.is_los());
    assert_eq!(e.clusters().len(), 15);
    assert_eq!(c.clusters().len(), 24);
    for p in [&e, &c] {
        let total: f64 = p.clusters().iter().map(|cl| cl.power).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(p.clusters().iter().all(|cl| cl.aod_zenith.abs() <= std::f64::consts::PI));
    }
    // the direct ray dominates the line-of-sight profile
    assert!(e.clusters()[0].power > 0.8);
}

#[test]
fn profile_schema_errors() {
    let origin = Path::new("inline");
    let ok = "name = \"x\"\nlos = false\n[[clusters]]\ndelay_s = 1e-9\npower = 2.0\naod_az_deg = 90.0\naod_zen_deg = 90.0\naoa_az_deg = 0.0\naoa_zen_deg = 0.0\n";
    let p = parse_cdl_profile(ok, origin).unwrap();
    assert!((p.clusters()[0].aod_azimuth - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(p.clusters()[0].power, 1.0);

    let both = ok.replace("power = 2.0", "power = 2.0\npower_db = 1.0");
    assert!(matches!(parse_cdl_profile(&both, origin), Err(Error::Schema { .. })));
    let neither = ok.replace("power = 2.0\n", "");
    assert!(matches!(parse_cdl_profile(&neither, origin), Err(Error::Schema { .. })));
    let unknown = ok.replace("los = false", "los = false\nspread = 3");
    assert!(matches!(parse_cdl_profile(&unknown, origin), Err(Error::Schema { .. })));
    let empty = "name = \"x\"\nlos = false\n";
    assert!(parse_cdl_profile(empty, origin).is_err());
    assert!(matches!(load_cdl_profile("/nonexistent/profile.toml"), Err(Error::Io { .. })));
}

#[test]
fn config_defaults_and_overrides() {
    let dir = Path::new("/base");
    let cfg = ExperimentConfig::parse("", Path::new("empty"), dir).unwrap();
    assert_eq!(cfg.kappas, vec![0.1, 0.5, 0.7]);
    assert_eq!(cfg.rhos, vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
    assert_eq!(cfg.n_users, 10);
    assert_eq!(cfg.train.epochs, 64);
    assert_eq!(cfg.train.batch_size, 128);
    assert_eq!(cfg.b_max, 0.1);
    assert_eq!(cfg.profiles[0], dir.join("profiles/cdl-e.toml"));
    let link = cfg.link_config().unwrap();
    assert_eq!((link.n_t, link.n_r, link.n_sc), (16, 4, 128));
    assert_eq!(cfg.user_seed(3), cfg.master_seed + 3);

    let text = "master_seed = 9\nura = { rows = 2, cols = 4 }\nkappas = [0.25]\n[pattern]\nkind = \"staggered\"\nframe_length = 6\noccasion = 2\n";
    let cfg = ExperimentConfig::parse(text, Path::new("t"), dir).unwrap();
    assert_eq!(cfg.ura, UraSpec::Grid { rows: 2, cols: 4 });
    assert_eq!(cfg.link_config().unwrap().n_t, 8);
    assert_eq!(cfg.pattern, PatternSection::Staggered { frame_length: 6, occasion: 2 });

    for bad in [
        "kappas = [1.0]",
        "kappas = [0.0]",
        "rhos = []",
        "n_users = 0",
        "bits_per_element = 16",
        "colour = 3",
        "[link]\ncrc_poly = \"0101\"",
        "[link]\nn_pilot = 4",
        "[train]\nlr = -1.0",
    ] {
        let r = ExperimentConfig::parse(bad, Path::new("bad"), dir);
        assert!(matches!(r, Err(Error::Schema { .. })), "{bad} -> {r:?}");
    }
}

#[test]
fn model_files_round_trip_bit_exactly() {
    let mut m = Autoencoder::new(0.3, CsiDims::new(8, 2, 2).unwrap(), 77).unwrap().with_kappa_index(4);
    m.set_norm(NormStats::new(-1.25, 2.5).unwrap());
    let bytes = encode_model(&m);
    let back = decode_model(&bytes, Path::new("mem")).unwrap();
    assert_eq!(back, m);
    assert_eq!(encode_model(&back), bytes);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bin");
    save_model(&m, &path).unwrap();
    assert_eq!(load_model(&path).unwrap(), m);

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode_model(&bad, Path::new("mem")).is_err());
    assert!(decode_model(&bytes[..bytes.len() - 1], Path::new("mem")).is_err());
    let mut longer = bytes.clone();
    longer.push(0);
    assert!(decode_model(&longer, Path::new("mem")).is_err());
}

#[test]
fn policy_csv_round_trip() {
    let rows = vec![
        PolicyRow { low_db: f64::NEG_INFINITY, high_db: 2.5, choice: KappaChoice::NoCompression, measured_bler: None },
        PolicyRow { low_db: 2.5, high_db: 7.5, choice: KappaChoice::Kappa(0.7), measured_bler: Some(0.05) },
        PolicyRow { low_db: 7.5, high_db: f64::INFINITY, choice: KappaChoice::Kappa(0.1), measured_bler: Some(0.0) },
    ];
    let table = PolicyTable::from_rows("CDL-E", 0.1, rows).unwrap();
    let mut buf = Vec::new();
    write_policy(&table, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("bucket_low_db,bucket_high_db,kappa_or_baseline,measured_bler\n"));
    assert!(text.contains("baseline"));
    let back = read_policy(buf.as_slice(), "CDL-E", 0.1).unwrap();
    assert_eq!(back, table);
    assert_eq!(back.lookup(0.0), KappaChoice::NoCompression);
    assert_eq!(back.lookup(5.0), KappaChoice::Kappa(0.7));
    assert_eq!(back.lookup(50.0), KappaChoice::Kappa(0.1));

    let broken = text.replace("0.7", "seven");
    assert!(read_policy(broken.as_bytes(), "CDL-E", 0.1).is_err());
}

#[test]
fn history_csv_has_one_row_per_epoch() {
    let history = TrainHistory {
        train_loss: (0..64).map(|i| 1.0 / (1.0 + i as f64)).collect(),
        val_loss: (0..64).map(|i| 1.1 / (1.0 + i as f64)).collect(),
        seconds: 1.0,
    };
    let mut buf = Vec::new();
    assert!(emit_history(&history, &mut buf).unwrap());
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "epoch,train_loss,val_loss");
    assert_eq!(lines.len(), 65);
    assert!(lines[1].starts_with("1,1.0,1.1"));
}

#[test]
fn stopwatch_normalizes_against_the_slowest_section() {
    let mut sw = Stopwatch::new();
    sw.record("a", std::time::Duration::from_millis(30));
    sw.record("b", std::time::Duration::from_millis(60));
    sw.record("a", std::time::Duration::from_millis(30));
    let outer = sw.time("outer", || {
        let mut inner = Stopwatch::new();
        inner.time("child", || std::thread::sleep(std::time::Duration::from_millis(5)));
        inner.seconds("child")
    });
    assert!(outer <= sw.seconds("outer"));
    let n = sw.normalized();
    assert_eq!(n["a"], 1.0);
    assert_eq!(n["b"], 1.0);
    assert!(n.values().all(|v| *v > 0.0 && *v <= 1.0));
}

proptest::proptest! {
    #[test]
    fn model_bytes_round_trip_for_any_shape(
        n_sc in 1usize..12,
        n_r in 1usize..3,
        n_t in 1usize..4,
        step in 1u32..10,
        seed in proptest::prelude::any::<u64>(),
        lo in -5.0f64..0.0,
        span in 0.1f64..5.0,
    ) {
        let kappa = step as f64 / 10.0;
        let mut m = Autoencoder::new(kappa, CsiDims::new(n_sc, n_r, n_t).unwrap(), seed).unwrap();
        m.set_norm(NormStats::new(lo, lo + span).unwrap());
        let bytes = encode_model(&m);
        let back = decode_model(&bytes, Path::new("mem")).unwrap();
        proptest::prop_assert_eq!(encode_model(&back), bytes);
        proptest::prop_assert_eq!(back, m);
    }

    #[test]
    fn policy_csv_round_trips_any_selection(
        picks in proptest::collection::vec((0usize..4, 0.0f64..0.1), 1..8),
    ) {
        let options = [0.1, 0.3, 0.5, 0.7];
        let n = picks.len();
        let rows: Vec<PolicyRow> = picks
            .iter()
            .enumerate()
            .map(|(i, &(k, b))| PolicyRow {
                low_db: if i == 0 { f64::NEG_INFINITY } else { 5.0 * i as f64 - 2.5 },
                high_db: if i + 1 == n { f64::INFINITY } else { 5.0 * i as f64 + 2.5 },
                choice: if k == 0 { KappaChoice::NoCompression } else { KappaChoice::Kappa(options[k]) },
                measured_bler: if k == 0 { None } else { Some(b) },
            })
            .collect();
        let table = PolicyTable::from_rows("X", 0.1, rows).unwrap();
        let mut buf = Vec::new();
        write_policy(&table, &mut buf).unwrap();
        proptest::prop_assert_eq!(read_policy(buf.as_slice(), "X", 0.1).unwrap(), table);
    }
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"));
    let desk = ExperimentConfig::load(dir.join("desk.toml")).unwrap();
    let expected = ExperimentConfig {
        profiles: vec![dir.join("../profiles/cdl-e.toml"), dir.join("../profiles/cdl-c.toml")],
        ..ExperimentConfig::default()
    };
    assert_eq!(desk, expected);
    let quick = ExperimentConfig::load(dir.join("quick.toml")).unwrap();
    assert_eq!(quick.link_config().unwrap().n_t, 4);
    assert_eq!(quick.load_profiles().unwrap().len(), 2);
}
