use mimocsi_core::adaptive::{
    build_dataset, schedule_slots, select_kappa, KappaChoice, MeasurementRecord, Pattern,
    PolicyTable, SlotRole, SnrBuckets,
};
use mimocsi_core::chanmodel::{synthesize_csi, CdlCluster, CdlProfile, CsiDims, UraGeometry};
use mimocsi_core::codec::{
    deserialize, latent_dim, quantize, quantize_f32, serialize, LatentCsi,
};
use mimocsi_core::link::{
    generate_pilots, ls_estimate, svd_precoder, transmit_pilots, waterfill,
};
use mimocsi_core::metrics::{merge, ErrorCounts};
use mimocsi_core::rng::rng_from_seed;
use proptest::prelude::*;

fn cluster(delay: f64, power: f64, a: [f64; 4]) -> CdlCluster {
    CdlCluster {
        delay,
        power,
        aod_azimuth: a[0],
        aod_zenith: a[1],
        aoa_azimuth: a[2],
        aoa_zenith: a[3],
    }
}

fn angle() -> impl Strategy<Value = f64> {
    -3.1f64..3.1
}

fn arb_cluster() -> impl Strategy<Value = CdlCluster> {
    (0.0f64..500e-9, 0.01f64..1.0, angle(), angle(), angle(), angle())
        .prop_map(|(d, p, a, b, c, e)| cluster(d, p, [a, b, c, e]))
}

fn arb_profile() -> impl Strategy<Value = CdlProfile> {
    prop::collection::vec(arb_cluster(), 1..6)
        .prop_map(|cs| CdlProfile::new("arb", false, cs).unwrap())
}

fn small_dims() -> CsiDims {
    CsiDims::new(8, 2, 4).unwrap()
}

fn geom() -> UraGeometry {
    UraGeometry::new(2, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesis_is_deterministic(p in arb_profile(), seed in any::<u64>()) {
        let a = synthesize_csi(&p, geom(), small_dims(), 15e3, seed).unwrap();
        let b = synthesize_csi(&p, geom(), small_dims(), 15e3, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn single_cluster_is_rank_one(c in arb_cluster(), seed in any::<u64>()) {
        let p = CdlProfile::new("one", true, vec![c]).unwrap();
        let h = synthesize_csi(&p, geom(), small_dims(), 15e3, seed).unwrap();
        for k in 0..8 {
            let sv = h.subcarrier(k).singular_values();
            prop_assert!((sv[0] - (2.0f64 * 4.0).sqrt()).abs() < 1e-9);
            for s in sv.iter().skip(1) {
                prop_assert!(*s < 1e-9 * sv[0]);
            }
        }
    }

    #[test]
    fn zero_delay_subcarriers_are_identical(cs in prop::collection::vec(arb_cluster(), 1..5), seed in any::<u64>()) {
        let cs: Vec<_> = cs.into_iter().map(|mut c| { c.delay = 0.0; c }).collect();
        let p = CdlProfile::new("flat", false, cs).unwrap();
        let h = synthesize_csi(&p, geom(), small_dims(), 15e3, seed).unwrap();
        for k in 0..7 {
            let a = h.subcarrier(k);
            let b = h.subcarrier(k + 1);
            let corr = a.dotc(&b).norm() / (a.norm() * b.norm());
            prop_assert!((corr - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_ls_is_exact(p in arb_profile(), seed in any::<u64>(), orth in any::<bool>()) {
        let h = synthesize_csi(&p, geom(), small_dims(), 15e3, seed).unwrap();
        let x = generate_pilots(8, 4, seed, orth).unwrap();
        let est = ls_estimate(&transmit_pilots(&h, &x, 0.0, &mut rng_from_seed(0)).unwrap()).unwrap();
        let err: f64 = est.as_slice().iter().zip(h.as_slice()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-10 * h.energy().sqrt());
    }

    #[test]
    fn precoding_diagonalizes(p in arb_profile(), seed in any::<u64>()) {
        let h = synthesize_csi(&p, geom(), small_dims(), 15e3, seed).unwrap();
        let set = svd_precoder(&h, 1e-3, 0.5).unwrap();
        for (k, sc) in set.subcarriers.iter().enumerate() {
            let d = sc.g.adjoint() * h.subcarrier(k) * &sc.f;
            let (mut on, mut off) = (0.0, 0.0);
            for i in 0..d.nrows() {
                for j in 0..d.ncols() {
                    if i == j { on += d[(i, j)].norm_sqr() } else { off += d[(i, j)].norm_sqr() }
                }
            }
            prop_assert!(off <= 1e-12 * on.max(1e-300));
        }
    }

    #[test]
    fn waterfilling_kkt(gains in prop::collection::vec(1e-3f64..10.0, 1..8), noise in 1e-4f64..10.0, budget in 1e-2f64..10.0) {
        let p = waterfill(&gains, noise, budget).unwrap();
        prop_assert!((p.iter().sum::<f64>() - budget).abs() < 1e-9 * budget.max(1.0));
        let active: Vec<f64> = p.iter().zip(&gains).filter(|(pi, _)| **pi > 0.0).map(|(pi, g)| pi + noise / (g * g)).collect();
        prop_assert!(!active.is_empty());
        let mu = active[0];
        for a in &active {
            prop_assert!((a - mu).abs() < 1e-8 * mu);
        }
        for (pi, g) in p.iter().zip(&gains) {
            if *pi == 0.0 {
                prop_assert!(noise / (g * g) >= mu * (1.0 - 1e-8));
            }
        }
    }

    #[test]
    fn latent_is_strictly_smaller(kappa in 1e-6f64..0.999_999, n_sc in 1usize..300, n_r in 1usize..6, n_t in 1usize..20) {
        let d = latent_dim(kappa, n_sc, n_r, n_t).unwrap();
        let two_n = 2 * n_sc * n_r * n_t;
        prop_assert!(d >= 1);
        prop_assert!(d <= two_n);
        prop_assert_eq!(d % (2 * n_r * n_t), 0);
        if kappa * n_sc as f64 >= 1.0 {
            prop_assert!(d < two_n);
        }
    }

    #[test]
    fn quantization_is_bounded(v in prop::collection::vec(-1e3f64..1e3, 0..64)) {
        let q = quantize(&v);
        for (a, b) in v.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-6);
        }
        prop_assert_eq!(quantize(&q), q);
    }

    #[test]
    fn f32_quantization_is_stable(x in -100f64..100.0) {
        let y = quantize_f32(x) as f64;
        prop_assert!((x - y).abs() < 1e-6 + 1e-5 * x.abs());
        prop_assert_eq!(quantize_f32(y), quantize_f32(x));
    }

    #[test]
    fn wire_round_trip(groups in 1usize..6, raw in prop::collection::vec(-50f64..50.0, 48), idx in any::<u8>(), wide in any::<bool>()) {
        let dims = CsiDims::new(8, 1, 2).unwrap();
        let d = 4 * groups;
        let bits = if wide { 64 } else { 32 };
        let values: Vec<f64> = if wide {
            quantize(&raw[..d])
        } else {
            raw[..d].iter().map(|x| quantize_f32(*x) as f64).collect()
        };
        let l = LatentCsi::new(values, idx, bits, dims).unwrap();
        let bytes = serialize(&l).unwrap();
        let back = deserialize(&bytes).unwrap();
        prop_assert_eq!(serialize(&back).unwrap(), bytes);
        prop_assert_eq!(back, l);
    }

    #[test]
    fn merge_is_associative_and_commutative(a in arb_counts(), b in arb_counts(), c in arb_counts()) {
        prop_assert_eq!(merge(a, b), merge(b, a));
        prop_assert_eq!(merge(merge(a, b), c), merge(a, merge(b, c)));
        prop_assert_eq!(merge(a, ErrorCounts::default()), a);
        let m = merge(a, b);
        prop_assert!((0.0..=1.0).contains(&m.ber()) && (0.0..=1.0).contains(&m.bler()));
        if m.bits_total > 0 {
            let weighted = (a.ber() * a.bits_total as f64 + b.ber() * b.bits_total as f64) / m.bits_total as f64;
            prop_assert!((weighted - m.ber()).abs() < 1e-12);
        }
    }

    #[test]
    fn policy_respects_ceiling(rows in prop::collection::vec((0usize..3, 0usize..4, 0.0f64..0.3), 1..40), b_max in 0.0f64..0.3) {
        let kappas = [0.0, 0.1, 0.5, 0.7];
        let rhos = [0.0, 10.0, 20.0];
        let recs: Vec<MeasurementRecord> = rows.iter().enumerate()
            .map(|(u, (r, k, bler))| MeasurementRecord::new("e", u as u64, rhos[*r], kappas[*k], 0.0, *bler, b_max).unwrap())
            .collect();
        let ds = build_dataset(&recs, SnrBuckets::new(rhos.to_vec()).unwrap()).unwrap();
        for rho in rhos {
            match select_kappa(&ds, "e", rho, b_max) {
                Ok(KappaChoice::Kappa(k)) => {
                    let e = ds.entries_for("e", ds.buckets.bucket_of(rho)).find(|e| e.kappa == k).unwrap();
                    prop_assert!(e.mean_bler <= b_max);
                    prop_assert!(k > 0.0);
                }
                Ok(KappaChoice::NoCompression) => {
                    prop_assert!(ds.entries_for("e", ds.buckets.bucket_of(rho)).filter(|e| e.kappa > 0.0).all(|e| e.mean_bler > b_max));
                }
                Err(_) => {
                    prop_assert!(ds.entries_for("e", ds.buckets.bucket_of(rho)).all(|e| e.kappa == 0.0));
                }
            }
        }
        if rhos.iter().all(|r| select_kappa(&ds, "e", *r, b_max).is_ok()) {
            let t1 = PolicyTable::build(&ds, "e", b_max).unwrap();
            let t2 = PolicyTable::build(&ds, "e", b_max).unwrap();
            prop_assert_eq!(t1, t2);
        }
    }

    #[test]
    fn bucket_is_nearest_center(centers in prop::collection::btree_set(-40i32..60, 1..10), rho in -80f64..100.0) {
        let centers: Vec<f64> = centers.into_iter().map(f64::from).collect();
        let b = SnrBuckets::new(centers.clone()).unwrap();
        let i = b.bucket_of(rho);
        let d = (centers[i] - rho).abs();
        prop_assert!(centers.iter().all(|c| (c - rho).abs() >= d));
        let (lo, hi) = b.edges(i);
        prop_assert!(lo <= rho && rho < hi);
    }
}

fn arb_counts() -> impl Strategy<Value = ErrorCounts> {
    (0u64..1_000_000, 0u64..1_000_000, 0u64..1000, 0u64..1000).prop_map(|(a, b, c, d)| {
        ErrorCounts {
            bit_errors: a.min(b),
            bits_total: a.max(b),
            block_errors: c.min(d),
            blocks_total: c.max(d),
        }
    })
}

#[test]
fn schedule_matches_closed_form_exhaustively() {
    for frame in 1..=64usize {
        for step in 0..=20 {
            let fraction = step as f64 / 20.0;
            let s = schedule_slots(Pattern::DutyCycle { train_fraction: fraction }, frame).unwrap();
            assert_eq!(s.frame_length(), frame);
            // smallest n with n >= fraction * frame, in exact rational arithmetic
            let n_train = (0..=frame).find(|n| 20 * n >= step * frame).unwrap();
            for (i, role) in s.slots.iter().enumerate() {
                let expected = if i < n_train { SlotRole::Train } else { SlotRole::Infer };
                assert_eq!(*role, expected, "frame {frame} fraction {fraction} slot {i}");
            }
        }
        for occasion in 1..=frame + 2 {
            let s = schedule_slots(Pattern::Staggered { occasion }, frame).unwrap();
            assert_eq!(s.frame_length(), frame);
            for (i, role) in s.slots.iter().enumerate() {
                let expected = if i % occasion == 0 { SlotRole::Train } else { SlotRole::Infer };
                assert_eq!(*role, expected);
            }
        }
    }
    assert!(schedule_slots(Pattern::Staggered { occasion: 0 }, 4).is_err());
    assert!(schedule_slots(Pattern::DutyCycle { train_fraction: 1.5 }, 4).is_err());
    assert!(schedule_slots(Pattern::DutyCycle { train_fraction: 0.5 }, 0).is_err());
}

#[test]
fn power_normalizes_to_one_over_seeds() {
    let p = CdlProfile::new(
        "three",
        false,
        vec![
            cluster(0.0, 2.0, [0.3, 1.2, -0.4, 1.5]),
            cluster(120e-9, 1.0, [-1.0, 1.0, 2.0, 1.7]),
            cluster(310e-9, 0.5, [2.2, 1.9, 0.1, 1.1]),
        ],
    )
    .unwrap();
    let dims = small_dims();
    let seeds = 400;
    let mean: f64 = (0..seeds)
        .map(|s| synthesize_csi(&p, geom(), dims, 15e3, s).unwrap().energy() / dims.len() as f64)
        .sum::<f64>()
        / seeds as f64;
    assert!((mean - 1.0).abs() < 0.05, "mean power {mean}");
}
