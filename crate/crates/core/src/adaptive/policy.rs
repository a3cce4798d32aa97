use alloc::string::String;
use alloc::vec::Vec;

use super::dataset::Dataset;
use crate::codec::Autoencoder;
use crate::error::{Error, Result};
use crate::link::LinkScenario;
use crate::metrics::ErrorCounts;

/// Target BLER ceiling.
pub const DEFAULT_B_MAX: f64 = 0.1;

/// Outcome of the ratio selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaChoice {
    Kappa(f64),
    /// No ratio met the ceiling: feed back the uncompressed estimate.
    NoCompression,
}

impl KappaChoice {
    /// The ratio, with zero standing for uncompressed feedback.
    pub fn kappa(self) -> f64 {
        match self {
            KappaChoice::Kappa(k) => k,
            KappaChoice::NoCompression => 0.0,
        }
    }

    pub fn from_kappa(k: f64) -> Self {
        if k == 0.0 {
            KappaChoice::NoCompression
        } else {
            KappaChoice::Kappa(k)
        }
    }
}

/// Constrained selection for the bucket containing `rho_db`: the lowest
/// mean BLER among ratios with BLER at most `b_max`, ties going to the
/// larger ratio. Uncompressed entries (ratio zero) are not candidates.
pub fn select_kappa(
    dataset: &Dataset,
    channel_tag: &str,
    rho_db: f64,
    b_max: f64,
) -> Result<KappaChoice> {
    let bucket = dataset.buckets.bucket_of(rho_db);
    let mut any = false;
    let mut best: Option<(f64, f64)> = None;
    for e in dataset
        .entries_for(channel_tag, bucket)
        .filter(|e| e.kappa > 0.0)
    {
        any = true;
        if e.mean_bler > b_max {
            continue;
        }
        let better = match best {
            None => true,
            Some((k, b)) => e.mean_bler < b || (e.mean_bler == b && e.kappa > k),
        };
        if better {
            best = Some((e.kappa, e.mean_bler));
        }
    }
    if !any {
        return Err(Error::MissingBucket {
            tag: channel_tag.into(),
            rho_db,
        });
    }
    Ok(best.map_or(KappaChoice::NoCompression, |(k, _)| KappaChoice::Kappa(k)))
}

/// One SNR interval `[low_db, high_db)` of a policy table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyRow {
    pub low_db: f64,
    pub high_db: f64,
    pub choice: KappaChoice,
    /// Dataset BLER of the chosen option, when measured.
    pub measured_bler: Option<f64>,
}

/// Lookup table from SNR to compression ratio for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    pub channel_tag: String,
    pub b_max: f64,
    rows: Vec<PolicyRow>,
}

impl PolicyTable {
    /// Solves the selection for every bucket of `dataset`.
    pub fn build(dataset: &Dataset, channel_tag: &str, b_max: f64) -> Result<Self> {
        let rows = dataset
            .buckets
            .centers()
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let choice = select_kappa(dataset, channel_tag, c, b_max)?;
                let measured_bler = dataset
                    .entries_for(channel_tag, i)
                    .find(|e| e.kappa == choice.kappa())
                    .map(|e| e.mean_bler);
                let (low_db, high_db) = dataset.buckets.edges(i);
                Ok(PolicyRow {
                    low_db,
                    high_db,
                    choice,
                    measured_bler,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PolicyTable::from_rows(channel_tag, b_max, rows)
    }

    /// Table from explicit rows, which must be contiguous intervals in
    /// increasing order.
    pub fn from_rows(
        channel_tag: impl Into<String>,
        b_max: f64,
        rows: Vec<PolicyRow>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("policy table", "no rows"));
        }
        for r in &rows {
            if r.low_db.is_nan() || r.high_db.is_nan() || r.low_db >= r.high_db {
                return Err(Error::invalid("policy table", "each row needs low < high"));
            }
            if let KappaChoice::Kappa(k) = r.choice {
                if !(k > 0.0 && k < 1.0) {
                    return Err(Error::invalid(
                        "policy table",
                        alloc::format!("kappa {k} outside (0, 1)"),
                    ));
                }
            }
        }
        if rows.windows(2).any(|w| w[0].high_db != w[1].low_db) {
            return Err(Error::invalid("policy table", "rows must be contiguous"));
        }
        Ok(PolicyTable {
            channel_tag: channel_tag.into(),
            b_max,
            rows,
        })
    }

    pub fn rows(&self) -> &[PolicyRow] {
        &self.rows
    }

    pub fn lookup(&self, rho_db: f64) -> KappaChoice {
        self.rows
            .iter()
            .find(|r| rho_db < r.high_db)
            .unwrap_or(&self.rows[self.rows.len() - 1])
            .choice
    }
}

/// Adaptive trace at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptivePoint {
    pub rho_db: f64,
    pub choice: KappaChoice,
    pub counts: ErrorCounts,
    pub recon_mse: f64,
}

/// Evaluates the table's choice at every SNR over the given users, using
/// the trained model for the chosen ratio.
pub fn run_adaptive(
    table: &PolicyTable,
    rhos: &[f64],
    models: &[Autoencoder],
    scenario: &LinkScenario,
    users: &[u64],
    bits: u8,
) -> Result<Vec<AdaptivePoint>> {
    rhos.iter()
        .map(|&rho_db| {
            let choice = table.lookup(rho_db);
            let model = match choice {
                KappaChoice::NoCompression => None,
                KappaChoice::Kappa(k) => {
                    Some(models.iter().find(|m| m.kappa() == k).ok_or_else(|| {
                        Error::invalid(
                            "adaptive models",
                            alloc::format!("no trained model for kappa {k}"),
                        )
                    })?)
                }
            };
            let mut point = AdaptivePoint {
                rho_db,
                choice,
                counts: ErrorCounts::default(),
                recon_mse: 0.0,
            };
            for &u in users {
                let o = scenario.evaluate(model, bits, rho_db, u)?;
                point.counts = point.counts + o.counts;
                point.recon_mse += o.recon_mse;
            }
            if !users.is_empty() {
                point.recon_mse /= users.len() as f64;
            }
            Ok(point)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adaptive::{build_dataset, MeasurementRecord, SnrBuckets};
    use alloc::vec;

    fn table(blers: &[(f64, f64)]) -> Dataset {
        let recs: Vec<_> = blers
            .iter()
            .map(|&(k, b)| MeasurementRecord::new("c", 0, 10.0, k, 0.0, b, 0.1).unwrap())
            .collect();
        build_dataset(&recs, SnrBuckets::new(vec![10.0]).unwrap()).unwrap()
    }

    #[test]
    fn constrained_argmin() {
        let d = table(&[(0.1, 0.05), (0.5, 0.02), (0.7, 0.3)]);
        assert_eq!(
            select_kappa(&d, "c", 10.0, 0.1).unwrap(),
            KappaChoice::Kappa(0.5)
        );
    }

    #[test]
    fn fallback_and_ties() {
        let d = table(&[(0.1, 0.2), (0.5, 0.3)]);
        assert_eq!(
            select_kappa(&d, "c", 10.0, 0.1).unwrap(),
            KappaChoice::NoCompression
        );
        let d = table(&[(0.1, 0.02), (0.5, 0.02)]);
        assert_eq!(
            select_kappa(&d, "c", 10.0, 0.1).unwrap(),
            KappaChoice::Kappa(0.5)
        );
        assert!(matches!(
            select_kappa(&d, "other", 10.0, 0.1),
            Err(Error::MissingBucket { .. })
        ));
    }

    #[test]
    fn table_lookup() {
        let d = table(&[(0.1, 0.02), (0.5, 0.5)]);
        let t = PolicyTable::build(&d, "c", 0.1).unwrap();
        assert_eq!(t.rows().len(), 1);
        assert_eq!(t.lookup(-100.0), KappaChoice::Kappa(0.1));
        assert_eq!(t.rows()[0].measured_bler, Some(0.02));
    }
}
