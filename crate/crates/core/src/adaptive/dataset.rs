use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One link measurement: a user at one SNR and compression ratio.
/// A ratio of zero marks uncompressed feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub channel_tag: String,
    pub user_seed: u64,
    pub rho_db: f64,
    pub kappa: f64,
    pub ber: f64,
    pub bler: f64,
    pub exceeds_bmax: bool,
}

impl MeasurementRecord {
    pub fn new(
        channel_tag: impl Into<String>,
        user_seed: u64,
        rho_db: f64,
        kappa: f64,
        ber: f64,
        bler: f64,
        b_max: f64,
    ) -> Result<Self> {
        let r = MeasurementRecord {
            channel_tag: channel_tag.into(),
            user_seed,
            rho_db,
            kappa,
            ber,
            bler,
            exceeds_bmax: bler > b_max,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rho_db.is_finite() {
            return Err(Error::invalid("measurement", "SNR must be finite"));
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::invalid(
                "measurement",
                alloc::format!("kappa {} outside [0, 1)", self.kappa),
            ));
        }
        if !(0.0..=1.0).contains(&self.ber) || !(0.0..=1.0).contains(&self.bler) {
            return Err(Error::invalid("measurement", "rates must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// SNR buckets centred on sorted grid points. Bucket `i` covers
/// `[low_i, high_i)` with edges halfway between neighbouring points; the
/// outer edges are infinite, so every SNR has exactly one bucket and it is
/// the nearest point (ties go up).
#[derive(Debug, Clone, PartialEq)]
pub struct SnrBuckets {
    centers: Vec<f64>,
}

impl SnrBuckets {
    pub fn new(mut centers: Vec<f64>) -> Result<Self> {
        if centers.is_empty() || centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid(
                "SNR buckets",
                "need at least one finite grid point",
            ));
        }
        centers.sort_by(f64::total_cmp);
        centers.dedup();
        Ok(SnrBuckets { centers })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let low = if i == 0 {
            f64::NEG_INFINITY
        } else {
            0.5 * (self.centers[i - 1] + self.centers[i])
        };
        let high = if i + 1 == self.centers.len() {
            f64::INFINITY
        } else {
            0.5 * (self.centers[i] + self.centers[i + 1])
        };
        (low, high)
    }

    pub fn bucket_of(&self, rho_db: f64) -> usize {
        (0..self.centers.len())
            .find(|&i| rho_db < self.edges(i).1)
            .unwrap_or(self.centers.len() - 1)
    }
}

/// Aggregate of all records sharing a channel, bucket and ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub channel_tag: String,
    pub bucket: usize,
    pub kappa: f64,
    pub mean_ber: f64,
    pub mean_bler: f64,
    pub trials: u64,
}

/// Measurement dataset ordered by channel tag, bucket and ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub buckets: SnrBuckets,
    pub entries: Vec<DatasetEntry>,
}

impl Dataset {
    pub fn entries_for<'a>(
        &'a self,
        tag: &'a str,
        bucket: usize,
    ) -> impl Iterator<Item = &'a DatasetEntry> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.channel_tag == tag && e.bucket == bucket)
    }
}

/// Groups records by `(channel_tag, bucket, kappa)` and averages their
/// rates. An empty record list gives an empty dataset.
pub fn build_dataset(records: &[MeasurementRecord], buckets: SnrBuckets) -> Result<Dataset> {
    let mut groups: BTreeMap<(String, usize, u64), (f64, f64, u64)> = BTreeMap::new();
    for r in records {
        r.validate()?;
        let key = (
            r.channel_tag.clone(),
            buckets.bucket_of(r.rho_db),
            r.kappa.to_bits(),
        );
        let g = groups.entry(key).or_insert((0.0, 0.0, 0));
        g.0 += r.ber;
        g.1 += r.bler;
        g.2 += 1;
    }
    let entries = groups
        .into_iter()
        .map(
            |((channel_tag, bucket, kappa), (ber, bler, n))| DatasetEntry {
                channel_tag,
                bucket,
                kappa: f64::from_bits(kappa),
                mean_ber: ber / n as f64,
                mean_bler: bler / n as f64,
                trials: n,
            },
        )
        .collect();
    Ok(Dataset { buckets, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn nearest_bucket() {
        let b = SnrBuckets::new(vec![0.0, 5.0, 10.0]).unwrap();
        assert_eq!(b.bucket_of(-40.0), 0);
        assert_eq!(b.bucket_of(2.4), 0);
        assert_eq!(b.bucket_of(2.5), 1);
        assert_eq!(b.bucket_of(7.0), 1);
        assert_eq!(b.bucket_of(99.0), 2);
        assert_eq!(b.edges(1), (2.5, 7.5));
    }

    #[test]
    fn mean_of_two() {
        let recs = [
            MeasurementRecord::new("e", 1, 30.0, 0.5, 0.01, 0.0, 0.1).unwrap(),
            MeasurementRecord::new("e", 2, 30.0, 0.5, 0.03, 0.2, 0.1).unwrap(),
        ];
        let d = build_dataset(&recs, SnrBuckets::new(vec![30.0]).unwrap()).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert!((d.entries[0].mean_bler - 0.1).abs() < 1e-15);
        assert_eq!(d.entries[0].trials, 2);
        assert!(recs[1].exceeds_bmax && !recs[0].exceeds_bmax);
        assert!(build_dataset(&[], SnrBuckets::new(vec![0.0]).unwrap())
            .unwrap()
            .entries
            .is_empty());
    }
}
