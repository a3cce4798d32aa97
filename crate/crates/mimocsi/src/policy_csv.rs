//! Policy tables as CSV with header
//! `bucket_low_db,bucket_high_db,kappa_or_baseline,measured_bler`.
//! Uncompressed rows carry `baseline` in the ratio column; an unmeasured BLER
//! is left empty.

use std::io::{Read, Write};

use mimocsi_core::adaptive::{KappaChoice, PolicyRow, PolicyTable};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BASELINE: &str = "baseline";

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    bucket_low_db: f64,
    bucket_high_db: f64,
    kappa_or_baseline: String,
    measured_bler: Option<f64>,
}

pub fn write_policy<W: Write>(table: &PolicyTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in table.rows() {
        w.serialize(Record {
            bucket_low_db: r.low_db,
            bucket_high_db: r.high_db,
            kappa_or_baseline: match r.choice {
                KappaChoice::Kappa(k) => k.to_string(),
                KappaChoice::NoCompression => BASELINE.into(),
            },
            measured_bler: r.measured_bler,
        })?;
    }
    w.flush().map_err(|e| Error::io("policy table", e))?;
    Ok(())
}

pub fn read_policy<R: Read>(input: R, channel_tag: &str, b_max: f64) -> Result<PolicyTable> {
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(input).deserialize() {
        let rec: Record = rec?;
        let choice = if rec.kappa_or_baseline == BASELINE {
            KappaChoice::NoCompression
        } else {
            let k: f64 = rec
                .kappa_or_baseline
                .parse()
                .map_err(|_| Error::schema("policy table", format!("bad ratio `{}`", rec.kappa_or_baseline)))?;
            KappaChoice::Kappa(k)
        };
        rows.push(PolicyRow {
            low_db: rec.bucket_low_db,
            high_db: rec.bucket_high_db,
            choice,
            measured_bler: rec.measured_bler,
        });
    }
    Ok(PolicyTable::from_rows(channel_tag, b_max, rows)?)
}
