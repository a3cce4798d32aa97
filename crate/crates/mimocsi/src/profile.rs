//! CDL profile files.
//!
//! ```toml
//! name = "CDL-E"
//! los = true
//!
//! [[clusters]]
//! delay_s = 0.0
//! power_db = -0.03      # or `power = <linear gain>`
//! aod_az_deg = 0.0
//! aod_zen_deg = 99.6
//! aoa_az_deg = -180.0
//! aoa_zen_deg = 80.4
//! ```
//!
//! Powers are normalized to unit sum and angles converted to radians on load.
//! Cluster order is preserved.

use std::path::Path;

use mimocsi_core::chanmodel::{CdlCluster, CdlProfile};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    name: String,
    los: bool,
    #[serde(default)]
    clusters: Vec<ClusterRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterRecord {
    delay_s: f64,
    power_db: Option<f64>,
    power: Option<f64>,
    aod_az_deg: f64,
    aod_zen_deg: f64,
    aoa_az_deg: f64,
    aoa_zen_deg: f64,
}

/// Parses profile text; `origin` only labels errors.
pub fn parse_cdl_profile(text: &str, origin: &Path) -> Result<CdlProfile> {
    let file: ProfileFile = toml::from_str(text).map_err(|e| Error::schema(origin, e.to_string()))?;
    let clusters = file
        .clusters
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let power = match (c.power_db, c.power) {
                (Some(db), None) => 10f64.powf(db / 10.0),
                (None, Some(p)) => p,
                _ => {
                    return Err(Error::schema(
                        origin,
                        format!("clusters[{i}]: exactly one of `power_db` and `power` is required"),
                    ))
                }
            };
            Ok(CdlCluster {
                delay: c.delay_s,
                power,
                aod_azimuth: c.aod_az_deg.to_radians(),
                aod_zenith: c.aod_zen_deg.to_radians(),
                aoa_azimuth: c.aoa_az_deg.to_radians(),
                aoa_zenith: c.aoa_zen_deg.to_radians(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CdlProfile::new(file.name, file.los, clusters)?)
}

pub fn load_cdl_profile(path: impl AsRef<Path>) -> Result<CdlProfile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cdl_profile(&text, path)
}
