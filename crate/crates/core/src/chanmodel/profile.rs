use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One multipath cluster: delay in seconds, linear power, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdlCluster {
    pub delay: f64,
    pub power: f64,
    pub aod_azimuth: f64,
    pub aod_zenith: f64,
    pub aoa_azimuth: f64,
    pub aoa_zenith: f64,
}

/// A clustered-delay-line profile with powers normalized to unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CdlProfile {
    name: String,
    los: bool,
    clusters: Vec<CdlCluster>,
}

impl CdlProfile {
    /// Validates the clusters and rescales their powers to sum to one.
    /// Cluster order is preserved.
    pub fn new(name: impl Into<String>, los: bool, mut clusters: Vec<CdlCluster>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::invalid("profile", "cluster list is empty"));
        }
        for (i, c) in clusters.iter().enumerate() {
            if !(c.delay.is_finite() && c.delay >= 0.0) {
                return Err(Error::invalid(
                    "profile",
                    alloc::format!("cluster {i}: delay must be finite and non-negative"),
                ));
            }
            if !(c.power.is_finite() && c.power > 0.0) {
                return Err(Error::invalid(
                    "profile",
                    alloc::format!("cluster {i}: power must be finite and positive"),
                ));
            }
            let angles = [c.aod_azimuth, c.aod_zenith, c.aoa_azimuth, c.aoa_zenith];
            if angles.iter().any(|a| !a.is_finite()) {
                return Err(Error::invalid(
                    "profile",
                    alloc::format!("cluster {i}: angles must be finite"),
                ));
            }
        }
        let total: f64 = clusters.iter().map(|c| c.power).sum();
        for c in &mut clusters {
            c.power /= total;
        }
        Ok(CdlProfile {
            name: name.into(),
            los,
            clusters,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_los(&self) -> bool {
        self.los
    }

    pub fn clusters(&self) -> &[CdlCluster] {
        &self.clusters
    }

    /// Keeps the first `n` clusters and renormalizes. `truncated(1)` gives the
    /// single-cluster reading of a profile.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        let keep = self.clusters.iter().take(n).copied().collect();
        CdlProfile::new(self.name.clone(), self.los, keep)
    }
}
