use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::array::{steering_vector, ula_steering_vector, UraGeometry};
use super::profile::CdlProfile;
use super::tensor::{ChannelTensor, CsiDims};
use crate::error::{Error, Result};
use crate::rng::{block_seed, rng_from_seed};

/// Draws one frequency-domain channel realization.
///
/// Cluster phases are i.i.d. uniform on `[0, 2 pi)` from `seed`, drawn in
/// cluster order. Steering entries have unit magnitude and cluster powers sum
/// to one, so the expected power of every entry is one.
pub fn synthesize_csi(
    profile: &CdlProfile,
    tx: UraGeometry,
    dims: CsiDims,
    delta_f: f64,
    seed: u64,
) -> Result<ChannelTensor> {
    if tx.element_count() != dims.n_t {
        return Err(Error::DimensionMismatch {
            what: "transmit array elements",
            expected: dims.n_t,
            found: tx.element_count(),
        });
    }
    if !(delta_f.is_finite() && delta_f > 0.0) {
        return Err(Error::invalid(
            "subcarrier spacing",
            "must be positive and finite",
        ));
    }

    let mut rng = rng_from_seed(seed);
    let mut h = ChannelTensor::zeros(dims);
    let per_sc = dims.n_r * dims.n_t;
    // outer product a_rx a_tx^H, reused across subcarriers
    let mut spatial = Vec::with_capacity(per_sc);

    for cluster in profile.clusters() {
        let phi: f64 = rng.random::<f64>() * 2.0 * PI;
        let gain = Complex64::from_polar(cluster.power.sqrt(), phi);
        let a_rx = ula_steering_vector(dims.n_r, cluster.aoa_azimuth, cluster.aoa_zenith);
        let a_tx = steering_vector(tx, cluster.aod_azimuth, cluster.aod_zenith);

        spatial.clear();
        for ar in &a_rx {
            for at in &a_tx {
                spatial.push(gain * ar * at.conj());
            }
        }

        let step = -2.0 * PI * cluster.delay * delta_f;
        let data = h.as_mut_slice();
        for k in 0..dims.n_sc {
            let rot = Complex64::from_polar(1.0, step * k as f64);
            let block = &mut data[k * per_sc..(k + 1) * per_sc];
            for (dst, s) in block.iter_mut().zip(&spatial) {
                *dst += s * rot;
            }
        }
    }
    Ok(h)
}

/// One tensor per coherence block. Block `b` uses the seed
/// `block_seed(seed, b)`, so block 0 equals [`synthesize_csi`] with `seed`.
pub fn draw_block_fading(
    profile: &CdlProfile,
    tx: UraGeometry,
    dims: CsiDims,
    delta_f: f64,
    seed: u64,
    n_blocks: usize,
) -> Result<Vec<ChannelTensor>> {
    if n_blocks == 0 {
        return Err(Error::invalid("block count", "need at least one block"));
    }
    (0..n_blocks as u64)
        .map(|b| synthesize_csi(profile, tx, dims, delta_f, block_seed(seed, b)))
        .collect()
}
