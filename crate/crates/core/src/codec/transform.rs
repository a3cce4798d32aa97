//! Complex-to-real transforms. `realify` stacks all real parts followed by
//! all imaginary parts; `vectorize_csi` flattens subcarrier-major, then
//! receive antenna, then transmit antenna.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chanmodel::{ChannelTensor, CsiDims};
use crate::error::{Error, Result};

pub fn realify(x: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * x.len());
    out.extend(x.iter().map(|z| z.re));
    out.extend(x.iter().map(|z| z.im));
    out
}

/// Inverse of [`realify`]. Odd lengths are rejected.
pub fn complexify(v: &[f64]) -> Result<Vec<Complex64>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::invalid("real vector", "length must be even"));
    }
    let (re, im) = v.split_at(v.len() / 2);
    Ok(re
        .iter()
        .zip(im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect())
}

/// Position `(k, r, t)` lands at `k n_r n_t + r n_t + t`.
pub fn vectorize_csi(h: &ChannelTensor) -> Vec<Complex64> {
    h.as_slice().to_vec()
}

pub fn devectorize_csi(dims: CsiDims, v: Vec<Complex64>) -> Result<ChannelTensor> {
    ChannelTensor::from_vec(dims, v)
}
