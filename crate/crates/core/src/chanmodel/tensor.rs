use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shape of a CSI tensor: subcarriers, receive antennas, transmit antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CsiDims {
    pub n_sc: usize,
    pub n_r: usize,
    pub n_t: usize,
}

impl CsiDims {
    pub fn new(n_sc: usize, n_r: usize, n_t: usize) -> Result<Self> {
        if n_sc == 0 || n_r == 0 || n_t == 0 {
            return Err(Error::invalid(
                "dimensions",
                alloc::format!("({n_sc}, {n_r}, {n_t}) must all be positive"),
            ));
        }
        Ok(CsiDims { n_sc, n_r, n_t })
    }

    /// Number of complex entries.
    pub fn len(&self) -> usize {
        self.n_sc * self.n_r * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat position of `(k, r, t)`: subcarrier-major, then rx, then tx.
    pub fn index(&self, k: usize, r: usize, t: usize) -> usize {
        (k * self.n_r + r) * self.n_t + t
    }
}

/// Complex frequency-domain CSI indexed `(subcarrier, rx, tx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTensor {
    dims: CsiDims,
    data: Vec<Complex64>,
}

impl ChannelTensor {
    pub fn zeros(dims: CsiDims) -> Self {
        ChannelTensor {
            dims,
            data: vec![Complex64::new(0.0, 0.0); dims.len()],
        }
    }

    /// Wraps flat data laid out as [`CsiDims::index`] describes.
    pub fn from_vec(dims: CsiDims, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                what: "channel tensor data",
                expected: dims.len(),
                found: data.len(),
            });
        }
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("channel tensor", "entries must be finite"));
        }
        Ok(ChannelTensor { dims, data })
    }

    pub fn dims(&self) -> CsiDims {
        self.dims
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, k: usize, r: usize, t: usize) -> Complex64 {
        self.data[self.dims.index(k, r, t)]
    }

    pub fn set(&mut self, k: usize, r: usize, t: usize, value: Complex64) {
        let i = self.dims.index(k, r, t);
        self.data[i] = value;
    }

    /// The `n_r x n_t` matrix of subcarrier `k`.
    pub fn subcarrier(&self, k: usize) -> DMatrix<Complex64> {
        let d = self.dims;
        let block = &self.data[k * d.n_r * d.n_t..(k + 1) * d.n_r * d.n_t];
        DMatrix::from_row_slice(d.n_r, d.n_t, block)
    }

    pub fn set_subcarrier(&mut self, k: usize, m: &DMatrix<Complex64>) -> Result<()> {
        let d = self.dims;
        if m.nrows() != d.n_r || m.ncols() != d.n_t {
            return Err(Error::DimensionMismatch {
                what: "subcarrier matrix",
                expected: d.n_r * d.n_t,
                found: m.nrows() * m.ncols(),
            });
        }
        for r in 0..d.n_r {
            for t in 0..d.n_t {
                self.set(k, r, t, m[(r, t)]);
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Sum of squared magnitudes over all entries.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subcarrier_round_trip() {
        let dims = CsiDims::new(3, 2, 4).unwrap();
        let data = (0..dims.len())
            .map(|i| Complex64::new(i as f64, -(i as f64)))
            .collect();
        let h = ChannelTensor::from_vec(dims, data).unwrap();
        let m = h.subcarrier(2);
        assert_eq!(m[(1, 3)], h.get(2, 1, 3));
        let mut g = ChannelTensor::zeros(dims);
        for k in 0..3 {
            g.set_subcarrier(k, &h.subcarrier(k)).unwrap();
        }
        assert_eq!(g, h);
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        let dims = CsiDims::new(1, 1, 2).unwrap();
        assert!(ChannelTensor::from_vec(dims, vec![Complex64::new(0.0, 0.0)]).is_err());
        let bad = vec![Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0)];
        assert!(ChannelTensor::from_vec(dims, bad).is_err());
        assert!(CsiDims::new(0, 1, 1).is_err());
    }
}
