use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Element spacing in wavelengths.
pub const ELEMENT_SPACING: f64 = 0.5;

/// Uniform rectangular array with half-wavelength spacing.
///
/// Element `(row, col)` sits at `(col, row) * spacing` in the array plane
/// and is stored at index `row * cols + col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UraGeometry {
    rows: usize,
    cols: usize,
}

impl UraGeometry {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(
                "array geometry",
                alloc::format!("{rows}x{cols} has no elements"),
            ));
        }
        Ok(UraGeometry { rows, cols })
    }

    /// The 4x4 configuration.
    pub fn small() -> Self {
        UraGeometry { rows: 4, cols: 4 }
    }

    /// The 256x4 configuration.
    pub fn large() -> Self {
        UraGeometry { rows: 256, cols: 4 }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn spacing(&self) -> f64 {
        ELEMENT_SPACING
    }
}

/// Array response of `geom` towards `(azimuth, zenith)`, both in radians.
///
/// Entry `(row, col)` is `exp(j 2 pi d (col u + row v))` with
/// `u = sin(zenith) cos(azimuth)` and `v = sin(zenith) sin(azimuth)`.
pub fn steering_vector(geom: UraGeometry, azimuth: f64, zenith: f64) -> Vec<Complex64> {
    let u = zenith.sin() * azimuth.cos();
    let v = zenith.sin() * azimuth.sin();
    let k = 2.0 * PI * ELEMENT_SPACING;
    let mut out = Vec::with_capacity(geom.element_count());
    for row in 0..geom.rows {
        for col in 0..geom.cols {
            let phase = k * (col as f64 * u + row as f64 * v);
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    out
}

/// Response of an `n`-element half-wavelength linear array laid along the
/// same axis as the URA columns.
pub fn ula_steering_vector(n: usize, azimuth: f64, zenith: f64) -> Vec<Complex64> {
    steering_vector(
        UraGeometry {
            rows: 1,
            cols: n.max(1),
        },
        azimuth,
        zenith,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn phase_close(z: Complex64, phase: f64) -> bool {
        (z - Complex64::from_polar(1.0, phase)).norm() < 1e-12
    }

    #[test]
    fn broadside_is_all_ones() {
        for geom in [UraGeometry::small(), UraGeometry::new(3, 5).unwrap()] {
            for az in [0.0, 1.0, -2.5] {
                let a = steering_vector(geom, az, 0.0);
                assert_eq!(a.len(), geom.element_count());
                assert!(a
                    .iter()
                    .all(|z| (*z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
            }
        }
    }

    #[test]
    fn endfire_pair_alternates_sign() {
        let a = steering_vector(UraGeometry::new(1, 2).unwrap(), 0.0, FRAC_PI_2);
        assert!(phase_close(a[0], 0.0));
        assert!((a[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_two_by_two_phases() {
        // u = v = 1/sqrt(2): phase of (row, col) is pi (col + row) / sqrt(2)
        let a = steering_vector(UraGeometry::new(2, 2).unwrap(), FRAC_PI_4, FRAC_PI_2);
        let expected = [0.0, PI / SQRT_2, PI / SQRT_2, 2.0 * PI / SQRT_2];
        for (z, p) in a.iter().zip(expected) {
            assert!(phase_close(*z, p), "{z} vs phase {p}");
        }
    }

    #[test]
    fn entries_have_unit_magnitude() {
        let a = steering_vector(UraGeometry::large(), 0.7, 1.9);
        assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn empty_geometry_rejected() {
        assert!(UraGeometry::new(0, 4).is_err());
        assert!(UraGeometry::new(4, 0).is_err());
    }
}
