use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Linear MMSE equalizer `W = (H^H H + noise_var I)^{-1} H^H`.
pub fn mmse_equalizer(h_eff: &DMatrix<Complex64>, noise_var: f64) -> Result<DMatrix<Complex64>> {
    if h_eff
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::invalid(
            "effective channel",
            "entries must be finite",
        ));
    }
    if !(noise_var.is_finite() && noise_var >= 0.0) {
        return Err(Error::invalid(
            "noise variance",
            "must be finite and non-negative",
        ));
    }
    let hh = h_eff.adjoint();
    let n = h_eff.ncols();
    let mut a = &hh * h_eff;
    for i in 0..n {
        a[(i, i)] += Complex64::new(noise_var, 0.0);
    }
    let w = a
        .lu()
        .solve(&hh)
        .ok_or_else(|| Error::Numerical("MMSE normal matrix is singular".into()))?;
    if w.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical("MMSE equalizer is not finite".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_without_noise() {
        let w = mmse_equalizer(&DMatrix::identity(3, 3), 0.0).unwrap();
        assert!((w - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn zero_forcing_limit() {
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.5),
                Complex64::new(-0.3, 0.2),
                Complex64::new(0.4, -1.1),
                Complex64::new(0.9, 0.0),
            ],
        );
        let w = mmse_equalizer(&h, 1e-12).unwrap();
        let inv = h.clone().try_inverse().unwrap();
        assert!((w - inv).norm() < 1e-6);
    }

    #[test]
    fn singular_without_noise_is_an_error() {
        let h = DMatrix::<Complex64>::zeros(2, 2);
        assert!(mmse_equalizer(&h, 0.0).is_err());
        assert!(mmse_equalizer(&h, 0.1).is_ok());
    }
}
