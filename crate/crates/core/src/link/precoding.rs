use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::chanmodel::ChannelTensor;
use crate::error::{Error, Result};

const BISECTION_STEPS: usize = 200;

/// Waterfilling over eigenmodes with gains `sigma_i`:
/// `p_i = max(0, mu - noise_var / sigma_i^2)` with the water level `mu`
/// chosen by bisection so that the powers sum to `budget`.
pub fn waterfill(gains: &[f64], noise_var: f64, budget: f64) -> Result<Vec<f64>> {
    if !(budget.is_finite() && budget > 0.0) {
        return Err(Error::invalid("waterfilling budget", "must be positive"));
    }
    if !(noise_var.is_finite() && noise_var >= 0.0) {
        return Err(Error::invalid(
            "waterfilling noise",
            "must be finite and non-negative",
        ));
    }
    if gains.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Err(Error::invalid(
            "waterfilling gains",
            "must be finite and non-negative",
        ));
    }
    // noise floor of each mode; zero-gain modes never fill
    let floors: Vec<f64> = gains
        .iter()
        .map(|&g| {
            if g > 0.0 {
                noise_var / (g * g)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let highest = floors
        .iter()
        .cloned()
        .filter(|f| f.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if highest == f64::NEG_INFINITY {
        return Err(Error::Numerical("no eigenmode with positive gain".into()));
    }

    let filled = |mu: f64| -> f64 { floors.iter().map(|f| (mu - f).max(0.0)).sum() };
    let mut lo = 0.0;
    let mut hi = highest + budget;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if filled(mid) < budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = if (filled(lo) - budget).abs() <= (filled(hi) - budget).abs() {
        lo
    } else {
        hi
    };
    Ok(floors.iter().map(|f| (mu - f).max(0.0)).collect())
}

/// Precoder, combiner and power loading of one subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcarrierPrecoder {
    /// `n_t x n_s`: right singular vectors scaled by `sqrt(powers)`.
    pub f: DMatrix<Complex64>,
    /// `n_r x n_s`: left singular vectors.
    pub g: DMatrix<Complex64>,
    /// Singular values in descending order.
    pub sigma: Vec<f64>,
    pub powers: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecodeSet {
    pub subcarriers: Vec<SubcarrierPrecoder>,
}

/// Per-subcarrier SVD precoding with waterfilling.
///
/// Phase convention: for each mode the largest-magnitude entry of the left
/// singular vector is made real and positive, and the right vector is
/// rotated by the same phase so `u_i sigma_i v_i^H` is unchanged.
pub fn svd_precoder(h: &ChannelTensor, noise_var: f64, budget: f64) -> Result<PrecodeSet> {
    if !h.is_finite() {
        return Err(Error::invalid("channel", "entries must be finite"));
    }
    let dims = h.dims();
    let subcarriers = (0..dims.n_sc)
        .map(|k| precode_matrix(&h.subcarrier(k), noise_var, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrecodeSet { subcarriers })
}

pub fn precode_matrix(
    hk: &DMatrix<Complex64>,
    noise_var: f64,
    budget: f64,
) -> Result<SubcarrierPrecoder> {
    let (u, sigma, v) = sorted_svd(hk)?;
    let n_s = sigma.len();
    let powers = match waterfill(&sigma, noise_var, budget) {
        Ok(p) => p,
        // all-zero channel: nothing to load
        Err(Error::Numerical(_)) => alloc::vec![0.0; n_s],
        Err(e) => return Err(e),
    };
    let mut f = v;
    for (j, p) in powers.iter().enumerate() {
        let s = p.sqrt();
        for i in 0..f.nrows() {
            f[(i, j)] *= s;
        }
    }
    Ok(SubcarrierPrecoder {
        f,
        g: u,
        sigma,
        powers,
    })
}

/// Thin SVD `H = U diag(sigma) V^H` with descending singular values and the
/// phase convention of [`svd_precoder`].
pub fn sorted_svd(
    hk: &DMatrix<Complex64>,
) -> Result<(DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>)> {
    let svd = nalgebra::linalg::SVD::try_new(hk.clone(), true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("SVD vectors missing".into())),
    };
    let v = v_t.adjoint();
    let sv = svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));

    let mut u_out = DMatrix::zeros(u.nrows(), order.len());
    let mut v_out = DMatrix::zeros(v.nrows(), order.len());
    let mut sigma = Vec::with_capacity(order.len());
    for (j, &src) in order.iter().enumerate() {
        let mut best = 0;
        let mut best_mag = -1.0;
        for i in 0..u.nrows() {
            let m = u[(i, src)].norm();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        let rot = if best_mag > 0.0 {
            let a = u[(best, src)];
            (a / a.norm()).conj()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..u.nrows() {
            u_out[(i, j)] = u[(i, src)] * rot;
        }
        for i in 0..v.nrows() {
            v_out[(i, j)] = v[(i, src)] * rot;
        }
        sigma.push(sv[src]);
    }
    Ok((u_out, sigma, v_out))
}
