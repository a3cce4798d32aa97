use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::chanmodel::ChannelTensor;
use crate::error::{Error, Result};
use crate::rng::{complex_normal, rng_from_seed, SimRng};

/// Largest accepted condition number of a random pilot matrix.
pub const MAX_PILOT_CONDITION: f64 = 1e3;
const MAX_PILOT_DRAWS: usize = 64;

/// Pilot matrix `X` (`n_pilot x n_t`) and the received pilots per subcarrier,
/// `Y[k] = X H[k]^T + N` (`n_pilot x n_r`).
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBlock {
    pub x_pilot: DMatrix<Complex64>,
    pub y_pilot: Vec<DMatrix<Complex64>>,
}

fn condition_number(x: &DMatrix<Complex64>) -> f64 {
    let sv = x.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Random QPSK pilots with unit-magnitude entries (column norms squared equal
/// `n_pilot`), redrawn until the condition number is at most
/// [`MAX_PILOT_CONDITION`]. With `orthogonal` the columns are DFT sequences.
pub fn generate_pilots(
    n_pilot: usize,
    n_t: usize,
    seed: u64,
    orthogonal: bool,
) -> Result<DMatrix<Complex64>> {
    if n_t == 0 || n_pilot < n_t {
        return Err(Error::invalid(
            "pilot shape",
            alloc::format!("need n_pilot >= n_t >= 1, got {n_pilot} x {n_t}"),
        ));
    }
    if orthogonal {
        return Ok(DMatrix::from_fn(n_pilot, n_t, |p, t| {
            Complex64::from_polar(1.0, -2.0 * PI * (p * t) as f64 / n_pilot as f64)
        }));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..MAX_PILOT_DRAWS {
        let x = DMatrix::from_fn(n_pilot, n_t, |_, _| {
            let re = if rng.random::<bool>() {
                FRAC_1_SQRT_2
            } else {
                -FRAC_1_SQRT_2
            };
            let im = if rng.random::<bool>() {
                FRAC_1_SQRT_2
            } else {
                -FRAC_1_SQRT_2
            };
            Complex64::new(re, im)
        });
        if condition_number(&x) <= MAX_PILOT_CONDITION {
            return Ok(x);
        }
    }
    Err(Error::Numerical(alloc::format!(
        "no pilot matrix with condition <= {MAX_PILOT_CONDITION} in {MAX_PILOT_DRAWS} draws"
    )))
}

/// Sends `x_pilot` through every subcarrier of `h` and adds white noise of
/// variance `noise_var`.
pub fn transmit_pilots(
    h: &ChannelTensor,
    x_pilot: &DMatrix<Complex64>,
    noise_var: f64,
    rng: &mut SimRng,
) -> Result<PilotBlock> {
    let dims = h.dims();
    if x_pilot.ncols() != dims.n_t {
        return Err(Error::DimensionMismatch {
            what: "pilot columns",
            expected: dims.n_t,
            found: x_pilot.ncols(),
        });
    }
    let y_pilot = (0..dims.n_sc)
        .map(|k| {
            let mut y = x_pilot * h.subcarrier(k).transpose();
            if noise_var > 0.0 {
                for v in y.iter_mut() {
                    *v += complex_normal(rng, noise_var);
                }
            }
            y
        })
        .collect();
    Ok(PilotBlock {
        x_pilot: x_pilot.clone(),
        y_pilot,
    })
}

/// Least-squares channel estimate, `H^T = (X^H X)^{-1} X^H Y` per subcarrier.
pub fn ls_estimate(pb: &PilotBlock) -> Result<ChannelTensor> {
    let x = &pb.x_pilot;
    let n_t = x.ncols();
    let n_sc = pb.y_pilot.len();
    let n_r = pb.y_pilot.first().map(|y| y.ncols()).unwrap_or(0);
    let dims = crate::chanmodel::CsiDims::new(n_sc, n_r, n_t)?;

    let gram = x.adjoint() * x;
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Numerical("pilot Gram matrix X^H X is singular".into()))?;
    let pinv = chol.solve(&x.adjoint());

    let mut h = ChannelTensor::zeros(dims);
    for (k, y) in pb.y_pilot.iter().enumerate() {
        if y.nrows() != x.nrows() || y.ncols() != n_r {
            return Err(Error::DimensionMismatch {
                what: "received pilot block",
                expected: x.nrows() * n_r,
                found: y.nrows() * y.ncols(),
            });
        }
        let ht = &pinv * y;
        h.set_subcarrier(k, &ht.transpose())?;
    }
    if !h.is_finite() {
        return Err(Error::Numerical(
            "least-squares estimate is not finite".into(),
        ));
    }
    Ok(h)
}
