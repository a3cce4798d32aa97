//! Truncation of latent values to six decimal places.
//!
//! A value `x` maps to `sign(x) * k / 1e6` with `k = floor(|x| * 1e6)`. The
//! integer `k` is corrected against the exact decimal grid so the map is
//! idempotent in floating point, where `|x| * 1e6` may land just below an
//! integer that `|x|` already represents.
//!
//! The 32-bit variant returns the `f32` nearest to the grid point from
//! above in magnitude. That choice is itself a fixed point: truncating it
//! recovers the same `k`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

const SCALE: f64 = 1e6;

fn grid_index(a: f64) -> f64 {
    let mut k = (a * SCALE).floor();
    while (k + 1.0) / SCALE <= a {
        k += 1.0;
    }
    while k > 0.0 && k / SCALE > a {
        k -= 1.0;
    }
    k
}

/// Truncates `x` toward zero at the sixth decimal.
pub fn quantize_value(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let k = grid_index(x.abs());
    let q = k / SCALE;
    if x < 0.0 {
        -q
    } else {
        q
    }
}

pub fn quantize(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| quantize_value(x)).collect()
}

/// Truncation at the sixth decimal, represented as an `f32`.
///
/// Returns the smallest-magnitude `f32` whose value is at least `k / 1e6`.
pub fn quantize_f32(x: f64) -> f32 {
    if !x.is_finite() || x == 0.0 {
        return x as f32;
    }
    let a = x.abs();
    let k = grid_index(a);
    let target = k / SCALE;
    let mut y = target as f32;
    while (y as f64) < target {
        y = y.next_up();
    }
    while y > 0.0 && y.next_down() as f64 >= target {
        y = y.next_down();
    }
    if x < 0.0 {
        -y
    } else {
        y
    }
}

/// Whether `v` is unchanged by quantization at `bits` per element.
pub fn is_stable(v: f64, bits: u8) -> bool {
    match bits {
        32 => (v as f32) as f64 == v && quantize_f32(v) as f64 == v,
        _ => quantize_value(v) == v,
    }
}
