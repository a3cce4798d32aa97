//! Gray-mapped square 16-QAM with unit average symbol energy.
//!
//! A nibble `b0 b1 b2 b3` maps to `(I + jQ) / sqrt(10)` where `b0 b1` select
//! the in-phase level and `b2 b3` the quadrature level:
//!
//! | bits | level |
//! |------|-------|
//! | 00   | -3    |
//! | 01   | -1    |
//! | 11   | +1    |
//! | 10   | +3    |
//!
//! so `0000 -> (-3 - 3j)/sqrt(10)`. Detection picks the nearest point; on
//! exact ties the smaller 4-bit label wins, which puts `0 + 0j` on `0101`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub const BITS_PER_SYMBOL: usize = 4;

fn scale() -> f64 {
    1.0 / 10.0.sqrt()
}

fn level(pair: u8) -> f64 {
    match pair & 0b11 {
        0b00 => -3.0,
        0b01 => -1.0,
        0b11 => 1.0,
        _ => 3.0,
    }
}

/// Constellation point for a 4-bit label `b0 b1 b2 b3` (b0 most significant).
pub fn qam16_point(label: u8) -> Complex64 {
    Complex64::new(level(label >> 2), level(label)) * scale()
}

pub fn qam16_modulate(bits: &[u8]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(BITS_PER_SYMBOL) {
        return Err(Error::invalid(
            "16-QAM framing",
            alloc::format!("{} bits is not a multiple of 4", bits.len()),
        ));
    }
    Ok(bits
        .chunks_exact(BITS_PER_SYMBOL)
        .map(|b| {
            let label = (b[0] & 1) << 3 | (b[1] & 1) << 2 | (b[2] & 1) << 1 | (b[3] & 1);
            qam16_point(label)
        })
        .collect())
}

fn slice_axis(x: f64) -> u8 {
    let t = 2.0 * scale();
    if x <= -t {
        0b00
    } else if x <= 0.0 {
        0b01
    } else if x < t {
        0b11
    } else {
        0b10
    }
}

/// Nearest-point label of one symbol.
pub fn qam16_detect_symbol(z: Complex64) -> u8 {
    slice_axis(z.re) << 2 | slice_axis(z.im)
}

/// Hard decisions, 4 bits per symbol.
pub fn qam16_detect(symbols: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(symbols.len() * BITS_PER_SYMBOL);
    for &z in symbols {
        let label = qam16_detect_symbol(z);
        out.extend((0..4).rev().map(|i| (label >> i) & 1));
    }
    out
}
