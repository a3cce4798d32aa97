//! Error-rate bookkeeping.

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Bit and block error tallies. Mergeable, so parallel trials can be reduced
/// in any grouping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ErrorCounts {
    pub bit_errors: u64,
    pub bits_total: u64,
    pub block_errors: u64,
    pub blocks_total: u64,
}

impl ErrorCounts {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits_total)
    }

    pub fn bler(&self) -> f64 {
        ratio(self.block_errors, self.blocks_total)
    }

    pub fn ber_stderr(&self) -> f64 {
        std_error(self.ber(), self.bits_total)
    }

    pub fn bler_stderr(&self) -> f64 {
        std_error(self.bler(), self.blocks_total)
    }

    pub fn is_consistent(&self) -> bool {
        self.bit_errors <= self.bits_total && self.block_errors <= self.blocks_total
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Fieldwise sum.
pub fn merge(a: ErrorCounts, b: ErrorCounts) -> ErrorCounts {
    ErrorCounts {
        bit_errors: a.bit_errors + b.bit_errors,
        bits_total: a.bits_total + b.bits_total,
        block_errors: a.block_errors + b.block_errors,
        blocks_total: a.blocks_total + b.blocks_total,
    }
}

impl core::ops::Add for ErrorCounts {
    type Output = ErrorCounts;

    fn add(self, rhs: ErrorCounts) -> ErrorCounts {
        merge(self, rhs)
    }
}

impl core::iter::Sum for ErrorCounts {
    fn sum<I: Iterator<Item = ErrorCounts>>(iter: I) -> Self {
        iter.fold(ErrorCounts::default(), merge)
    }
}

/// Binomial standard error `sqrt(p (1 - p) / n)`.
pub fn std_error(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Bit error rate over equal-length transmissions.
pub fn ber<T: AsRef<[u8]>>(tx: &[T], rx: &[T]) -> Result<f64> {
    Ok(count_bit_errors(tx, rx)?.ber())
}

pub fn count_bit_errors<T: AsRef<[u8]>>(tx: &[T], rx: &[T]) -> Result<ErrorCounts> {
    if tx.is_empty() {
        return Err(Error::invalid("BER input", "no transmissions"));
    }
    if tx.len() != rx.len() {
        return Err(Error::DimensionMismatch {
            what: "transmission count",
            expected: tx.len(),
            found: rx.len(),
        });
    }
    let width = tx[0].as_ref().len();
    let mut counts = ErrorCounts::default();
    for (a, b) in tx.iter().zip(rx) {
        let (a, b) = (a.as_ref(), b.as_ref());
        if a.len() != width || b.len() != width {
            return Err(Error::DimensionMismatch {
                what: "codeword length",
                expected: width,
                found: if a.len() != width { a.len() } else { b.len() },
            });
        }
        counts.bit_errors += a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
        counts.bits_total += width as u64;
    }
    Ok(counts)
}

/// Block error rate from per-transmission CRC pass flags.
pub fn bler(crc_ok: &[bool]) -> Result<f64> {
    if crc_ok.is_empty() {
        return Err(Error::invalid("BLER input", "no transmissions"));
    }
    Ok(crc_ok.iter().filter(|ok| !**ok).count() as f64 / crc_ok.len() as f64)
}

/// Divides each duration by the largest one. All-zero input maps to ones.
pub fn normalize_durations(durations: &[f64]) -> alloc::vec::Vec<f64> {
    let max = durations.iter().cloned().fold(0.0, f64::max);
    durations
        .iter()
        .map(|d| if max > 0.0 { d / max } else { 1.0 })
        .collect()
}

/// Coefficient of variation (population standard deviation over the mean).
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if mean == 0.0 {
        0.0
    } else {
        var.sqrt() / mean.abs()
    }
}
