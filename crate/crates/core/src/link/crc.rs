//! Bitwise CRC over arbitrary generator polynomials (degree <= 63).
//!
//! Bits are `u8` values 0/1, first bit = highest-order coefficient.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Generator polynomial, stored MSB first with a leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrcPoly {
    degree: u32,
    /// Coefficients below the leading term, as a `degree`-bit integer.
    low: u64,
}

impl CrcPoly {
    /// `x^6 + x^4 + x + 1`.
    pub fn x6_x4_x_1() -> Self {
        "1010011".parse().expect("valid literal")
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() < 2 {
            return Err(Error::invalid(
                "CRC polynomial",
                "degree must be at least 1",
            ));
        }
        if bits.len() > 64 {
            return Err(Error::invalid(
                "CRC polynomial",
                "degree above 63 is not supported",
            ));
        }
        if bits[0] != 1 {
            return Err(Error::invalid(
                "CRC polynomial",
                "leading coefficient must be 1",
            ));
        }
        let mut low = 0u64;
        for &b in &bits[1..] {
            if b > 1 {
                return Err(Error::invalid(
                    "CRC polynomial",
                    "coefficients must be 0 or 1",
                ));
            }
            low = (low << 1) | u64::from(b);
        }
        Ok(CrcPoly {
            degree: (bits.len() - 1) as u32,
            low,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Coefficients MSB first, including the leading 1.
    pub fn bits(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.degree() + 1);
        out.push(1);
        for i in (0..self.degree).rev() {
            out.push(((self.low >> i) & 1) as u8);
        }
        out
    }

    fn mask(&self) -> u64 {
        if self.degree == 64 {
            u64::MAX
        } else {
            (1u64 << self.degree) - 1
        }
    }

    /// Remainder of the polynomial whose coefficients are `bits` (MSB first).
    fn remainder<I: IntoIterator<Item = u8>>(&self, bits: I) -> u64 {
        let top_shift = self.degree - 1;
        let mask = self.mask();
        let mut reg = 0u64;
        for b in bits {
            let top = (reg >> top_shift) & 1;
            reg = ((reg << 1) | u64::from(b & 1)) & mask;
            if top == 1 {
                reg ^= self.low;
            }
        }
        reg
    }
}

impl FromStr for CrcPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::invalid("CRC polynomial", "expected a string of 0/1")),
            })
            .collect::<Result<Vec<u8>>>()?;
        CrcPoly::from_bits(&bits)
    }
}

impl fmt::Display for CrcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// CRC bits of `message`: the remainder of `message(x) * x^degree` modulo
/// `poly`, MSB first.
pub fn crc_bits(message: &[u8], poly: &CrcPoly) -> Vec<u8> {
    let zeros = core::iter::repeat_n(0u8, poly.degree());
    let rem = poly.remainder(message.iter().copied().chain(zeros));
    (0..poly.degree())
        .rev()
        .map(|i| ((rem >> i) & 1) as u8)
        .collect()
}

/// `message` followed by its CRC bits.
pub fn crc_append(message: &[u8], poly: &CrcPoly) -> Result<Vec<u8>> {
    if message.is_empty() {
        return Err(Error::invalid("CRC message", "message is empty"));
    }
    let mut out = Vec::with_capacity(message.len() + poly.degree());
    out.extend_from_slice(message);
    out.extend(crc_bits(message, poly));
    Ok(out)
}

/// True iff the received block is divisible by `poly`.
pub fn crc_check(block: &[u8], poly: &CrcPoly) -> bool {
    if block.len() < poly.degree() {
        return false;
    }
    poly.remainder(block.iter().copied()) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_message_has_zero_crc() {
        let p = CrcPoly::x6_x4_x_1();
        assert_eq!(crc_bits(&[0; 20], &p), vec![0; 6]);
    }

    #[test]
    fn parse_round_trip() {
        let p = CrcPoly::x6_x4_x_1();
        assert_eq!(p.degree(), 6);
        assert_eq!(alloc::format!("{p}"), "1010011");
        assert!("0101".parse::<CrcPoly>().is_err());
        assert!("1".parse::<CrcPoly>().is_err());
        assert!("10a1".parse::<CrcPoly>().is_err());
    }

    #[test]
    fn single_bit_flip_detected() {
        let p = CrcPoly::x6_x4_x_1();
        let msg = [1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0];
        let block = crc_append(&msg, &p).unwrap();
        assert!(crc_check(&block, &p));
        for i in 0..block.len() {
            let mut bad = block.clone();
            bad[i] ^= 1;
            assert!(!crc_check(&bad, &p), "flip at {i} undetected");
        }
    }

    #[test]
    fn empty_message_rejected() {
        assert!(crc_append(&[], &CrcPoly::x6_x4_x_1()).is_err());
        assert!(!crc_check(&[0, 1], &CrcPoly::x6_x4_x_1()));
    }
}
