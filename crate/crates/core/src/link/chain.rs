use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::config::{noise_var_from_snr, LinkConfig};
use super::crc::{crc_append, crc_check};
use super::equalizer::mmse_equalizer;
use super::precoding::svd_precoder;
use super::qam::{qam16_detect, qam16_modulate};
use crate::chanmodel::ChannelTensor;
use crate::error::{Error, Result};
use crate::metrics::ErrorCounts;
use crate::rng::{complex_normal, SimRng};

/// Payload bits cut into codewords of `codeword_len` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitBlock {
    bits: Vec<u8>,
    codeword_len: usize,
}

impl BitBlock {
    pub fn new(bits: Vec<u8>, codeword_len: usize) -> Result<Self> {
        if codeword_len == 0 || !bits.len().is_multiple_of(codeword_len) {
            return Err(Error::invalid(
                "bit block",
                alloc::format!(
                    "{} bits do not divide into codewords of {codeword_len}",
                    bits.len()
                ),
            ));
        }
        if bits.iter().any(|b| *b > 1) {
            return Err(Error::invalid("bit block", "bits must be 0 or 1"));
        }
        Ok(BitBlock { bits, codeword_len })
    }

    /// Zero-pads `bits` so the codeword count is a positive multiple of
    /// `group` (the number of streams).
    pub fn padded(mut bits: Vec<u8>, codeword_len: usize, group: usize) -> Result<Self> {
        let unit = codeword_len * group.max(1);
        if unit == 0 {
            return Err(Error::invalid(
                "bit block",
                "codeword length must be positive",
            ));
        }
        let target = bits.len().div_ceil(unit).max(1) * unit;
        bits.resize(target, 0);
        BitBlock::new(bits, codeword_len)
    }

    /// `n_bits` uniform random payload bits, padded as in [`BitBlock::padded`].
    pub fn random(
        n_bits: usize,
        codeword_len: usize,
        group: usize,
        rng: &mut SimRng,
    ) -> Result<Self> {
        let bits = (0..n_bits)
            .map(|_| u8::from(rng.random::<bool>()))
            .collect();
        BitBlock::padded(bits, codeword_len, group)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn codeword_len(&self) -> usize {
        self.codeword_len
    }

    pub fn n_codewords(&self) -> usize {
        self.bits.len() / self.codeword_len
    }

    pub fn codewords(&self) -> core::slice::ChunksExact<'_, u8> {
        self.bits.chunks_exact(self.codeword_len)
    }
}

/// Result of pushing one payload through the link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkOutcome {
    pub received: BitBlock,
    /// One flag per codeword, true when the CRC matched.
    pub crc_ok: Vec<bool>,
    pub counts: ErrorCounts,
}

/// Per-subcarrier receive-side operators after precoding, combining and
/// equalization: `z = A s + B n`, then `z_i / gain_i`.
struct SubcarrierLink {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    gain: Vec<f64>,
}

const MIN_STREAM_GAIN: f64 = 1e-12;

/// Runs `payload` over `h_true` with precoder, combiner and equalizer
/// designed from `h_recon`.
///
/// Each OFDM symbol carries one codeword per stream: codeword
/// `o * n_s + i` goes on stream `i` of OFDM symbol `o`, one 16-QAM symbol per
/// subcarrier. Noise is drawn from `seed` in (symbol, subcarrier, antenna)
/// order.
pub fn run_link_once(
    payload: &BitBlock,
    h_true: &ChannelTensor,
    h_recon: &ChannelTensor,
    cfg: &LinkConfig,
    seed: u64,
) -> Result<LinkOutcome> {
    cfg.validate()?;
    let dims = cfg.dims();
    for (what, h) in [("true channel", h_true), ("reconstructed channel", h_recon)] {
        if h.dims() != dims {
            return Err(Error::DimensionMismatch {
                what,
                expected: dims.len(),
                found: h.dims().len(),
            });
        }
    }
    let n_s = cfg.n_streams();
    let l_cw = cfg.codeword_len();
    if payload.codeword_len() != l_cw {
        return Err(Error::DimensionMismatch {
            what: "codeword length",
            expected: l_cw,
            found: payload.codeword_len(),
        });
    }
    let n_cw = payload.n_codewords();
    if n_cw == 0 || !n_cw.is_multiple_of(n_s) {
        return Err(Error::invalid(
            "payload",
            alloc::format!("{n_cw} codewords do not fill whole OFDM symbols of {n_s} streams"),
        ));
    }

    let noise_var = noise_var_from_snr(cfg)?;
    let precoders = svd_precoder(h_recon, noise_var, cfg.subcarrier_budget())?;
    let links = precoders
        .subcarriers
        .iter()
        .enumerate()
        .map(|(k, pc)| {
            let gh = pc.g.adjoint();
            let h_eff = &gh * h_recon.subcarrier(k) * &pc.f;
            let w = mmse_equalizer(&h_eff, noise_var)?;
            let wh = &w * &h_eff;
            let a = &w * &gh * h_true.subcarrier(k) * &pc.f;
            let b = &w * &gh;
            Ok(SubcarrierLink {
                a: row_major(&a),
                b: row_major(&b),
                gain: (0..n_s).map(|i| wh[(i, i)].re).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let tx_symbols = payload
        .codewords()
        .map(|cw| qam16_modulate(&crc_append(cw, &cfg.crc_poly)?))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = crate::rng::rng_from_seed(seed);
    let mut rx_symbols = vec![vec![Complex64::new(0.0, 0.0); cfg.n_sc]; n_cw];
    let mut s = vec![Complex64::new(0.0, 0.0); n_s];
    let mut n = vec![Complex64::new(0.0, 0.0); cfg.n_r];
    for o in 0..n_cw / n_s {
        for (k, link) in links.iter().enumerate() {
            for (i, si) in s.iter_mut().enumerate() {
                *si = tx_symbols[o * n_s + i][k];
            }
            for ni in n.iter_mut() {
                *ni = complex_normal(&mut rng, noise_var);
            }
            for i in 0..n_s {
                let mut z = Complex64::new(0.0, 0.0);
                for (j, sj) in s.iter().enumerate() {
                    z += link.a[i * n_s + j] * sj;
                }
                for (r, nr) in n.iter().enumerate() {
                    z += link.b[i * cfg.n_r + r] * nr;
                }
                let g = link.gain[i];
                rx_symbols[o * n_s + i][k] = if g > MIN_STREAM_GAIN {
                    z / g
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
    }

    let mut rx_bits = Vec::with_capacity(payload.bits().len());
    let mut crc_ok = Vec::with_capacity(n_cw);
    let mut counts = ErrorCounts::default();
    for (cw, symbols) in payload.codewords().zip(&rx_symbols) {
        let coded = qam16_detect(symbols);
        let ok = crc_check(&coded, &cfg.crc_poly);
        let errors = cw
            .iter()
            .zip(&coded[..l_cw])
            .filter(|(a, b)| a != b)
            .count();
        counts.bit_errors += errors as u64;
        counts.bits_total += l_cw as u64;
        counts.blocks_total += 1;
        counts.block_errors += u64::from(!ok);
        crc_ok.push(ok);
        rx_bits.extend_from_slice(&coded[..l_cw]);
    }
    Ok(LinkOutcome {
        received: BitBlock::new(rx_bits, l_cw)?,
        crc_ok,
        counts,
    })
}

fn row_major(m: &nalgebra::DMatrix<Complex64>) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}
