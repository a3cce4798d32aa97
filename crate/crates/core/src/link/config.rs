#[allow(unused_imports)]
use num_traits::Float;

use super::crc::CrcPoly;
use super::qam::BITS_PER_SYMBOL;
use crate::chanmodel::CsiDims;
use crate::error::{Error, Result};

/// Link-level parameters. `total_power` is the transmit power `P_x` of one
/// OFDM symbol spread over all subcarriers, so each subcarrier gets
/// `total_power / n_sc`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub n_sc: usize,
    pub n_pilot: usize,
    pub delta_f: f64,
    pub crc_poly: CrcPoly,
    pub snr_db: f64,
    pub total_power: f64,
    /// DFT pilot columns instead of random QPSK.
    pub orthogonal_pilots: bool,
}

impl LinkConfig {
    /// 4x4 URA transmitter, 4 receive antennas, 128 subcarriers at 15 kHz,
    /// 64 pilots and the degree-6 CRC.
    pub fn small_ura() -> Self {
        LinkConfig {
            n_t: 16,
            n_r: 4,
            n_sc: 128,
            n_pilot: 64,
            delta_f: 15e3,
            crc_poly: CrcPoly::x6_x4_x_1(),
            snr_db: 30.0,
            total_power: 1.0,
            orthogonal_pilots: false,
        }
    }

    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        LinkConfig {
            snr_db,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        CsiDims::new(self.n_sc, self.n_r, self.n_t)?;
        if self.n_pilot < self.n_t {
            return Err(Error::invalid(
                "link config",
                alloc::format!("n_pilot {} < n_t {}", self.n_pilot, self.n_t),
            ));
        }
        if !(self.delta_f.is_finite() && self.delta_f > 0.0) {
            return Err(Error::invalid("link config", "delta_f must be positive"));
        }
        if !(self.total_power.is_finite() && self.total_power > 0.0) {
            return Err(Error::invalid(
                "link config",
                "total power must be positive",
            ));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::invalid("link config", "SNR must be finite"));
        }
        if self.codeword_len() == 0 {
            return Err(Error::invalid(
                "link config",
                "CRC leaves no room for payload",
            ));
        }
        Ok(())
    }

    pub fn dims(&self) -> CsiDims {
        CsiDims {
            n_sc: self.n_sc,
            n_r: self.n_r,
            n_t: self.n_t,
        }
    }

    pub fn n_streams(&self) -> usize {
        self.n_t.min(self.n_r)
    }

    /// Payload bits per codeword. One codeword fills one stream of one OFDM
    /// symbol: `4 n_sc` coded bits minus the CRC.
    pub fn codeword_len(&self) -> usize {
        (BITS_PER_SYMBOL * self.n_sc).saturating_sub(self.crc_poly.degree())
    }

    /// Transmit power available on one subcarrier.
    pub fn subcarrier_budget(&self) -> f64 {
        self.total_power / self.n_sc as f64
    }

    /// Received power of one resource element, `P_x / (n_t n_sc)`.
    pub fn reference_signal_power(&self) -> f64 {
        self.total_power / (self.n_t * self.n_sc) as f64
    }
}

/// Noise variance per subcarrier and receive antenna,
/// `P_x / (n_sc n_t rho)` with `rho` the linear per-element SNR.
pub fn noise_var_from_snr(cfg: &LinkConfig) -> Result<f64> {
    if !cfg.snr_db.is_finite() {
        return Err(Error::invalid("SNR", "must be finite"));
    }
    noise_var_from_linear_snr(cfg, 10.0.powf(cfg.snr_db / 10.0))
}

pub fn noise_var_from_linear_snr(cfg: &LinkConfig, rho: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::invalid("SNR", "linear SNR must be positive"));
    }
    Ok(cfg.total_power / (cfg.n_sc as f64 * cfg.n_t as f64 * rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_variance_from_snr() {
        let cfg = LinkConfig::small_ura().with_snr_db(0.0);
        assert!((noise_var_from_snr(&cfg).unwrap() - 1.0 / 2048.0).abs() < 1e-18);
        let hi = noise_var_from_snr(&cfg.with_snr_db(10.0)).unwrap();
        assert!((noise_var_from_snr(&cfg).unwrap() / hi - 10.0).abs() < 1e-12);
        assert!((cfg.reference_signal_power() - 1.0 / 2048.0).abs() < 1e-18);
        assert!(noise_var_from_linear_snr(&cfg, 0.0).is_err());
        assert!(noise_var_from_snr(&cfg.with_snr_db(f64::NAN)).is_err());
    }

    #[test]
    fn derived_sizes() {
        let cfg = LinkConfig::small_ura();
        assert_eq!(cfg.n_streams(), 4);
        assert_eq!(cfg.codeword_len(), 506);
        cfg.validate().unwrap();
        let mut bad = cfg.clone();
        bad.n_pilot = 8;
        assert!(bad.validate().is_err());
    }
}
