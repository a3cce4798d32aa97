//! The OFDM MIMO link: CRC framing, 16-QAM, pilot-based least-squares
//! estimation, SVD precoding with waterfilling, MMSE equalization and
//! hard-decision detection.

mod chain;
mod config;
mod crc;
mod equalizer;
mod pilots;
mod precoding;
mod qam;
mod scenario;

pub use chain::{run_link_once, BitBlock, LinkOutcome};
pub use config::{noise_var_from_linear_snr, noise_var_from_snr, LinkConfig};
pub use crc::{crc_append, crc_bits, crc_check, CrcPoly};
pub use equalizer::mmse_equalizer;
pub use pilots::{generate_pilots, ls_estimate, transmit_pilots, PilotBlock, MAX_PILOT_CONDITION};
pub use precoding::{
    precode_matrix, sorted_svd, svd_precoder, waterfill, PrecodeSet, SubcarrierPrecoder,
};
pub use qam::{qam16_detect, qam16_detect_symbol, qam16_modulate, qam16_point, BITS_PER_SYMBOL};
pub use scenario::{LinkScenario, PointOutcome};
