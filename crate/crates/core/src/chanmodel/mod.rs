//! Clustered-delay-line channel synthesis.
//!
//! A profile is a table of clusters, each with a delay, a power and
//! departure/arrival angles. Each cluster contributes one rank-1 ray with a
//! random phase, so the frequency response of subcarrier `k` is
//!
//! ```text
//! H[k] = sum_c sqrt(p_c) e^{j phi_c} a_rx(aoa_c) a_tx(aod_c)^H e^{-j 2 pi tau_c k df}
//! ```
//!
//! The transmitter is a uniform rectangular array, the receiver a uniform
//! linear array, both at half-wavelength spacing.

mod array;
mod profile;
mod synth;
mod tensor;

pub use array::{steering_vector, ula_steering_vector, UraGeometry, ELEMENT_SPACING};
pub use profile::{CdlCluster, CdlProfile};
pub use synth::{draw_block_fading, synthesize_csi};
pub use tensor::{ChannelTensor, CsiDims};
