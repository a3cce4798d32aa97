use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::chain::{run_link_once, BitBlock};
use super::config::{noise_var_from_snr, LinkConfig};
use super::pilots::{generate_pilots, ls_estimate, transmit_pilots};
use crate::chanmodel::{synthesize_csi, CdlProfile, ChannelTensor, UraGeometry};
use crate::codec::{mse_loss, round_trip, training_sample, Autoencoder};
use crate::error::{Error, Result};
use crate::metrics::ErrorCounts;
use crate::rng::{block_seed, derive_seed, rng_from_seed, stream};

/// Error counts and mean reconstruction error of one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointOutcome {
    pub counts: ErrorCounts,
    /// Mean over blocks of the complex MSE between the channel estimate and
    /// the CSI the transmitter designs from. Zero without compression.
    pub recon_mse: f64,
}

/// A user's link over `n_blocks` coherence blocks: channel synthesis, pilot
/// estimation, optional CSI compression and the data chain.
///
/// Randomness is split so that comparisons pair up. The channel and the
/// payload of a block depend only on the user seed. Noise depends on the
/// user seed, the block and the SNR, never on the codec.
#[derive(Debug, Clone)]
pub struct LinkScenario {
    pub profile: CdlProfile,
    pub tx: UraGeometry,
    pub cfg: LinkConfig,
    pub n_blocks: usize,
    /// Payload bits per operating point, spread evenly over the blocks.
    pub payload_bits: usize,
}

impl LinkScenario {
    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if self.tx.element_count() != self.cfg.n_t {
            return Err(Error::DimensionMismatch {
                what: "transmit array",
                expected: self.cfg.n_t,
                found: self.tx.element_count(),
            });
        }
        if self.n_blocks == 0 || self.payload_bits == 0 {
            return Err(Error::invalid(
                "scenario",
                "blocks and payload must be positive",
            ));
        }
        Ok(())
    }

    /// True channel of coherence block `block` for `user_seed`.
    pub fn channel(&self, user_seed: u64, block: usize) -> Result<ChannelTensor> {
        let base = derive_seed(user_seed, stream::CHANNEL, 0);
        synthesize_csi(
            &self.profile,
            self.tx,
            self.cfg.dims(),
            self.cfg.delta_f,
            block_seed(base, block as u64),
        )
    }

    /// Least-squares estimate of `h` from pilots sent at resource-element
    /// power, with noise at `rho_db` drawn from `noise_seed`.
    pub fn estimate(
        &self,
        h: &ChannelTensor,
        rho_db: f64,
        noise_seed: u64,
        pilot_seed: u64,
    ) -> Result<ChannelTensor> {
        let cfg = self.cfg.with_snr_db(rho_db);
        let noise_var = noise_var_from_snr(&cfg)?;
        let amp = cfg.reference_signal_power().sqrt();
        let x = generate_pilots(cfg.n_pilot, cfg.n_t, pilot_seed, cfg.orthogonal_pilots)?
            * Complex64::new(amp, 0.0);
        let mut rng = rng_from_seed(noise_seed);
        ls_estimate(&transmit_pilots(h, &x, noise_var, &mut rng)?)
    }

    fn noise_seed(user_seed: u64, rho_db: f64, block: usize, which: u64) -> u64 {
        let per_rho = derive_seed(user_seed, stream::NOISE, rho_db.to_bits());
        derive_seed(per_rho, block as u64, which)
    }

    /// Estimated CSI of block `block`, as the receiver would feed it back.
    pub fn estimated_channel(
        &self,
        user_seed: u64,
        block: usize,
        rho_db: f64,
    ) -> Result<(ChannelTensor, ChannelTensor)> {
        let h = self.channel(user_seed, block)?;
        let h_hat = self.estimate(
            &h,
            rho_db,
            Self::noise_seed(user_seed, rho_db, block, 0),
            derive_seed(user_seed, stream::PILOT, 0),
        )?;
        Ok((h, h_hat))
    }

    fn bits_per_block(&self) -> usize {
        self.payload_bits.div_ceil(self.n_blocks)
    }

    /// Runs every block at `rho_db`. With `codec`, the transmitter designs
    /// from the decompressed estimate (`bits` per latent element);
    /// otherwise from the estimate itself.
    pub fn evaluate(
        &self,
        codec: Option<&Autoencoder>,
        bits: u8,
        rho_db: f64,
        user_seed: u64,
    ) -> Result<PointOutcome> {
        self.validate()?;
        let cfg = self.cfg.with_snr_db(rho_db);
        let mut out = PointOutcome::default();
        for block in 0..self.n_blocks {
            let (h, h_hat) = self.estimated_channel(user_seed, block, rho_db)?;
            let h_recon = match codec {
                Some(model) => {
                    let r = round_trip(model, &h_hat, bits)?;
                    out.recon_mse += mse_loss(h_hat.as_slice(), r.as_slice())?;
                    r
                }
                None => h_hat,
            };
            let mut rng = rng_from_seed(derive_seed(user_seed, stream::PAYLOAD, block as u64));
            let payload = BitBlock::random(
                self.bits_per_block(),
                cfg.codeword_len(),
                cfg.n_streams(),
                &mut rng,
            )?;
            let link = run_link_once(
                &payload,
                &h,
                &h_recon,
                &cfg,
                Self::noise_seed(user_seed, rho_db, block, 1),
            )?;
            out.counts = out.counts + link.counts;
        }
        out.recon_mse /= self.n_blocks as f64;
        Ok(out)
    }

    /// Realified channel estimates for codec training, one per entry of
    /// `slots`. Each slot index selects an independent channel; sample `i`
    /// is estimated at `rhos[i % rhos.len()]`.
    pub fn training_set(&self, slots: &[u64], seed: u64, rhos: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        if rhos.is_empty() {
            return Err(Error::invalid("training SNR grid", "must not be empty"));
        }
        let pilot_seed = derive_seed(seed, stream::PILOT, 0);
        slots
            .iter()
            .enumerate()
            .map(|(i, &slot)| {
                let chan_seed = derive_seed(seed, stream::TRAIN, slot);
                let h = synthesize_csi(&self.profile, self.tx, self.cfg.dims(), self.cfg.delta_f, chan_seed)?;
                let noise = derive_seed(seed, stream::NOISE, slot);
                let h_hat = self.estimate(&h, rhos[i % rhos.len()], noise, pilot_seed)?;
                Ok(training_sample(&h_hat))
            })
            .collect()
    }
}
