//! Autoencoder CSI codec: complex-to-real transforms, min-max scaling, the
//! dense encoder and decoder, Adam training, latent quantization and the
//! compressed-CSI wire format.

mod adam;
mod backprop;
mod model;
mod norm;
mod quant;
mod train;
mod transform;
mod wire;

pub use adam::{adam_step, AdamConfig, AdamState, ModelAdam};
pub use backprop::{backprop, batch_loss, mse_loss, mse_loss_real, Gradients, LayerGrad};
pub use model::{latent_dim, layer, Activation, Autoencoder, Dense, HIDDEN_WIDTH};
pub use norm::NormStats;
pub use quant::{is_stable, quantize, quantize_f32, quantize_value};
pub use train::{train, Clock, NullClock, TrainConfig, TrainHistory};
pub use transform::{complexify, devectorize_csi, realify, vectorize_csi};
pub use wire::{
    ceil_log2, compress, decompress, deserialize, model_input, overhead_bits, serialize, LatentCsi,
    HEADER_LEN, MAGIC, VERSION,
};

use crate::chanmodel::ChannelTensor;
use crate::error::Result;

/// Realified, vectorized sample for [`train`].
pub fn training_sample(h: &ChannelTensor) -> alloc::vec::Vec<f64> {
    realify(&vectorize_csi(h))
}

/// `decompress(compress(h))`, the reconstruction seen by the transmitter.
pub fn round_trip(model: &Autoencoder, h: &ChannelTensor, bits: u8) -> Result<ChannelTensor> {
    decompress(model, &compress(model, h, bits)?)
}
