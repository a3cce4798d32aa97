//! Compressed-CSI messages and their byte layout.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "CSIC"
//! 4       1     version (1)
//! 5       1     compression-ratio index
//! 6       1     bits per element b (32 or 64)
//! 7       4     n_sc   (u32, little endian)
//! 11      4     n_r    (u32, little endian)
//! 15      4     n_t    (u32, little endian)
//! 19      4     D      (u32, little endian)
//! 23      bD/8  latent values, IEEE-754 little endian
//! ```

use alloc::vec::Vec;

use super::model::{latent_dim, Autoencoder};
use super::quant::{is_stable, quantize_f32, quantize_value};
use super::transform::{complexify, devectorize_csi, realify, vectorize_csi};
use crate::chanmodel::{ChannelTensor, CsiDims};
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"CSIC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 23;

/// A quantized latent vector with the metadata needed to decode it.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentCsi {
    values: Vec<f64>,
    kappa_index: u8,
    bits: u8,
    dims: CsiDims,
}

impl LatentCsi {
    pub fn new(values: Vec<f64>, kappa_index: u8, bits: u8, dims: CsiDims) -> Result<Self> {
        if bits != 32 && bits != 64 {
            return Err(Error::invalid(
                "bits per element",
                alloc::format!("{bits} is not 32 or 64"),
            ));
        }
        let unit = 2 * dims.n_r * dims.n_t;
        let d = values.len();
        if d == 0 || !d.is_multiple_of(unit) || d > 2 * dims.len() {
            return Err(Error::invalid(
                "latent length",
                alloc::format!(
                    "{d} is not a positive multiple of {unit} up to {}",
                    2 * dims.len()
                ),
            ));
        }
        if let Some(v) = values.iter().find(|&&v| !is_stable(v, bits)) {
            return Err(Error::invalid(
                "latent value",
                alloc::format!("{v} is not quantized"),
            ));
        }
        Ok(LatentCsi {
            values,
            kappa_index,
            bits,
            dims,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kappa_index(&self) -> u8 {
        self.kappa_index
    }

    pub fn bits_per_element(&self) -> u8 {
        self.bits
    }

    pub fn dims(&self) -> CsiDims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn payload_bits(&self) -> usize {
        self.bits as usize * self.values.len()
    }
}

/// `b D + ceil(log2 k)`: latent payload plus the index of the selected ratio.
pub fn overhead_bits(b: u64, d_real: u64, k_count: u64) -> u64 {
    b * d_real + ceil_log2(k_count)
}

pub fn ceil_log2(k: u64) -> u64 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros() as u64
    }
}

fn dim_u32(v: usize) -> Result<[u8; 4]> {
    u32::try_from(v)
        .map(u32::to_le_bytes)
        .map_err(|_| Error::Format(alloc::format!("dimension {v} exceeds 32 bits")))
}

pub fn serialize(l: &LatentCsi) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(HEADER_LEN + l.payload_bits() / 8);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(l.kappa_index);
    out.push(l.bits);
    for v in [l.dims.n_sc, l.dims.n_r, l.dims.n_t, l.values.len()] {
        out.extend_from_slice(&dim_u32(v)?);
    }
    for &v in &l.values {
        if l.bits == 32 {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        } else {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

fn read_u32(bytes: &[u8], at: usize) -> usize {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]]) as usize
}

pub fn deserialize(bytes: &[u8]) -> Result<LatentCsi> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(alloc::format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Format(alloc::format!(
            "unsupported version {}",
            bytes[4]
        )));
    }
    let kappa_index = bytes[5];
    let bits = bytes[6];
    if bits != 32 && bits != 64 {
        return Err(Error::Format(alloc::format!(
            "unsupported element width {bits}"
        )));
    }
    let dims = CsiDims::new(read_u32(bytes, 7), read_u32(bytes, 11), read_u32(bytes, 15))
        .map_err(|_| Error::Format("zero dimension".into()))?;
    let d = read_u32(bytes, 19);
    let width = bits as usize / 8;
    let expected = d
        .checked_mul(width)
        .and_then(|p| p.checked_add(HEADER_LEN))
        .ok_or_else(|| Error::Format("length overflow".into()))?;
    if bytes.len() != expected {
        return Err(Error::Format(alloc::format!(
            "expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes[HEADER_LEN..]
        .chunks_exact(width)
        .map(|c| {
            if width == 4 {
                f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64
            } else {
                f64::from_le_bytes([c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]])
            }
        })
        .collect();
    LatentCsi::new(values, kappa_index, bits, dims)
        .map_err(|e| Error::Format(alloc::format!("{e}")))
}

fn check_dims(model: &Autoencoder, dims: CsiDims) -> Result<()> {
    if model.dims() != dims {
        return Err(Error::invalid(
            "channel dimensions",
            alloc::format!("model expects {:?}, got {:?}", model.dims(), dims),
        ));
    }
    Ok(())
}

/// Realified, vectorized and normalized model input for `h`.
pub fn model_input(model: &Autoencoder, h: &ChannelTensor) -> Result<Vec<f64>> {
    check_dims(model, h.dims())?;
    Ok(model.norm().normalize(&realify(&vectorize_csi(h))))
}

/// Encodes `h` and quantizes the latent to `bits` per element.
pub fn compress(model: &Autoencoder, h: &ChannelTensor, bits: u8) -> Result<LatentCsi> {
    let z = model.encode(&model_input(model, h)?)?;
    let q = match bits {
        32 => z.iter().map(|&v| quantize_f32(v) as f64).collect(),
        64 => z.iter().map(|&v| quantize_value(v)).collect(),
        _ => {
            return Err(Error::invalid(
                "bits per element",
                alloc::format!("{bits} is not 32 or 64"),
            ))
        }
    };
    LatentCsi::new(q, model.kappa_index(), bits, h.dims())
}

pub fn decompress(model: &Autoencoder, latent: &LatentCsi) -> Result<ChannelTensor> {
    if latent.kappa_index() != model.kappa_index() {
        return Err(Error::invalid(
            "compression ratio index",
            alloc::format!(
                "message has {}, model has {}",
                latent.kappa_index(),
                model.kappa_index()
            ),
        ));
    }
    check_dims(model, latent.dims())?;
    let expected = latent_dim(
        model.kappa(),
        latent.dims().n_sc,
        latent.dims().n_r,
        latent.dims().n_t,
    )?;
    if latent.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "latent",
            expected,
            found: latent.len(),
        });
    }
    let y = model.decode(latent.values())?;
    let v = complexify(&model.norm().denormalize(&y))?;
    devectorize_csi(model.dims(), v)
}
