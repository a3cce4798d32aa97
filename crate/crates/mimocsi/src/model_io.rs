//! Binary model files.
//!
//! ```text
//! "CSAE"  magic
//! u8      version (1)
//! u8      compression-ratio index
//! f64     kappa
//! u32 x3  n_sc, n_r, n_t
//! u32     hidden width h
//! u32     latent width D
//! f64 x2  normalization min, max
//! then for each of the five layers: weights (row-major, n_out x n_in), biases
//! ```
//!
//! Integers and floats are little endian. Layer shapes follow from the header.

use std::path::Path;

use mimocsi_core::chanmodel::CsiDims;
use mimocsi_core::codec::{Activation, Autoencoder, Dense, NormStats};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"CSAE";
const VERSION: u8 = 1;

pub fn encode_model(model: &Autoencoder) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + 8 * model.parameter_count());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(model.kappa_index());
    out.extend_from_slice(&model.kappa().to_le_bytes());
    let d = model.dims();
    for v in [d.n_sc, d.n_r, d.n_t, model.hidden_width(), model.latent_width()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&model.norm().min().to_le_bytes());
    out.extend_from_slice(&model.norm().max().to_le_bytes());
    for l in model.layers() {
        for v in l.weights.iter().chain(&l.bias) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        let end = self.at.checked_add(n).ok_or("length overflow")?;
        let s = self.bytes.get(self.at..end).ok_or("truncated file")?;
        self.at = end;
        Ok(s)
    }

    fn u8(&mut self) -> std::result::Result<u8, String> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> std::result::Result<usize, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }

    fn f64(&mut self) -> std::result::Result<f64, String> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize) -> std::result::Result<Vec<f64>, String> {
        let raw = self.take(n.checked_mul(8).ok_or("length overflow")?)?;
        Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

fn decode_inner(bytes: &[u8]) -> std::result::Result<Autoencoder, String> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(4)? != MAGIC {
        return Err("bad magic".into());
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let kappa_index = r.u8()?;
    let kappa = r.f64()?;
    let dims = CsiDims::new(r.u32()?, r.u32()?, r.u32()?).map_err(|e| e.to_string())?;
    let h = r.u32()?;
    let d = r.u32()?;
    let norm = NormStats::new(r.f64()?, r.f64()?).map_err(|e| e.to_string())?;
    let n = 2 * dims.len();
    let shapes = [
        (n, h, Activation::Relu),
        (h, h, Activation::Relu),
        (h, d, Activation::Linear),
        (d, h, Activation::Relu),
        (h, n, Activation::Sigmoid),
    ];
    let mut layers = Vec::with_capacity(5);
    for (n_in, n_out, activation) in shapes {
        let weights = r.f64s(n_in.checked_mul(n_out).ok_or("length overflow")?)?;
        let bias = r.f64s(n_out)?;
        layers.push(Dense {
            n_in,
            n_out,
            weights,
            bias,
            activation,
        });
    }
    if r.at != bytes.len() {
        return Err(format!("{} trailing bytes", bytes.len() - r.at));
    }
    let layers: [Dense; 5] = layers.try_into().unwrap();
    Autoencoder::from_parts(kappa, kappa_index, dims, layers, norm).map_err(|e| e.to_string())
}

pub fn decode_model(bytes: &[u8], origin: &Path) -> Result<Autoencoder> {
    decode_inner(bytes).map_err(|message| Error::ModelFile {
        path: origin.to_path_buf(),
        message,
    })
}

pub fn save_model(model: &Autoencoder, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Autoencoder> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_model(&bytes, path)
}
