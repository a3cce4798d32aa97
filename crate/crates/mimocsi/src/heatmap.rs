use std::io::Write;
use std::path::Path;

use mimocsi_core::codec::{compress, decompress};

use crate::error::{Error, Result};
use crate::experiment::{ensure_dir, Experiment};

/// Magnitude grids of one channel estimate, its latent and its
/// reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmaps {
    /// `n_sc x n_t` magnitudes of the estimate at receive antenna 0.
    pub original: Vec<Vec<f64>>,
    /// Latent values, `D / n_t` rows of `n_t`.
    pub latent: Vec<Vec<f64>>,
    /// Reconstruction, laid out like `original`.
    pub reconstructed: Vec<Vec<f64>>,
}

/// Heatmaps for evaluation user `user` of profile `p` at `rho_db`, through
/// the codec for ratio `kappa` (which must be in the configuration).
pub fn emit_csi_heatmap(exp: &Experiment, p: usize, kappa: f64, rho_db: f64, user: usize) -> Result<Heatmaps> {
    let k = exp
        .cfg
        .kappas
        .iter()
        .position(|&x| x == kappa)
        .ok_or_else(|| Error::schema("heatmap", format!("kappa {kappa} is not in the configuration")))?;
    if p >= exp.profiles.len() {
        return Err(Error::schema("heatmap", format!("no profile with index {p}")));
    }
    let codecs = exp.codecs_for_profile(p)?;
    let model = &codecs[k].model;
    let (_, h_hat) = exp.scenarios[p].estimated_channel(exp.cfg.user_seed(user), 0, rho_db)?;
    let latent = compress(model, &h_hat, exp.cfg.bits_per_element)?;
    let recon = decompress(model, &latent)?;
    let dims = h_hat.dims();
    let grid = |h: &mimocsi_core::chanmodel::ChannelTensor| {
        (0..dims.n_sc)
            .map(|sc| (0..dims.n_t).map(|t| h.get(sc, 0, t).norm()).collect())
            .collect()
    };
    Ok(Heatmaps {
        original: grid(&h_hat),
        latent: latent.values().chunks(dims.n_t).map(<[f64]>::to_vec).collect(),
        reconstructed: grid(&recon),
    })
}

pub fn write_grid<W: Write>(grid: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for row in grid {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("heatmap grid", e))
}

/// Writes `heatmap-original.csv`, `heatmap-latent.csv` and
/// `heatmap-reconstructed.csv` into `out_dir`.
pub fn heatmaps_to_dir(maps: &Heatmaps, out_dir: &Path) -> Result<()> {
    ensure_dir(out_dir)?;
    for (name, grid) in [
        ("heatmap-original.csv", &maps.original),
        ("heatmap-latent.csv", &maps.latent),
        ("heatmap-reconstructed.csv", &maps.reconstructed),
    ] {
        let path = out_dir.join(name);
        let f = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_grid(grid, std::io::BufWriter::new(f))?;
    }
    Ok(())
}
