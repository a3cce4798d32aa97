//! Seed plumbing. Every random draw in the simulator comes from a ChaCha8
//! stream whose seed is derived from a named 64-bit base seed, a stream tag
//! and an index, so independent consumers never share a stream.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type SimRng = ChaCha8Rng;

/// Stream tags used when deriving child seeds.
pub mod stream {
    pub const CHANNEL: u64 = 0x4348_414e;
    pub const NOISE: u64 = 0x4e4f_4953;
    pub const PAYLOAD: u64 = 0x5041_594c;
    pub const PILOT: u64 = 0x5049_4c4f;
    pub const TRAIN: u64 = 0x5452_4149;
    pub const MEASURE: u64 = 0x4d45_4153;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `(base, tag, index)`.
pub fn derive_seed(base: u64, tag: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(tag ^ splitmix64(index)))
}

/// Seed of coherence block `block`; block 0 reuses the base seed unchanged.
pub fn block_seed(base: u64, block: u64) -> u64 {
    if block == 0 {
        base
    } else {
        derive_seed(base, stream::CHANNEL, block)
    }
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Circularly-symmetric complex Gaussian sample with variance `var`.
pub fn complex_normal(rng: &mut SimRng, var: f64) -> Complex64 {
    let scale = num_traits::Float::sqrt(var * 0.5);
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * scale, im * scale)
}
