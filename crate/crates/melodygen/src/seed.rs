//! Deterministic sub-seed derivation.
//!
//! Every run takes one master seed. Independent random streams (one per
//! dataset spectrum, one for random melodies, one for training, ...) get
//! their own seed via `derive_seed(master, stream)`, so a single number
//! reproduces a whole pipeline run and parallel workers never share a stream.

/// SplitMix64 step; the standard 64-bit finalizer.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for numbered stream `stream` from `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master) ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Stream ids used by the pipeline and CLI. Spectrum builds use
/// `SPECTRUM_BASE + tune_index`.
pub mod streams {
    pub const SPECTRUM_BASE: u64 = 1 << 32;
    pub const RANDOM_UNIFORM: u64 = 1;
    pub const RANDOM_DISTRIBUTION: u64 = 2;
    pub const TRAIN: u64 = 3;
    pub const GENERATE: u64 = 4;
}
