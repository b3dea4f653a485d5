//! Seed derivation and unit draws.
//!
//! Every random stream in a simulation is a ChaCha8 generator seeded from the
//! run seed plus a stream tag (and node id where relevant), so that no two
//! components ever share a generator and results do not depend on the order
//! in which components are built.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream tags for [`derive`].
pub mod stream {
    pub const TOPOLOGY: u64 = 1;
    pub const MATRIX: u64 = 2;
    pub const ORIGINS: u64 = 3;
    pub const SCHEDULE: u64 = 4;
    pub const SESSIONS: u64 = 5;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for `(seed, stream, index)`.
pub fn derive(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index)
}

pub fn rng(seed: u64, stream: u64, index: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(derive(seed, stream, index))
}

/// Uniform draw on `(0, 1]`.
#[inline]
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}
