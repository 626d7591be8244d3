//! Seed splitting.
//!
//! Every random stream is derived from one 64-bit master seed:
//!
//! ```text
//! stream_seed(master, phase, index) =
//!     splitmix64(splitmix64(master ^ fnv1a64(phase)) ^ index)
//! ```
//!
//! and drives a ChaCha8 generator, so a `(master, phase, index)` triple names
//! the same sequence on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_seed(master: u64, phase: &str, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ fnv1a64(phase.as_bytes())) ^ index)
}

pub fn stream(master: u64, phase: &str, index: u64) -> SimRng {
    SimRng::seed_from_u64(stream_seed(master, phase, index))
}
