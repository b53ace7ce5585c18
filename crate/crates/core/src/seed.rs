//! Reproducible randomness.
//!
//! All randomness flows through [`Rng`], ChaCha with 8 rounds as implemented by
//! `rand_chacha`, seeded from a `u64` via `SeedableRng::seed_from_u64`. Its output
//! stream is specified independently of platform and word size.
//!
//! Sub-seeds are derived with [`derive_seed`]: the SHA-256 digest of the parts
//! joined by the unit separator `0x1f`, of which the first 8 bytes are read as a
//! little-endian `u64`. Any single run can therefore be reproduced in isolation
//! from the master seed and the strings that name it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derive_seed<S: AsRef<str>>(parts: &[S]) -> u64 {
    let mut h = Sha256::new();
    for (k, p) in parts.iter().enumerate() {
        if k > 0 {
            h.update([0x1f]);
        }
        h.update(p.as_ref().as_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Hex SHA-256 of `bytes`.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
