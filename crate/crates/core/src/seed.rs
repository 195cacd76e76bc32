//! Seed derivation.
//!
//! All randomness descends from one master seed. A child seed is the first
//! eight bytes (little endian) of `SHA-256(master_le || label_1 || 0 || label_2 || 0 ...)`,
//! where labels name the command, module and level, e.g.
//! `derive(seed, &["build-core", "balanced", "level-2", "member-1"])`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

pub fn derive(master: u64, labels: &[&str]) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    for l in labels {
        h.update(l.as_bytes());
        h.update([0u8]);
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_for(master: u64, labels: &[&str]) -> Rng {
    rng(derive(master, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_separate_streams() {
        assert_eq!(derive(1, &["a", "b"]), derive(1, &["a", "b"]));
        assert_ne!(derive(1, &["a", "b"]), derive(1, &["ab"]));
        assert_ne!(derive(1, &["a"]), derive(2, &["a"]));
    }
}
