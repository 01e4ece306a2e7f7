//! Deterministic derivation of independent random streams.
//!
//! Every randomized routine in this crate takes a single `u64` seed and
//! derives child streams by hashing `(master, label, index)`. Two streams
//! with different labels or indices are statistically independent, and the
//! whole program is reproducible from the one master seed regardless of
//! thread count or evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Derives a 256-bit child seed from a master seed, a stream label, and an
/// index within that stream.
pub fn derive_seed(master: u64, label: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update([0x1f]);
    hasher.update(label.as_bytes());
    hasher.update([0x1f]);
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

/// Builds the generator for the `(label, index)` child stream.
pub fn derive_rng(master: u64, label: &str, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::from_seed(derive_seed(master, label, index))
}

/// Collapses a child seed back to a `u64`, for APIs that take plain seeds.
pub fn derive_u64(master: u64, label: &str, index: u64) -> u64 {
    let bytes = derive_seed(master, label, index);
    u64::from_le_bytes(bytes[..8].try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_labels_give_distinct_seeds() {
        assert_ne!(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
        assert_ne!(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
        assert_ne!(derive_seed(1, "a", 0), derive_seed(2, "a", 0));
    }

    #[test]
    fn derivation_is_stable() {
        assert_eq!(derive_seed(7, "trial", 3), derive_seed(7, "trial", 3));
        assert_eq!(derive_u64(7, "trial", 3), derive_u64(7, "trial", 3));
    }
}
