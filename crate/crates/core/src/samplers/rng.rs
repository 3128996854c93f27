//! Counter-based random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream type used by every sampler in the crate.
pub type StreamRng = ChaCha8Rng;

/// Block index reserved for the θ-update stream.
pub const THETA_STREAM: u64 = u64::MAX;

/// Independent stream for `(seed, block, iteration)`.
///
/// The stream depends only on the triple, so results do not depend on the
/// order in which blocks are processed.
pub fn stream(seed: u64, block: u64, iteration: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&block.to_le_bytes());
    key[16..24].copy_from_slice(&iteration.to_le_bytes());
    key[24..].copy_from_slice(b"axdastrm");
    ChaCha8Rng::from_seed(key)
}
