//! Seeded substreams for block-parallel Monte Carlo.
//!
//! Work is cut into fixed-size blocks; block `b` always draws from ChaCha8
//! stream `b` of the run seed. Results therefore depend on the seed and the
//! sample count, never on how many threads process the blocks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const BLOCK_SIZE: usize = 8192;

pub(crate) fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(block index, samples in block)` covering `n` samples.
pub(crate) fn blocks(n: usize) -> Vec<(u64, usize)> {
    (0..n.div_ceil(BLOCK_SIZE))
        .map(|b| (b as u64, BLOCK_SIZE.min(n - b * BLOCK_SIZE)))
        .collect()
}
