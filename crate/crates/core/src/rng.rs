//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit generator. Parallel code derives
//! one generator per work batch from a `(seed, stream)` pair, so results do not
//! depend on how rayon schedules the batches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Seed used by the command line front end when none is given.
pub const DEFAULT_SEED: u64 = 20070201;

/// Replicates per parallel work item. Fixed so batching is independent of
/// the thread count.
pub const BATCH_SIZE: usize = 4096;

/// Generator for stream `stream` of seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on `(0, 1]`.
#[inline]
pub fn uniform_open0<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Unit exponential by inversion.
#[inline]
pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -uniform_open0(rng).ln()
}

/// Splits `total` replicates into `(stream, len)` batches.
pub(crate) fn batches(total: usize) -> impl Iterator<Item = (u64, usize)> {
    let n = total.div_ceil(BATCH_SIZE);
    (0..n).map(move |b| {
        let start = b * BATCH_SIZE;
        (b as u64, BATCH_SIZE.min(total - start))
    })
}
