//! Seeded random streams and thread-pool plumbing.
//!
//! Every parallel computation in the crate splits its work into units with a
//! stable index (a sample, or a fixed-size chunk of samples) and draws each
//! unit from its own ChaCha stream keyed by `(seed, index)`. Results are
//! gathered in index order, so output does not depend on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Independent stream number `index` of the generator seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool construction")
            .install(f),
        None => f(),
    }
}
