//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`), seeded from a `u64`
//! via `SeedableRng::seed_from_u64`. Independent sub-streams for cells,
//! trials, and workers use the generator's 64-bit stream selector, so a
//! result depends only on `(seed, stream)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
