//! Seeded, counter-addressed random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by a
//! 64-bit seed and selected by a stream number, so a result depends only on
//! the seed and the position of the draw, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream families; keeps draws of different components independent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Generate = 1,
    Rounding = 2,
    LocalSearch = 3,
    Heuristic = 4,
}

/// The stream for `(purpose, step, trial)` under `seed`.
pub fn stream(seed: u64, purpose: Purpose, step: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = (purpose as u64) << 56 ^ (step & 0xff_ffff) << 32 ^ (trial & 0xffff_ffff);
    rng.set_stream(id);
    rng
}
