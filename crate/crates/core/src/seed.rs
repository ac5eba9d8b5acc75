//! Seed derivation.
//!
//! Every random draw in the crate is driven by a `ChaCha8Rng` created with
//! `seed_from_u64`. Child seeds are derived from a parent seed with the
//! SplitMix64 finalizer, so a single user seed fixes the whole tree:
//!
//! ```text
//! user seed
//! ├── derive(seed, SOLVE_ATTEMPT, t)       attempt t of the solver
//! │   ├── derive(.., WEIGHTS, 0)           vertex weights
//! │   ├── derive(.., CANDIDATES, 0)        candidate sets V_i
//! │   └── derive(.., BALANCED, 0)          balanced coloring draw
//! └── derive(seed, MC_TRIAL, t)            Monte Carlo trial t
//!     └── (same sub-streams as a solver attempt)
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SOLVE_ATTEMPT: u64 = 0x5013_A77E;
pub const MC_TRIAL: u64 = 0x3C_7819;
pub const WEIGHTS: u64 = 0x03E1_6475;
pub const CANDIDATES: u64 = 0xCA4D_1DA7;
pub const BALANCED: u64 = 0xBA1A_4CED;
pub const GENERATOR: u64 = 0x6E4E_4A70;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for item `index` of `stream` under `parent`.
pub fn derive(parent: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(parent ^ stream.rotate_left(17)).wrapping_add(index))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
