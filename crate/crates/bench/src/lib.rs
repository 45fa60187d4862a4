//! Shared corpus builders for the benchmark targets. Everything is seeded so
//! successive benchmark runs measure the same inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use harsanyi_core::game_oracle::random_table;
use harsanyi_core::synth::random_monotone_planted_game;
use harsanyi_core::{OracleDescriptor, ValueTable};

/// Uniform `[-1, 1]` value table over `2^n` coalitions.
pub fn uniform_table(n: u32, seed: u64) -> ValueTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_table(n, &mut rng).expect("n within supported range")
}

/// Tabulated sparse planted game (positive coefficients, bounded order).
pub fn planted_table(n: u32, concepts: usize, seed: u64) -> ValueTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = random_monotone_planted_game(n, concepts, 4.min(n), &mut rng)
        .expect("corpus parameters are valid");
    OracleDescriptor::Synthetic { spec }
        .tabulate()
        .expect("synthetic tabulation cannot fail")
}
