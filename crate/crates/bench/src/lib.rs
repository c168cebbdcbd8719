//! Shared instance builders for the benchmark targets.

use gpk_core::rng::SplitMix64;
use gpk_core::{BitString, BooleanFunction};

/// A seeded random truth table of the given shape.
pub fn random_table(n: usize, m: usize, seed: u64) -> BooleanFunction {
    let mut rng = SplitMix64::new(seed);
    let outputs = (0..1usize << n)
        .map(|_| BitString::from_int(m, u64::from(rng.next_bits(m))).expect("m is in range"))
        .collect();
    BooleanFunction::from_truth_table(outputs).expect("the table has power-of-two length")
}
