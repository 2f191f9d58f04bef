//! Fixtures shared by the benchmarks.

use fiid_core::graphs::random_regular;
use fiid_core::{FiniteGraph, LocalRule};

/// Random cubic graph on `n` vertices with a fixed seed.
pub fn cubic_graph(n: usize) -> FiniteGraph {
    random_regular(n, 3, 0x5eed).expect("cubic graphs exist for even n")
}

pub fn max_seed() -> LocalRule {
    LocalRule::max_seed_independent(3).expect("built-in rule")
}
