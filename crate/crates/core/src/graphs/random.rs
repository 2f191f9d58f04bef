use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FiniteGraph, GraphError};

pub const DEFAULT_RETRY_BUDGET: usize = 10_000;

/// Random simple `d`-regular graph on `n` vertices.
///
/// Configuration model: `n * d` stubs are shuffled and paired consecutively.
/// A pairing with a loop or a repeated edge is discarded as a whole and the
/// stubs are reshuffled, so the accepted graph is uniform among simple
/// `d`-regular graphs.
pub fn random_regular(n: usize, d: usize, rng_seed: u64) -> Result<FiniteGraph, GraphError> {
    random_regular_with_budget(n, d, rng_seed, DEFAULT_RETRY_BUDGET)
}

pub fn random_regular_with_budget(
    n: usize,
    d: usize,
    rng_seed: u64,
    max_attempts: usize,
) -> Result<FiniteGraph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::ParityError { n, d });
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(GraphError::InvalidDegree { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    'attempt: for _ in 0..max_attempts {
        stubs.shuffle(&mut rng);
        adj.iter_mut().for_each(Vec::clear);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || adj[u].contains(&v) {
                continue 'attempt;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        return Ok(FiniteGraph::from_sorted_adjacency(adj));
    }
    Err(GraphError::RetryBudgetExceeded(max_attempts))
}
