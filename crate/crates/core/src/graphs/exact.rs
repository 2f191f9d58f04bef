//! Exact independence and chromatic numbers for small graphs (n <= 40).
//!
//! Both searches work on `u64` vertex masks. The independent-set search
//! bounds each branch by a greedy clique cover of the remaining candidates;
//! the coloring search tries `k` colors upward from `max(clique, ceil(n / alpha))`
//! and stops at the greedy (DSATUR) coloring count.

use serde::Serialize;

use super::{FiniteGraph, GraphError};

pub const MAX_EXACT_VERTICES: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactInvariants {
    pub independence_number: usize,
    pub chromatic_number: usize,
}

pub fn exact_invariants(g: &FiniteGraph) -> Result<ExactInvariants, GraphError> {
    let n = g.n();
    if n > MAX_EXACT_VERTICES {
        return Err(GraphError::TooLarge { n, cap: MAX_EXACT_VERTICES });
    }
    let nbr = masks(g);
    let alpha = independence_number(&nbr);
    let chi = chromatic_number(&nbr, alpha);
    Ok(ExactInvariants { independence_number: alpha, chromatic_number: chi })
}

fn masks(g: &FiniteGraph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect()
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn independence_number(nbr: &[u64]) -> usize {
    let mut best = 0;
    mis_branch(nbr, full_mask(nbr.len()), 0, &mut best);
    best
}

fn mis_branch(nbr: &[u64], cand: u64, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + clique_cover(nbr, cand) <= *best {
        return;
    }
    // Branch on the candidate with the most candidate neighbours.
    let v = bits(cand).max_by_key(|&v| ((nbr[v] & cand).count_ones(), std::cmp::Reverse(v))).expect("cand is nonempty");
    if nbr[v] & cand == 0 {
        // Isolated within the candidates: always take it.
        mis_branch(nbr, cand & !(1 << v), size + 1, best);
        return;
    }
    mis_branch(nbr, cand & !(1 << v) & !nbr[v], size + 1, best);
    mis_branch(nbr, cand & !(1 << v), size, best);
}

/// Number of cliques in a greedy clique partition of `cand`; an upper bound
/// on the independence number of the induced subgraph.
fn clique_cover(nbr: &[u64], mut cand: u64) -> usize {
    let mut count = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let mut clique_cand = cand & nbr[v];
        cand &= !(1 << v);
        while clique_cand != 0 {
            let w = clique_cand.trailing_zeros() as usize;
            cand &= !(1 << w);
            clique_cand &= nbr[w];
        }
        count += 1;
    }
    count
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            v
        })
    })
}

fn chromatic_number(nbr: &[u64], alpha: usize) -> usize {
    let n = nbr.len();
    if n == 0 {
        return 0;
    }
    let upper = dsatur(nbr);
    let lower = greedy_clique(nbr).max(n.div_ceil(alpha));
    for k in lower..upper {
        let mut colors = vec![usize::MAX; n];
        if color_with(nbr, k, &mut colors) {
            return k;
        }
    }
    upper
}

fn greedy_clique(nbr: &[u64]) -> usize {
    (0..nbr.len())
        .map(|v| {
            let mut size = 1;
            let mut cand = nbr[v];
            while cand != 0 {
                let w = bits(cand).max_by_key(|&w| (nbr[w] & cand).count_ones()).expect("nonempty");
                size += 1;
                cand &= nbr[w];
            }
            size
        })
        .max()
        .unwrap_or(0)
}

/// Greedy DSATUR coloring; returns the number of colors used.
fn dsatur(nbr: &[u64]) -> usize {
    let n = nbr.len();
    let mut colors = vec![usize::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        let v = next_vertex(nbr, &colors).expect("uncolored vertex remains");
        let forbidden = neighbour_colors(nbr, &colors, v);
        let c = (0..).find(|c| forbidden & (1u64 << c) == 0).expect("a free color");
        colors[v] = c;
        used = used.max(c + 1);
    }
    used
}

fn neighbour_colors(nbr: &[u64], colors: &[usize], v: usize) -> u64 {
    bits(nbr[v]).filter(|&w| colors[w] != usize::MAX).fold(0u64, |m, w| m | 1 << colors[w])
}

/// Uncolored vertex of maximum saturation, ties by degree then index.
fn next_vertex(nbr: &[u64], colors: &[usize]) -> Option<usize> {
    (0..nbr.len())
        .filter(|&v| colors[v] == usize::MAX)
        .max_by_key(|&v| (neighbour_colors(nbr, colors, v).count_ones(), nbr[v].count_ones(), std::cmp::Reverse(v)))
}

fn color_with(nbr: &[u64], k: usize, colors: &mut [usize]) -> bool {
    let Some(v) = next_vertex(nbr, colors) else {
        return true;
    };
    let forbidden = neighbour_colors(nbr, colors, v);
    let max_used = colors.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    // Colors above the first unused one are interchangeable.
    for c in 0..k.min(max_used + 1) {
        if forbidden & (1u64 << c) == 0 {
            colors[v] = c;
            if color_with(nbr, k, colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}
