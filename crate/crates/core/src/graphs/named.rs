//! Standard small target graphs with fixed vertex numberings.
//!
//! | name     | n  | numbering                                                      |
//! |----------|----|----------------------------------------------------------------|
//! | K2,K3,K4 | k  | complete graph on `0..k`                                       |
//! | C5       | 5  | `i ~ i+1 (mod 5)`                                              |
//! | Petersen | 10 | outer cycle `i ~ i+1 (mod 5)`, spokes `i ~ i+5`, inner pentagram `5+i ~ 5+(i+2 mod 5)` |
//! | Heawood  | 14 | Hamiltonian cycle `i ~ i+1 (mod 14)`, LCF `[5,-5]^7`           |
//! | McGee    | 24 | Hamiltonian cycle `i ~ i+1 (mod 24)`, LCF `[12,7,-7]^8`        |
//!
//! For the LCF graphs, vertex `i` is joined to `i + s` where `s` is the LCF
//! entry at position `i mod len`.

use super::{build_graph, FiniteGraph, GraphError};

pub const NAMED_GRAPHS: [&str; 7] = ["K2", "K3", "K4", "C5", "Petersen", "Heawood", "McGee"];

pub fn named_graph(name: &str) -> Result<FiniteGraph, GraphError> {
    let edges = match name {
        "K2" => complete(2),
        "K3" => complete(3),
        "K4" => complete(4),
        "C5" => cycle(5),
        "Petersen" => petersen(),
        "Heawood" => lcf(14, &[5, -5]),
        "McGee" => lcf(24, &[12, 7, -7]),
        other => return Err(GraphError::UnknownName(other.to_string())),
    };
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    build_graph(n, &edges)
}

fn complete(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect()
}

fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

fn petersen() -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    edges
}

fn lcf(n: usize, shifts: &[i64]) -> Vec<(usize, usize)> {
    let mut edges = cycle(n);
    let n_i = n as i64;
    for i in 0..n {
        let s = shifts[i % shifts.len()];
        let j = (i as i64 + s).rem_euclid(n_i) as usize;
        // Each chord is listed from both ends; keep one.
        if i < j {
            edges.push((i, j));
        }
    }
    edges
}
