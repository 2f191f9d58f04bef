//! Finite simple graphs: the target graphs `H` and the emulation substrates.
//!
//! A [`FiniteGraph`] is immutable once built. Vertices are `0..n` and every
//! adjacency list is kept sorted, so iteration order (and therefore every
//! report derived from it) is reproducible.

mod exact;
mod io;
mod named;
mod random;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub use exact::{exact_invariants, ExactInvariants, MAX_EXACT_VERTICES};
pub use io::{format_graph, parse_graph, read_graph, write_graph};
pub use named::{named_graph, NAMED_GRAPHS};
pub use random::{random_regular, random_regular_with_budget, DEFAULT_RETRY_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {0}) is a loop")]
    LoopEdge(usize),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("n*d = {n}*{d} is odd, no {d}-regular graph on {n} vertices exists")]
    ParityError { n: usize, d: usize },
    #[error("degree {d} must be smaller than the vertex count {n}")]
    InvalidDegree { n: usize, d: usize },
    #[error("no simple pairing found after {0} attempts")]
    RetryBudgetExceeded(usize),
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("induced subgraph contains the cycle {cycle:?}")]
    InducedCycle { cycle: Vec<usize> },
    #[error("graph has {n} vertices; exact search is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph file, line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph file: {0}")]
    Io(String),
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGraph").field("n", &self.n()).field("m", &self.m).finish()
    }
}

/// Builds a graph with exactly the given edge set.
///
/// Duplicates (in either orientation) are rejected rather than merged.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<FiniteGraph, GraphError> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge(u));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for (u, list) in adj.iter_mut().enumerate() {
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = (u.min(w[0]), u.max(w[0]));
            return Err(GraphError::DuplicateEdge(a, b));
        }
    }
    Ok(FiniteGraph { adj, m: edges.len() })
}

impl FiniteGraph {
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        FiniteGraph { adj, m }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// `Some(r)` iff every vertex has degree `r`.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adj.first().map(Vec::len)?;
        self.adj.iter().all(|l| l.len() == first).then_some(first)
    }

    /// Length of a shortest cycle, by one BFS per root.
    ///
    /// A non-tree edge `(x, y)` seen from root `s` closes a closed walk of
    /// length `dist[x] + dist[y] + 1`; the minimum over all roots is attained
    /// by a root lying on a shortest cycle, where that walk is the cycle.
    pub fn girth(&self) -> Girth {
        let n = self.n();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let mut touched = vec![s];
            dist[s] = 0;
            queue.push_back(s);
            'bfs: while let Some(x) = queue.pop_front() {
                // Nothing shorter can be found past this depth.
                if 2 * dist[x] >= best {
                    break 'bfs;
                }
                for &y in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        touched.push(y);
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
            queue.clear();
            for v in touched {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// Proper 2-coloring by BFS, or `None` when an odd cycle exists.
    fn bipartition(&self) -> Option<Vec<Side>> {
        let mut side: Vec<Option<Side>> = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for s in 0..self.n() {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(Side::A);
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].expect("queued vertices are colored");
                for &y in &self.adj[x] {
                    match side[y] {
                        None => {
                            side[y] = Some(sx.flip());
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.expect("all colored")).collect())
    }

    fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n()
    }
}

/// Shortest-cycle length; forests have no finite girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    /// True iff every vertex set smaller than the girth is guaranteed to induce a forest.
    pub fn exceeds(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g > k,
            Girth::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphProfile {
    pub n: usize,
    pub m: usize,
    pub girth: Girth,
    pub regular_degree: Option<usize>,
    pub bipartite: bool,
    pub connected: bool,
}

pub fn profile(g: &FiniteGraph) -> GraphProfile {
    GraphProfile {
        n: g.n(),
        m: g.m(),
        girth: g.girth(),
        regular_degree: g.regular_degree(),
        bipartite: g.bipartition().is_some(),
        connected: g.is_connected(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Proper 2-coloring of the subgraph induced on `subset`.
///
/// Each component is colored by BFS alternation from its smallest vertex,
/// which gets [`Side::A`]. Fails with a witness cycle when `G[S]` is not a
/// forest.
pub fn induced_two_coloring(g: &FiniteGraph, subset: &[usize]) -> Result<BTreeMap<usize, Side>, GraphError> {
    let n = g.n();
    let mut in_s = vec![false; n];
    for &v in subset {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
        in_s[v] = true;
    }
    let mut members: Vec<usize> = subset.to_vec();
    members.sort_unstable();
    members.dedup();

    let mut coloring = BTreeMap::new();
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &root in &members {
        if coloring.contains_key(&root) {
            continue;
        }
        coloring.insert(root, Side::A);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let sx = coloring[&x];
            for &y in g.neighbors(x) {
                if !in_s[y] || y == parent[x] {
                    continue;
                }
                if coloring.contains_key(&y) {
                    return Err(GraphError::InducedCycle { cycle: tree_cycle(&parent, x, y) });
                }
                coloring.insert(y, sx.flip());
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    Ok(coloring)
}

/// Cycle formed by the non-tree edge `(x, y)` and the two tree paths to their
/// common ancestor.
fn tree_cycle(parent: &[usize], x: usize, y: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let px = path_to_root(x);
    let py = path_to_root(y);
    let lca = *px.iter().find(|v| py.contains(v)).expect("both endpoints lie in one BFS tree");
    let mut cycle: Vec<usize> = px.iter().copied().take_while(|&v| v != lca).collect();
    cycle.push(lca);
    let tail: Vec<usize> = py.iter().copied().take_while(|&v| v != lca).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}
