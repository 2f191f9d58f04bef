//! Brute-force oracles, written without the library's algorithms so that
//! agreement is evidence rather than tautology.
#![allow(dead_code)]

use std::collections::HashMap;

use fiid_core::rules::{RawBall, Seed};
use fiid_core::{LocalRule, SeedModel};

/// Shortest cycle by enumerating simple paths from each start vertex `s`
/// through vertices larger than `s` only. Exponential; for n <= 24.
pub fn brute_girth(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let adj = adjacency(n, edges);
    let mut best: Option<usize> = None;
    fn walk(adj: &[Vec<usize>], s: usize, x: usize, len: usize, on: &mut [bool], best: &mut Option<usize>) {
        if best.is_some_and(|b| len + 1 >= b) {
            return;
        }
        for &y in &adj[x] {
            if y == s && len >= 2 {
                *best = Some(len + 1);
            } else if y > s && !on[y] {
                on[y] = true;
                walk(adj, s, y, len + 1, on, best);
                on[y] = false;
            }
        }
    }
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        walk(&adj, s, s, 0, &mut on, &mut best);
    }
    best
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Independence number over all `2^n` subsets.
pub fn brute_alpha(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|&s| edges.iter().all(|&(u, v)| s >> u & 1 == 0 || s >> v & 1 == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Chromatic number: smallest `k` for which some assignment in `k^n` is proper.
pub fn brute_chi(n: usize, edges: &[(usize, usize)]) -> usize {
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&k| {
            let mut colors = vec![0usize; n];
            loop {
                if edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
                    return true;
                }
                let mut i = 0;
                while i < n {
                    colors[i] += 1;
                    if colors[i] < k {
                        break;
                    }
                    colors[i] = 0;
                    i += 1;
                }
                if i == n {
                    return false;
                }
            }
        })
        .expect("n colors always suffice")
}

/// Children lists of a rooted tree in preorder: the root has `root_arity`
/// children, every other vertex above `depth` has `inner_arity`.
pub fn preorder_tree(root_arity: usize, inner_arity: usize, depth: usize) -> Vec<Vec<usize>> {
    fn build(kids: &mut Vec<Vec<usize>>, arity: usize, inner: usize, depth: usize) -> usize {
        let me = kids.len();
        kids.push(Vec::new());
        if depth > 0 {
            for _ in 0..arity {
                let c = build(kids, inner, inner, depth - 1);
                kids[me].push(c);
            }
        }
        me
    }
    let mut kids = Vec::new();
    build(&mut kids, root_arity, inner_arity, depth);
    kids
}

/// Canonical string of a labeled rooted tree: label, then sorted child strings.
pub fn naive_code(kids: &[Vec<usize>], labels: &[String], v: usize) -> String {
    let mut parts: Vec<String> = kids[v].iter().map(|&c| naive_code(kids, labels, c)).collect();
    parts.sort();
    format!("{}({})", labels[v], parts.concat())
}

/// Per-vertex label strings of a raw labeling: tags, ranks (by key order)
/// or both.
pub fn vertex_strings(model: SeedModel, tags: &[u8], ranks: &[usize]) -> Vec<String> {
    let n = tags.len().max(ranks.len());
    (0..n)
        .map(|i| match model {
            SeedModel::Alphabet(_) => format!("t{}", tags[i]),
            SeedModel::Rank => format!("r{:03}", ranks[i]),
            SeedModel::Hybrid(_) => format!("t{}r{:03}", tags[i], ranks[i]),
        })
        .collect()
}

/// Calls `f(tags, ranks)` for every raw labeling of `n` vertices.
pub fn for_each_labeling(model: SeedModel, n: usize, mut f: impl FnMut(&[u8], &[usize])) {
    let tag_sets: Vec<Vec<u8>> = match model.tags() {
        Some(q) => (0..(q as usize).pow(n as u32))
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let d = (x % q as usize) as u8;
                        x /= q as usize;
                        d
                    })
                    .collect()
            })
            .collect(),
        None => vec![Vec::new()],
    };
    let perms: Vec<Vec<usize>> = if model.has_ranks() { permutations(n) } else { vec![Vec::new()] };
    for tags in &tag_sets {
        for p in &perms {
            f(tags, p);
        }
    }
}

/// All permutations of `1..=n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (1..=n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Sorted sizes of the isomorphism classes of seed-labeled radius-`t`
/// balls of `T_d`, by naive canonical strings over all raw labelings.
pub fn naive_class_sizes(d: usize, t: usize, model: SeedModel) -> Vec<u64> {
    let kids = preorder_tree(d, d - 1, t);
    let mut classes: HashMap<String, u64> = HashMap::new();
    for_each_labeling(model, kids.len(), |tags, ranks| {
        let labels = vertex_strings(model, tags, ranks);
        *classes.entry(naive_code(&kids, &labels, 0)).or_default() += 1;
    });
    let mut sizes: Vec<u64> = classes.into_values().collect();
    sizes.sort_unstable();
    sizes
}

fn seed_of(model: SeedModel, tag: u8, rank: usize) -> Seed {
    match model {
        SeedModel::Alphabet(_) => Seed::Tag(tag),
        SeedModel::Rank => Seed::Key(rank as f64),
        SeedModel::Hybrid(_) => Seed::Tagged(tag, rank as f64),
    }
}

/// The two halves of the radius-`t` edge ball of `T_d`: vertices `0..h`
/// hang off `u = 0`, vertices `h..2h` off `v = h`, each half a tree of
/// arity `d - 1` and depth `t`.
pub struct EdgeBall {
    pub d: usize,
    pub t: usize,
    pub half: Vec<Vec<usize>>,
}

impl EdgeBall {
    pub fn new(d: usize, t: usize) -> Self {
        EdgeBall { d, t, half: preorder_tree(d - 1, d - 1, t) }
    }

    pub fn size(&self) -> usize {
        2 * self.half.len()
    }

    fn emit(&self, offset: usize, x: usize, depth_left: usize, out: &mut Vec<usize>) {
        out.push(offset + x);
        if depth_left > 0 {
            for &c in &self.half[x] {
                self.emit(offset, c, depth_left - 1, out);
            }
        }
    }

    /// Edge-ball positions of the radius-`t` ball around one endpoint, in
    /// the preorder [`RawBall`] expects: the root, the other endpoint's
    /// subtree, then the root's own subtrees.
    pub fn ball_positions(&self, at_v: bool) -> Vec<usize> {
        let h = self.half.len();
        let (own, other) = if at_v { (h, 0) } else { (0, h) };
        let mut out = vec![own];
        if self.t > 0 {
            self.emit(other, 0, self.t - 1, &mut out);
            for &c in &self.half[0] {
                self.emit(own, c, self.t - 1, &mut out);
            }
        }
        out
    }

    pub fn raw_ball(&self, model: SeedModel, tags: &[u8], ranks: &[usize], at_v: bool) -> RawBall {
        let seeds = self
            .ball_positions(at_v)
            .into_iter()
            .map(|p| seed_of(model, tags.get(p).copied().unwrap_or(0), ranks.get(p).copied().unwrap_or(0)))
            .collect();
        RawBall::new(self.d, self.t, model, seeds).expect("well-formed ball")
    }
}

/// Exact laws by evaluating `rule` on both endpoints of every raw edge-ball
/// configuration: vertex counts (over both endpoints, out of `2 * total`),
/// ordered pair counts and `total`.
pub fn brute_force_laws(rule: &LocalRule) -> (Vec<u64>, Vec<Vec<u64>>, u64) {
    let region = EdgeBall::new(rule.d(), rule.t());
    let k = rule.output_alphabet().len();
    let mut vertex = vec![0u64; k];
    let mut pair = vec![vec![0u64; k]; k];
    let mut total = 0u64;
    for_each_labeling(rule.model(), region.size(), |tags, ranks| {
        let a = rule.evaluate(&region.raw_ball(rule.model(), tags, ranks, false)).unwrap();
        let b = rule.evaluate(&region.raw_ball(rule.model(), tags, ranks, true)).unwrap();
        vertex[a] += 1;
        vertex[b] += 1;
        pair[a][b] += 1;
        total += 1;
    });
    (vertex, pair, total)
}

/// `(C - 1)^A <= r^B < C^A`, i.e. `C - 1 <= r^(B/A) < C`.
pub fn brackets_power(c: &num_bigint::BigUint, r: u64, a: u32, b: u32) -> bool {
    use num_bigint::BigUint;
    let rb = BigUint::from(r).pow(b);
    let below = (c - 1u32).pow(a);
    below <= rb && rb < c.pow(a)
}

/// `(n, edges)` of a random simple graph with edge probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> (usize, Vec<(usize, usize)>) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    (n, edges)
}
