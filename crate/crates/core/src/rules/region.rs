//! The edge ball: the union of the radius-`t` balls of both endpoints of one
//! edge of `T_d`.
//!
//! Positions `0..h` hold the half hanging off endpoint `u` (position 0) in the
//! preorder of `Layout::new(d-1, d-1, t)`; positions `h..2h` hold the half of
//! endpoint `v` (position `h`) in the same order. The only edge between the
//! halves is `u ~ v`.

use std::sync::Arc;

use serde::Serialize;

use super::ball::{encode, RawBall};
use super::catalog::{check_budget, shared_layout};
use super::{Layout, RuleError, Seed, SeedModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Endpoint {
    U,
    V,
}

#[derive(Clone, Debug)]
pub struct EdgeRegion {
    d: usize,
    t: usize,
    half: Arc<Layout>,
    ball: Arc<Layout>,
    adj: Vec<Vec<usize>>,
    ball_u: Vec<usize>,
    ball_v: Vec<usize>,
}

impl EdgeRegion {
    pub fn new(d: usize, t: usize) -> Self {
        assert!(d >= 2, "degree must be at least 2");
        let half = shared_layout(d - 1, d - 1, t);
        let h = half.size();
        let mut adj = vec![Vec::new(); 2 * h];
        for offset in [0, h] {
            for p in 0..h {
                for &c in half.children(p) {
                    adj[offset + p].push(offset + c);
                    adj[offset + c].push(offset + p);
                }
            }
        }
        adj[0].push(h);
        adj[h].push(0);
        let ball_u = ball_preorder(d, t, 0, |x| &adj[x]).expect("edge region is d-regular inside");
        let ball_v = ball_preorder(d, t, h, |x| &adj[x]).expect("edge region is d-regular inside");
        EdgeRegion { d, t, half, ball: shared_layout(d, d - 1, t), adj, ball_u, ball_v }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn size(&self) -> usize {
        self.adj.len()
    }

    pub fn half_size(&self) -> usize {
        self.half.size()
    }

    pub fn half_layout(&self) -> &Layout {
        &self.half
    }

    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.adj[p]
    }

    pub fn position(&self, e: Endpoint) -> usize {
        match e {
            Endpoint::U => 0,
            Endpoint::V => self.half.size(),
        }
    }

    /// Region positions of the ball around `e`, in ball preorder.
    pub fn ball_positions(&self, e: Endpoint) -> &[usize] {
        match e {
            Endpoint::U => &self.ball_u,
            Endpoint::V => &self.ball_v,
        }
    }

    /// Canonical code of the ball around `e` for region-wide tags and keys
    /// (either may be empty when the model lacks it; keys must be distinct).
    pub(crate) fn code_at(&self, e: Endpoint, model: SeedModel, tags: &[u8], keys: &[u128]) -> Vec<u8> {
        let pos = self.ball_positions(e);
        let sub_tags: Vec<u8> = if tags.is_empty() { Vec::new() } else { pos.iter().map(|&p| tags[p]).collect() };
        let sub_keys: Vec<u128> = if keys.is_empty() { Vec::new() } else { pos.iter().map(|&p| keys[p]).collect() };
        encode(&self.ball, model, &sub_tags, &sub_keys)
    }

    /// All seed configurations of the region in lexicographic order: tags as
    /// a base-`q` odometer (position 0 most significant), rank assignments as
    /// permutations of `1..=size` in lexicographic order, tags before ranks
    /// for the hybrid model.
    pub fn configurations(&self, model: SeedModel) -> Result<impl Iterator<Item = EdgeConfiguration> + '_, RuleError> {
        check_budget(&format!("radius-{} edge ball of T_{} under {model}", self.t, self.d), model, self.size())?;
        let n = self.size();
        let q = model.tags();
        let mut tags = q.map(|_| vec![0u8; n]);
        let mut ranks = model.has_ranks().then(|| (1..=n as u8).collect::<Vec<_>>());
        let mut done = false;
        Ok(std::iter::from_fn(move || {
            if done {
                return None;
            }
            let config = EdgeConfiguration {
                d: self.d,
                t: self.t,
                model,
                tags: tags.clone().unwrap_or_default(),
                ranks: ranks.clone().unwrap_or_default(),
            };
            // Advance ranks first (minor), then tags (major).
            let ranks_wrapped = match ranks.as_mut() {
                Some(r) => !next_permutation(r),
                None => true,
            };
            if ranks_wrapped {
                done = match (tags.as_mut(), q) {
                    (Some(t), Some(q)) => !odometer(t, q),
                    _ => true,
                };
            }
            Some(config)
        }))
    }
}

fn odometer(digits: &mut [u8], base: u8) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Next permutation in lexicographic order; resets to sorted and returns
/// `false` after the last one.
fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        p.reverse();
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("a larger element exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Preorder list of the vertices of the radius-`t` ball around `root`, where
/// children are all neighbours except the parent. Fails with the first
/// vertex above depth `t` whose degree is not `d`.
pub(crate) fn ball_preorder<'a, F>(d: usize, t: usize, root: usize, neighbors: F) -> Result<Vec<usize>, usize>
where
    F: Fn(usize) -> &'a [usize],
{
    let mut out = Vec::with_capacity(super::ball_size(d, t));
    let mut stack = vec![(root, usize::MAX, 0usize)];
    while let Some((x, parent, depth)) = stack.pop() {
        out.push(x);
        if depth == t {
            continue;
        }
        let ns = neighbors(x);
        if ns.len() != d {
            return Err(x);
        }
        // Reverse push keeps neighbour order in the preorder.
        let mut skipped = false;
        for &y in ns.iter().rev() {
            if y == parent && !skipped {
                skipped = true;
                continue;
            }
            stack.push((y, x, depth + 1));
        }
        if depth > 0 && !skipped {
            return Err(x);
        }
    }
    Ok(out)
}

/// Seed configuration on an edge ball. `tags` is empty for the rank model,
/// `ranks` (a permutation of `1..=size`) is empty for the alphabet model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeConfiguration {
    pub d: usize,
    pub t: usize,
    pub model: SeedModel,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<u8>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ranks: Vec<u8>,
}

impl EdgeConfiguration {
    /// Configuration with every tag 0 (and ranks in position order).
    pub fn all_zero(d: usize, t: usize, model: SeedModel) -> Self {
        let n = super::edge_ball_size(d, t);
        EdgeConfiguration {
            d,
            t,
            model,
            tags: if model.tags().is_some() { vec![0; n] } else { Vec::new() },
            ranks: if model.has_ranks() { (1..=n as u8).collect() } else { Vec::new() },
        }
    }

    /// Builds a configuration from region tags and arbitrary distinct keys;
    /// keys are replaced by their ranks.
    pub(crate) fn from_parts(d: usize, t: usize, model: SeedModel, tags: &[u8], keys: &[u128]) -> Self {
        let ranks = if model.has_ranks() {
            let mut order: Vec<usize> = (0..keys.len()).collect();
            order.sort_unstable_by_key(|&i| keys[i]);
            let mut r = vec![0u8; keys.len()];
            for (k, &i) in order.iter().enumerate() {
                r[i] = (k + 1) as u8;
            }
            r
        } else {
            Vec::new()
        };
        EdgeConfiguration { d, t, model, tags: tags.to_vec(), ranks }
    }

    pub(crate) fn keys(&self) -> Vec<u128> {
        self.ranks.iter().map(|&r| r as u128).collect()
    }

    pub fn seeds(&self) -> Vec<Seed> {
        let n = self.tags.len().max(self.ranks.len());
        (0..n)
            .map(|i| match self.model {
                SeedModel::Alphabet(_) => Seed::Tag(self.tags[i]),
                SeedModel::Rank => Seed::Key(self.ranks[i] as f64),
                SeedModel::Hybrid(_) => Seed::Tagged(self.tags[i], self.ranks[i] as f64),
            })
            .collect()
    }

    /// The raw ball seen by endpoint `e`.
    pub fn ball(&self, region: &EdgeRegion, e: Endpoint) -> Result<RawBall, RuleError> {
        if (region.d, region.t) != (self.d, self.t) {
            return Err(RuleError::MalformedBall(format!(
                "configuration is for (d={}, t={}), region is (d={}, t={})",
                self.d, self.t, region.d, region.t
            )));
        }
        let seeds = self.seeds();
        if seeds.len() != region.size() {
            return Err(RuleError::MalformedBall(format!(
                "edge ball has {} positions, configuration has {}",
                region.size(),
                seeds.len()
            )));
        }
        let picked = region.ball_positions(e).iter().map(|&p| seeds[p]).collect();
        RawBall::new(self.d, self.t, self.model, picked)
    }
}
