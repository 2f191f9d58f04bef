//! Enumeration of canonical balls.
//!
//! Canonical labelings are generated directly rather than by canonicalizing
//! every raw labeling: positions are filled in preorder, and a partial
//! labeling is abandoned as soon as some completed subtree's code is smaller
//! than its previous sibling's. Choices at each position are tried in
//! increasing byte order, so codes come out sorted.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{ball::CanonicalBall, Layout, RuleError, SeedModel};

/// Cap on the number of raw configurations (`q^n`, `n!` or `q^n n!`) a ball
/// or edge ball may have before exact enumeration is refused.
pub const MAX_RAW_CONFIGURATIONS: u64 = 10_000_000;

/// All canonical balls of one `(d, t, model)` class, sorted by code, with
/// the number of raw labelings in each class.
#[derive(Debug)]
pub struct BallCatalog {
    d: usize,
    t: usize,
    model: SeedModel,
    layout: Arc<Layout>,
    codes: Vec<Vec<u8>>,
    orbits: Vec<u64>,
    total: u64,
}

type CatalogKey = (usize, usize, SeedModel);

fn catalogs() -> &'static Mutex<HashMap<CatalogKey, Arc<BallCatalog>>> {
    static CACHE: OnceLock<Mutex<HashMap<CatalogKey, Arc<BallCatalog>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `(root_arity, inner_arity, depth)`.
type LayoutKey = (usize, usize, usize);

fn layouts() -> &'static Mutex<HashMap<LayoutKey, Arc<Layout>>> {
    static CACHE: OnceLock<Mutex<HashMap<LayoutKey, Arc<Layout>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub(crate) fn shared_layout(root_arity: usize, inner_arity: usize, depth: usize) -> Arc<Layout> {
    let mut cache = layouts().lock().expect("layout cache poisoned");
    cache
        .entry((root_arity, inner_arity, depth))
        .or_insert_with(|| Arc::new(Layout::new(root_arity, inner_arity, depth)))
        .clone()
}

pub(crate) fn check_budget(what: &str, model: SeedModel, n: usize) -> Result<u64, RuleError> {
    match model.raw_count(n) {
        Some(c) if c <= MAX_RAW_CONFIGURATIONS as u128 => Ok(c as u64),
        other => Err(RuleError::BudgetExceeded {
            what: what.to_string(),
            count: other.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()),
            cap: MAX_RAW_CONFIGURATIONS,
        }),
    }
}

impl BallCatalog {
    /// Shared catalog for `(d, t, model)`, built on first use.
    pub fn get(d: usize, t: usize, model: SeedModel) -> Result<Arc<BallCatalog>, RuleError> {
        if d < 2 {
            return Err(RuleError::InvalidParams(format!("degree {d} < 2")));
        }
        let key = (d, t, model);
        if let Some(c) = catalogs().lock().expect("catalog cache poisoned").get(&key) {
            return Ok(c.clone());
        }
        let built = Arc::new(Self::build(d, t, model)?);
        let mut cache = catalogs().lock().expect("catalog cache poisoned");
        Ok(cache.entry(key).or_insert(built).clone())
    }

    fn build(d: usize, t: usize, model: SeedModel) -> Result<Self, RuleError> {
        let size = super::ball_size(d, t);
        let total = check_budget(&format!("radius-{t} ball of T_{d} under {model}"), model, size)?;
        let layout = shared_layout(d, d - 1, t);
        let entries = enumerate_codes(&layout, model);
        let (codes, orbits): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        debug_assert_eq!(orbits.iter().sum::<u64>(), total);
        Ok(BallCatalog { d, t, model, layout, codes, orbits, total })
    }

    pub(crate) fn layout_for(d: usize, t: usize) -> Arc<Layout> {
        shared_layout(d, d.saturating_sub(1), t)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn model(&self) -> SeedModel {
        self.model
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn code(&self, i: usize) -> &[u8] {
        &self.codes[i]
    }

    pub fn codes(&self) -> impl Iterator<Item = &[u8]> {
        self.codes.iter().map(Vec::as_slice)
    }

    /// Raw labelings in class `i`.
    pub fn orbit(&self, i: usize) -> u64 {
        self.orbits[i]
    }

    /// Total raw labelings of the ball; the common denominator of class weights.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn index_of(&self, code: &[u8]) -> Option<usize> {
        self.codes.binary_search_by(|c| c.as_slice().cmp(code)).ok()
    }

    pub fn ball(&self, i: usize) -> CanonicalBall {
        CanonicalBall::from_code(self.d, self.t, self.model, self.codes[i].clone())
    }
}

/// One representative per orbit of the canonical balls of `(d, t, model)`,
/// sorted by canonical code.
pub fn enumerate_canonical_balls(d: usize, t: usize, model: SeedModel) -> Result<Vec<CanonicalBall>, RuleError> {
    let catalog = BallCatalog::get(d, t, model)?;
    Ok((0..catalog.len()).map(|i| catalog.ball(i)).collect())
}

/// Canonical codes of `layout` under `model`, with orbit sizes, in code order.
pub(crate) fn enumerate_codes(layout: &Layout, model: SeedModel) -> Vec<(Vec<u8>, u64)> {
    let width = model.label_width();
    let n = layout.size();
    // Subtrees whose last position is `pos` and which have a previous sibling.
    let mut completes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if layout.prev_sibling(v).is_some() {
            completes[layout.end(v) - 1].push(v);
        }
    }
    let mut gen = Generator {
        layout,
        model,
        width,
        completes,
        buf: vec![0; n * width],
        used: vec![false; n + 1],
        out: Vec::new(),
    };
    gen.fill(0);
    gen.out
}

struct Generator<'a> {
    layout: &'a Layout,
    model: SeedModel,
    width: usize,
    completes: Vec<Vec<usize>>,
    buf: Vec<u8>,
    used: Vec<bool>,
    out: Vec<(Vec<u8>, u64)>,
}

impl Generator<'_> {
    fn fill(&mut self, pos: usize) {
        let n = self.layout.size();
        if pos == n {
            let orbit = self.layout.orbit_size(&self.buf, self.width);
            self.out.push((self.buf.clone(), orbit));
            return;
        }
        let tags = self.model.tags().unwrap_or(1);
        let ranks: Vec<u8> = if self.model.has_ranks() { (1..=n as u8).collect() } else { vec![0] };
        for tag in 0..tags {
            for &rank in &ranks {
                if self.model.has_ranks() && self.used[rank as usize] {
                    continue;
                }
                let chunk: &[u8] = match self.model {
                    SeedModel::Alphabet(_) => &[tag],
                    SeedModel::Rank => &[rank],
                    SeedModel::Hybrid(_) => &[tag, rank],
                };
                let w = self.width;
                if let Some(s) = self.layout.prev_sibling(pos) {
                    if chunk < &self.buf[s * w..(s + 1) * w] {
                        continue;
                    }
                }
                self.buf[pos * w..(pos + 1) * w].copy_from_slice(chunk);
                if !self.completed_in_order(pos) {
                    continue;
                }
                self.used[rank as usize] = true;
                self.fill(pos + 1);
                self.used[rank as usize] = false;
            }
        }
    }

    fn completed_in_order(&self, pos: usize) -> bool {
        let w = self.width;
        self.completes[pos].iter().all(|&v| {
            let s = self.layout.prev_sibling(v).expect("listed with a sibling");
            let prev = &self.buf[s * w..self.layout.end(s) * w];
            let cur = &self.buf[v * w..self.layout.end(v) * w];
            prev <= cur
        })
    }
}
