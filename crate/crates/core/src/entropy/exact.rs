use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::{ratio, EntropyError, LabelDistribution, PairDistribution};
use crate::rules::{
    check_budget, enumerate_codes, BallCatalog, EdgeConfiguration, EdgeRegion, Endpoint, LocalRule, RuleError,
    SeedModel,
};

/// Joint law of the canonical balls at the two endpoints of an edge of
/// `T_d`: `count` of the `total` equally likely edge-ball configurations
/// produce catalog balls `(u, v)`. Independent of any rule, so cached.
#[derive(Debug)]
pub struct EdgeKernel {
    d: usize,
    t: usize,
    model: SeedModel,
    entries: Vec<(u32, u32, u64)>,
    /// A configuration realizing each entry, as `(tags, ranks)`.
    representatives: Vec<(Vec<u8>, Vec<u8>)>,
    total: u64,
}

type Counts = HashMap<(u32, u32), (u64, (Vec<u8>, Vec<u8>))>;

type KernelKey = (usize, usize, SeedModel);

fn kernels() -> &'static Mutex<HashMap<KernelKey, Arc<EdgeKernel>>> {
    static CACHE: OnceLock<Mutex<HashMap<KernelKey, Arc<EdgeKernel>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl EdgeKernel {
    pub fn get(d: usize, t: usize, model: SeedModel) -> Result<Arc<EdgeKernel>, RuleError> {
        let key = (d, t, model);
        if let Some(k) = kernels().lock().expect("kernel cache poisoned").get(&key) {
            return Ok(k.clone());
        }
        let built = Arc::new(Self::build(d, t, model)?);
        Ok(kernels().lock().expect("kernel cache poisoned").entry(key).or_insert(built).clone())
    }

    fn build(d: usize, t: usize, model: SeedModel) -> Result<Self, RuleError> {
        let catalog = BallCatalog::get(d, t, model)?;
        let region = EdgeRegion::new(d, t);
        let total = check_budget(&format!("radius-{t} edge ball of T_{d} under {model}"), model, region.size())?;
        let counts = match model {
            SeedModel::Alphabet(_) => half_class_counts(&region, &catalog, model),
            _ => brute_force_counts(&region, &catalog, model)?,
        };
        let mut sorted: Vec<_> = counts.into_iter().collect();
        sorted.sort_unstable_by_key(|e| e.0);
        let (entries, representatives): (Vec<_>, Vec<_>) =
            sorted.into_iter().map(|((u, v), (c, rep))| ((u, v, c), rep)).unzip();
        debug_assert_eq!(entries.iter().map(|e| e.2).sum::<u64>(), total);
        Ok(EdgeKernel { d, t, model, entries, representatives, total })
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

    /// `(ball at u, ball at v, count)` triples sorted by catalog indices.
    pub fn entries(&self) -> &[(u32, u32, u64)] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// An edge-ball configuration whose endpoint balls are entry `i`.
    pub fn representative(&self, i: usize) -> EdgeConfiguration {
        let (tags, ranks) = self.representatives[i].clone();
        EdgeConfiguration { d: self.d, t: self.t, model: self.model, tags, ranks }
    }
}

fn catalog_index(catalog: &BallCatalog, code: &[u8]) -> u32 {
    catalog.index_of(code).expect("every realized ball is in the catalog") as u32
}

/// Alphabet seeds on the two halves of the edge ball are independent, so the
/// kernel is a sum over pairs of canonical halves weighted by their orbits.
/// The ball at `v` for halves `(i, j)` is the ball at `u` for `(j, i)`.
fn half_class_counts(region: &EdgeRegion, catalog: &BallCatalog, model: SeedModel) -> Counts {
    let halves = enumerate_codes(region.half_layout(), model);
    let h = halves.len();
    let ball_at_u: Vec<Vec<u32>> = (0..h)
        .into_par_iter()
        .map(|i| {
            let mut tags = halves[i].0.clone();
            let split = tags.len();
            (0..h)
                .map(|j| {
                    tags.truncate(split);
                    tags.extend_from_slice(&halves[j].0);
                    catalog_index(catalog, &region.code_at(Endpoint::U, model, &tags, &[]))
                })
                .collect()
        })
        .collect();
    let mut counts = Counts::new();
    for i in 0..h {
        for j in 0..h {
            let key = (ball_at_u[i][j], ball_at_u[j][i]);
            let weight = halves[i].1 * halves[j].1;
            counts
                .entry(key)
                .or_insert_with(|| (0, ([halves[i].0.as_slice(), &halves[j].0].concat(), Vec::new())))
                .0 += weight;
        }
    }
    counts
}

fn brute_force_counts(region: &EdgeRegion, catalog: &BallCatalog, model: SeedModel) -> Result<Counts, RuleError> {
    let mut counts = Counts::new();
    for config in region.configurations(model)? {
        let keys = config.keys();
        let u = catalog_index(catalog, &region.code_at(Endpoint::U, model, &config.tags, &keys));
        let v = catalog_index(catalog, &region.code_at(Endpoint::V, model, &config.tags, &keys));
        counts.entry((u, v)).or_insert_with(|| (0, (config.tags.clone(), config.ranks.clone()))).0 += 1;
    }
    Ok(counts)
}

/// Exact law of the label at a vertex: class orbits over the raw total.
pub fn exact_vertex_law(rule: &LocalRule) -> Result<LabelDistribution, EntropyError> {
    let catalog = rule.catalog();
    let mut num = vec![0u64; rule.output_alphabet().len()];
    for (i, &o) in rule.outputs().iter().enumerate() {
        num[o as usize] += catalog.orbit(i);
    }
    let p = num.iter().map(|&x| ratio(x, catalog.total())).collect();
    LabelDistribution::from_rationals(rule.output_alphabet().to_vec(), p)
}

/// Exact vertex and edge laws by weighted enumeration of all seed
/// configurations on the vertex ball and on the edge ball.
pub fn exact_marginals(rule: &LocalRule) -> Result<(LabelDistribution, PairDistribution), EntropyError> {
    let vertex = exact_vertex_law(rule)?;
    let kernel = EdgeKernel::get(rule.d(), rule.t(), rule.model())?;
    let k = rule.output_alphabet().len();
    let out = rule.outputs();
    let mut num = vec![vec![0u64; k]; k];
    for &(u, v, c) in kernel.entries() {
        num[out[u as usize] as usize][out[v as usize] as usize] += c;
    }
    let q = num.iter().map(|row| row.iter().map(|&x| ratio(x, kernel.total())).collect()).collect();
    let pair = PairDistribution::from_rationals(rule.output_alphabet().to_vec(), q)?;
    Ok((vertex, pair))
}
