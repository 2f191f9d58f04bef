//! Running tree rules on finite graphs, and the refutation pipeline that
//! strings the entropy, tail and coloring steps together.
//!
//! A vertex of a finite graph is *covered* when its radius-`t` ball is an
//! induced tree in which every vertex above depth `t` has degree `d`: the
//! rule then sees exactly what it would see on `T_d`. Uncovered vertices are
//! left unlabeled rather than approximated.

mod pipeline;

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::entropy::EntropyError;
use crate::graphs::{FiniteGraph, GraphError, Side};
use crate::homsearch::HomError;
use crate::rules::{ball_preorder, encode, LocalRule, RuleError, SeedModel};

pub use pipeline::{
    theorem_pipeline, theorem_pipeline_from_laws, AcyclicStep, DomainStep, EntropyStep, MarginalMode, PipelineReport,
    StepStatus, SupportStep, TailStep, NO_REFUTATION,
};

/// Version of the JSON layout of [`SimulationReport`] and [`PipelineReport`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("vertex {vertex} has degree {degree} > d = {d}")]
    DegreeMismatch { vertex: usize, degree: usize, d: usize },
    #[error("target graph is not regular")]
    IrregularTarget,
    #[error("label `{0}` is not a vertex of the target")]
    LabelNotVertex(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Output index per vertex; `None` for uncovered vertices.
pub type Labeling = Vec<Option<usize>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependentSetStats {
    pub in_count: u64,
    /// `in_count` over labeled vertices.
    pub in_fraction: f64,
    pub adjacent_in_in: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub t: usize,
    pub model: SeedModel,
    pub rng_seed: u64,
    pub labeled: u64,
    pub covered_fraction: f64,
    /// Counts per output label, zero counts included; sums to `labeled`.
    pub histogram: BTreeMap<String, u64>,
    /// Vertices whose 64-bit seed repeats an earlier vertex's seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_collisions: Option<u64>,
    /// Union bound `n(n-1)/2^65` on the chance of any collision.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collision_probability: Option<f64>,
    /// Edges with both endpoints labeled.
    pub covered_edges: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_edges: Option<u64>,
    /// Covered edges whose labels are not adjacent in the target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_edge_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent_set: Option<IndependentSetStats>,
}

/// Seeds of one vertex, drawn from its own ChaCha stream so that any vertex
/// can be seeded independently of the others.
fn vertex_seed(rng_seed: u64, v: usize, model: SeedModel) -> (u8, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(v as u64);
    let tag = model.tags().map_or(0, |q| rng.random_range(0..q));
    let key = if model.has_ranks() { rng.next_u64() } else { 0 };
    (tag, key)
}

/// Preorder of the radius-`t` ball around `v` if it is an induced tree with
/// the branching of `T_d`. `stamp` is scratch space of length `n`; marks
/// are `v + 1`, so stale marks from other roots never match.
fn tree_ball(g: &FiniteGraph, d: usize, t: usize, v: usize, stamp: &mut [usize]) -> Option<Vec<usize>> {
    let ball = ball_preorder(d, t, v, |x| g.neighbors(x)).ok()?;
    let mark = v + 1;
    for &x in &ball {
        if stamp[x] == mark {
            return None;
        }
        stamp[x] = mark;
    }
    // Distinct vertices and exactly |ball| - 1 internal edges: a tree.
    let internal: usize = ball.iter().map(|&x| g.neighbors(x).iter().filter(|&&y| stamp[y] == mark).count()).sum();
    (internal == 2 * (ball.len() - 1)).then_some(ball)
}

/// Seeds every vertex and applies `rule` at each covered vertex.
pub fn run_on_graph(
    rule: &LocalRule,
    g: &FiniteGraph,
    rng_seed: u64,
) -> Result<(Labeling, SimulationReport), SimError> {
    run_on_graph_with(rule, g, rng_seed, None)
}

/// [`run_on_graph`], also counting covered edges whose labels are not edges
/// of `target`. Labels must then name target vertices by index.
pub fn run_on_graph_with(
    rule: &LocalRule,
    g: &FiniteGraph,
    rng_seed: u64,
    target: Option<&FiniteGraph>,
) -> Result<(Labeling, SimulationReport), SimError> {
    let (d, t, model) = (rule.d(), rule.t(), rule.model());
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) > d) {
        return Err(SimError::DegreeMismatch { vertex: v, degree: g.degree(v), d });
    }
    let target_vertex = target.map(|h| label_vertices(rule, h)).transpose()?;
    let n = g.n();
    let seeds: Vec<(u8, u64)> = (0..n).into_par_iter().map(|v| vertex_seed(rng_seed, v, model)).collect();
    let layout = rule.catalog().layout();
    let labeling: Labeling = (0..n)
        .into_par_iter()
        .map_init(
            || vec![0usize; n],
            |stamp, v| {
                let ball = tree_ball(g, d, t, v, stamp)?;
                let tags: Vec<u8> =
                    if model.tags().is_some() { ball.iter().map(|&x| seeds[x].0).collect() } else { Vec::new() };
                // Vertex index breaks ties between equal 64-bit seeds.
                let keys: Vec<u128> = if model.has_ranks() {
                    ball.iter().map(|&x| (seeds[x].1 as u128) << 64 | x as u128).collect()
                } else {
                    Vec::new()
                };
                let code = encode(layout, model, &tags, &keys);
                Some(rule.output_for_code(&code).expect("tree balls are catalog balls") as usize)
            },
        )
        .collect();

    let k = rule.output_alphabet().len();
    let mut counts = vec![0u64; k];
    for o in labeling.iter().flatten() {
        counts[*o] += 1;
    }
    let labeled: u64 = counts.iter().sum();
    let histogram = rule.output_alphabet().iter().cloned().zip(counts.iter().copied()).collect();

    let (seed_collisions, collision_probability) = if model.has_ranks() {
        let mut keys: Vec<u64> = seeds.iter().map(|s| s.1).collect();
        keys.par_sort_unstable();
        let repeats = keys.windows(2).filter(|w| w[0] == w[1]).count() as u64;
        let nf = n as f64;
        (Some(repeats), Some((nf * (nf - 1.0) / 2f64.powi(65)).min(1.0)))
    } else {
        (None, None)
    };

    let covered: Vec<(usize, usize)> = g.edges().filter_map(|(x, y)| Some((labeling[x]?, labeling[y]?))).collect();
    let covered_edges = covered.len() as u64;
    let fraction = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let violating_edges = target
        .zip(target_vertex.as_ref())
        .map(|(h, tv)| covered.iter().filter(|&&(a, b)| !h.has_edge(tv[a], tv[b])).count() as u64);
    let independent_set = in_out_indices(rule).map(|(i_in, _)| {
        let in_count = counts[i_in];
        IndependentSetStats {
            in_count,
            in_fraction: fraction(in_count, labeled),
            adjacent_in_in: covered.iter().filter(|&&(a, b)| a == i_in && b == i_in).count() as u64,
        }
    });

    let report = SimulationReport {
        schema_version: SCHEMA_VERSION,
        n,
        m: g.m(),
        d,
        t,
        model,
        rng_seed,
        labeled,
        covered_fraction: fraction(labeled, n as u64),
        histogram,
        seed_collisions,
        collision_probability,
        covered_edges,
        violating_edges,
        violating_edge_fraction: violating_edges.map(|v| fraction(v, covered_edges)),
        independent_set,
    };
    Ok((labeling, report))
}

/// Indices of `IN` and `OUT` when those are exactly the output labels.
fn in_out_indices(rule: &LocalRule) -> Option<(usize, usize)> {
    let labels = rule.output_alphabet();
    if labels.len() != 2 {
        return None;
    }
    let pos = |s: &str| labels.iter().position(|l| l == s);
    Some((pos("IN")?, pos("OUT")?))
}

/// Target vertex named by each output label.
pub(crate) fn label_vertices(rule: &LocalRule, h: &FiniteGraph) -> Result<Vec<usize>, SimError> {
    labels_as_vertices(rule.output_alphabet(), h)
}

pub(crate) fn labels_as_vertices(labels: &[String], h: &FiniteGraph) -> Result<Vec<usize>, SimError> {
    labels
        .iter()
        .map(|l| l.parse::<usize>().ok().filter(|&v| v < h.n()).ok_or_else(|| SimError::LabelNotVertex(l.clone())))
        .collect()
}

/// `vertex label` lines for labeled vertices; uncovered vertices are omitted.
pub fn format_labeling(rule: &LocalRule, labeling: &Labeling) -> String {
    let mut out = String::new();
    for (v, o) in labeling.iter().enumerate() {
        if let Some(o) = o {
            out.push_str(&format!("{v} {}\n", rule.label(*o)));
        }
    }
    out
}

/// Composes a labeling with a coloring of target vertices: a vertex gets
/// the side of its label when that label is a colored target vertex.
pub fn compose_two_coloring(
    rule: &LocalRule,
    h: &FiniteGraph,
    labeling: &Labeling,
    coloring: &BTreeMap<usize, Side>,
) -> Result<Vec<Option<Side>>, SimError> {
    let tv = label_vertices(rule, h)?;
    Ok(labeling.iter().map(|o| o.and_then(|o| coloring.get(&tv[o]).copied())).collect())
}
