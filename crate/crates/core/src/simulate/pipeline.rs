use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{labels_as_vertices, SimError, SCHEMA_VERSION};
use crate::entropy::{
    audit, decimal_rational, exact_marginals, mc_marginals, min_girth_constant, tail_select, AuditInputs, EntropyError,
    GirthConstant, LabelDistribution, PairDistribution, Provenance, TailReport,
};
use crate::graphs::{induced_two_coloring, FiniteGraph, Girth, GraphError, Side};
use crate::rules::LocalRule;

/// Classification when no step refutes the candidate.
pub const NO_REFUTATION: &str = "no refutation at these parameters";

/// Where the rule's label laws come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginalMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// `fail` refutes the candidate. `inconclusive` means the step's
/// conclusion was not reached but nothing is contradicted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportStep {
    pub status: StepStatus,
    pub mass_outside: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_outside_exact: Option<String>,
    /// Ordered label pairs off `E(H)` with positive mass.
    pub outside_pairs: Vec<(String, String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyStep {
    pub status: StepStatus,
    pub h_vertex: f64,
    /// `3 ln r`.
    pub bound: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailStep {
    pub status: StepStatus,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "C_r")]
    pub c_r: GirthConstant,
    /// `C < C_r`: the lemma's hypothesis on `C` is weakened and its
    /// conclusion is only checked, not guaranteed.
    pub hypothesis_weakened: bool,
    /// `C - 1` reached the number of labels, so `S` is every label.
    pub c_too_large: bool,
    pub s: Vec<String>,
    pub s_mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_mass_exact: Option<String>,
    pub outside_mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside_mass_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AcyclicStep {
    pub status: StepStatus,
    pub s_size: usize,
    pub girth: Girth,
    /// `girth(H) > |S|`, so `H[S]` is a forest without looking.
    pub guaranteed_by_girth: bool,
    pub acyclic: bool,
    /// Side of each label in `S`.
    pub coloring: BTreeMap<String, Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainStep {
    pub status: StepStatus,
    /// Mass of the vertices whose label lies in `S`.
    pub domain_mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_mass_exact: Option<String>,
    /// `1 - c0`.
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    /// As configured; every verdict is conditional on it.
    pub c0: f64,
    #[serde(rename = "C")]
    pub c: u64,
    pub r: usize,
    pub provenance: Provenance,
    pub support: SupportStep,
    pub entropy: EntropyStep,
    pub tail: TailStep,
    pub acyclic: AcyclicStep,
    pub domain: DomainStep,
    /// First failing step, 1 to 5.
    pub refuted_at: Option<u8>,
    pub classification: String,
}

impl PipelineReport {
    pub fn statuses(&self) -> [StepStatus; 5] {
        [self.support.status, self.entropy.status, self.tail.status, self.acyclic.status, self.domain.status]
    }
}

/// Runs the five steps on the laws of `rule`, whose labels must name
/// vertices of the regular target `h` by index.
pub fn theorem_pipeline(
    rule: &LocalRule,
    h: &FiniteGraph,
    c0: f64,
    c: u64,
    mode: MarginalMode,
) -> Result<PipelineReport, SimError> {
    labels_as_vertices(rule.output_alphabet(), h)?;
    let (vertex, pair) = match mode {
        MarginalMode::Exact => exact_marginals(rule)?,
        MarginalMode::MonteCarlo { samples, seed } => mc_marginals(rule, samples, seed)?,
    };
    theorem_pipeline_from_laws(&vertex, &pair, h, c0, c)
}

/// The pipeline on given laws, for laws that no rule in the supported
/// classes produces.
pub fn theorem_pipeline_from_laws(
    vertex: &LabelDistribution,
    pair: &PairDistribution,
    h: &FiniteGraph,
    c0: f64,
    c: u64,
) -> Result<PipelineReport, SimError> {
    let r = h.regular_degree().ok_or(SimError::IrregularTarget)?;
    let tv = labels_as_vertices(vertex.labels(), h)?;
    let labels = vertex.labels();
    let c0_exact = decimal_rational(c0)?;
    let audited = audit(AuditInputs { vertex, pair, r: Some(r), h: None })?;

    let support = support_step(pair, h, &tv);

    let cap = audited.verdict("vertex_entropy_cap").expect("cap is checked when r is given");
    let entropy = EntropyStep {
        status: if cap.pass { StepStatus::Pass } else { StepStatus::Fail },
        h_vertex: audited.h_vertex,
        bound: 3.0 * (r as f64).ln(),
        margin: cap.margin,
    };

    let c_r = min_girth_constant(r as u64, c0)?;
    let hypothesis_weakened = c_r.value.as_ref().is_none_or(|v| BigUint::from(c) < *v);
    let (s_indices, tail_report) = match tail_select(vertex, c, c0) {
        Ok(rep) => (rep.s_indices.clone(), Some(rep)),
        Err(EntropyError::CTooLarge { .. }) => ((0..labels.len()).collect(), None),
        Err(e) => return Err(e.into()),
    };
    let s_exact: Option<BigRational> = vertex.exact().map(|e| s_indices.iter().map(|&i| &e[i]).sum());
    let s_mass: f64 = s_indices.iter().map(|&i| vertex.p()[i]).sum();
    let outside_mass = (1.0 - s_mass).max(0.0);
    let triggered = match &s_exact {
        Some(m) => BigRational::one() - m >= c0_exact,
        None => outside_mass >= c0,
    };
    let tail = TailStep {
        status: match (triggered, hypothesis_weakened) {
            (false, _) => StepStatus::Pass,
            (true, false) => StepStatus::Fail,
            (true, true) => StepStatus::Inconclusive,
        },
        c,
        c_r,
        hypothesis_weakened,
        c_too_large: tail_report.is_none(),
        s: s_indices.iter().map(|&i| labels[i].clone()).collect(),
        s_mass,
        s_mass_exact: s_exact.as_ref().map(ratio_text),
        outside_mass,
        outside_mass_exact: s_exact.as_ref().map(|m| ratio_text(&(BigRational::one() - m))),
        tail: tail_report,
    };

    let s_vertices: Vec<usize> = s_indices.iter().map(|&i| tv[i]).collect();
    let girth = h.girth();
    let label_of = |v: usize| tv.iter().position(|&x| x == v).map_or_else(|| v.to_string(), |i| labels[i].clone());
    let (acyclic_ok, coloring, cycle) = match induced_two_coloring(h, &s_vertices) {
        Ok(col) => (true, col.into_iter().map(|(v, side)| (label_of(v), side)).collect(), None),
        Err(GraphError::InducedCycle { cycle }) => {
            (false, BTreeMap::new(), Some(cycle.into_iter().map(label_of).collect()))
        }
        Err(e) => return Err(e.into()),
    };
    let acyclic = AcyclicStep {
        status: if acyclic_ok { StepStatus::Pass } else { StepStatus::Inconclusive },
        s_size: s_vertices.len(),
        girth,
        guaranteed_by_girth: girth.exceeds(s_vertices.len()),
        acyclic: acyclic_ok,
        coloring,
        cycle,
    };

    let threshold_exact = BigRational::one() - &c0_exact;
    let large = match &s_exact {
        Some(m) => *m >= threshold_exact,
        None => s_mass >= 1.0 - c0,
    };
    let domain = DomainStep {
        status: match (acyclic_ok, large) {
            (false, _) => StepStatus::Skipped,
            (true, true) => StepStatus::Fail,
            (true, false) => StepStatus::Pass,
        },
        domain_mass: s_mass,
        domain_mass_exact: s_exact.as_ref().map(ratio_text),
        threshold: 1.0 - c0,
    };

    let mut report = PipelineReport {
        schema_version: SCHEMA_VERSION,
        c0,
        c,
        r,
        provenance: audited.provenance,
        support,
        entropy,
        tail,
        acyclic,
        domain,
        refuted_at: None,
        classification: NO_REFUTATION.into(),
    };
    const REASONS: [&str; 5] = [
        "not a homomorphism (support)",
        "vertex entropy exceeds 3 ln r",
        "large-preimage conclusion fails although C >= C_r",
        "acyclicity",
        "partial 2-coloring domain reaches 1 - c0",
    ];
    if let Some(i) = report.statuses().iter().position(|s| *s == StepStatus::Fail) {
        report.refuted_at = Some(i as u8 + 1);
        report.classification = REASONS[i].into();
    }
    Ok(report)
}

fn support_step(pair: &PairDistribution, h: &FiniteGraph, tv: &[usize]) -> SupportStep {
    let labels = pair.labels();
    let off = |a: usize, b: usize| !h.has_edge(tv[a], tv[b]);
    let outside_pairs: Vec<_> = pair
        .support()
        .filter(|&(a, b, _)| off(a, b))
        .map(|(a, b, x)| (labels[a].clone(), labels[b].clone(), x))
        .collect();
    let mass_outside_exact: Option<BigRational> = pair.exact().map(|e| {
        let mut sum = BigRational::from_integer(0.into());
        for (a, row) in e.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                if off(a, b) {
                    sum += x;
                }
            }
        }
        sum
    });
    let mass_outside = outside_pairs.iter().fold(0.0, |acc, p| acc + p.2);
    SupportStep {
        status: if outside_pairs.is_empty() { StepStatus::Pass } else { StepStatus::Fail },
        mass_outside,
        mass_outside_exact: mass_outside_exact.as_ref().map(ratio_text),
        outside_pairs,
    }
}

fn ratio_text(r: &BigRational) -> String {
    crate::entropy::ratio_string(r)
}
