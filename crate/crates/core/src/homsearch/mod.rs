//! Does a class of finite-radius rules contain a homomorphism into `H`?
//!
//! A rule is a homomorphism rule when, for every seed configuration on an
//! edge ball of `T_d`, the two endpoint outputs are adjacent in `H`. Every
//! negative answer here is relative to the searched class (radius and seed
//! model), never a statement about all factor-of-i.i.d. maps.

mod search;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::FiniteGraph;
use crate::rules::{evaluate, EdgeConfiguration, EdgeRegion, Endpoint, LocalRule, RuleError, SeedModel};

pub use search::{
    search, OutcomeKind, SearchOptions, SearchOutcome, SearchStats, StoredWitness, DEFAULT_STEP_BUDGET,
    DEFAULT_WITNESS_CAP,
};

/// Samples drawn by the checker when exact enumeration is over budget.
pub const DEFAULT_FALSIFICATION_SAMPLES: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("rule outputs {found:?} are not the vertex names 0..{n} of the target")]
    AlphabetMismatch { found: Vec<String>, n: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Vertex names of a target graph as used in rule output alphabets.
pub fn vertex_labels(h: &FiniteGraph) -> Vec<String> {
    (0..h.n()).map(|v| v.to_string()).collect()
}

pub(crate) fn check_alphabet(rule: &LocalRule, h: &FiniteGraph) -> Result<(), HomError> {
    if rule.output_alphabet() != vertex_labels(h).as_slice() {
        return Err(HomError::AlphabetMismatch { found: rule.output_alphabet().to_vec(), n: h.n() });
    }
    Ok(())
}

/// An edge-ball configuration on which the rule maps the edge to a non-edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationWitness {
    pub configuration: EdgeConfiguration,
    /// Outputs at the two endpoints `(u, v)`.
    pub outputs: (String, String),
    pub non_edge: (usize, usize),
}

impl ViolationWitness {
    /// Re-evaluates the rule on both endpoint balls through the raw-ball
    /// path and reports whether the stored non-edge is reproduced.
    pub fn replays(&self, rule: &LocalRule, h: &FiniteGraph) -> Result<bool, HomError> {
        let region = EdgeRegion::new(rule.d(), rule.t());
        let a = evaluate(rule, &self.configuration.ball(&region, Endpoint::U)?)?;
        let b = evaluate(rule, &self.configuration.ball(&region, Endpoint::V)?)?;
        let (Ok(x), Ok(y)) = (a.parse::<usize>(), b.parse::<usize>()) else {
            return Ok(false);
        };
        Ok((a, b) == self.outputs && (x, y) == self.non_edge && !h.has_edge(x, y))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomCheck {
    /// Every edge-ball configuration was checked.
    Pass,
    /// With exact enumeration, the lexicographically first violating configuration.
    Violation { witness: ViolationWitness, exact: bool },
    /// Exact enumeration was over budget and sampling found nothing.
    NoViolationFound { samples: u64 },
}

impl HomCheck {
    pub fn is_violation(&self) -> bool {
        matches!(self, HomCheck::Violation { .. })
    }
}

fn witness_at(
    rule: &LocalRule,
    region: &EdgeRegion,
    h: &FiniteGraph,
    config: &EdgeConfiguration,
    keys: &[u128],
) -> Option<ViolationWitness> {
    let out = |e| {
        let code = region.code_at(e, rule.model(), &config.tags, keys);
        rule.output_for_code(&code).expect("edge balls are in the catalog") as usize
    };
    let (a, b) = (out(Endpoint::U), out(Endpoint::V));
    (!h.has_edge(a, b)).then(|| ViolationWitness {
        configuration: config.clone(),
        outputs: (rule.label(a).to_string(), rule.label(b).to_string()),
        non_edge: (a, b),
    })
}

pub fn is_homomorphism_rule(rule: &LocalRule, h: &FiniteGraph) -> Result<HomCheck, HomError> {
    is_homomorphism_rule_with(rule, h, DEFAULT_FALSIFICATION_SAMPLES, 0)
}

/// Scans edge-ball configurations in lexicographic order; over budget,
/// falls back to `samples` random configurations drawn from `rng_seed`.
pub fn is_homomorphism_rule_with(
    rule: &LocalRule,
    h: &FiniteGraph,
    samples: u64,
    rng_seed: u64,
) -> Result<HomCheck, HomError> {
    check_alphabet(rule, h)?;
    let region = EdgeRegion::new(rule.d(), rule.t());
    let configs = match region.configurations(rule.model()) {
        Ok(configs) => configs,
        Err(RuleError::BudgetExceeded { .. }) => return falsify(rule, &region, h, samples, rng_seed),
        Err(e) => return Err(e.into()),
    };
    for config in configs {
        if let Some(witness) = witness_at(rule, &region, h, &config, &config.keys()) {
            return Ok(HomCheck::Violation { witness, exact: true });
        }
    }
    Ok(HomCheck::Pass)
}

fn falsify(
    rule: &LocalRule,
    region: &EdgeRegion,
    h: &FiniteGraph,
    samples: u64,
    rng_seed: u64,
) -> Result<HomCheck, HomError> {
    let model = rule.model();
    let n = region.size();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let q = model.tags().map_or(1, u64::from);
    for _ in 0..samples {
        let tags: Vec<u8> = match model.tags() {
            Some(_) => (0..n).map(|_| (rng.next_u64() % q) as u8).collect(),
            None => Vec::new(),
        };
        let keys: Vec<u128> = if model.has_ranks() {
            (0..n).map(|p| ((rng.next_u64() as u128) << 32) | p as u128).collect()
        } else {
            Vec::new()
        };
        let config = EdgeConfiguration::from_parts(rule.d(), rule.t(), model, &tags, &keys);
        if let Some(witness) = witness_at(rule, region, h, &config, &config.keys()) {
            return Ok(HomCheck::Violation { witness, exact: false });
        }
    }
    Ok(HomCheck::NoViolationFound { samples })
}

/// Machine-checkable proof that no alphabet-model rule of radius `t` is a
/// homomorphism into a loopless target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImpossibilityCertificate {
    pub d: usize,
    pub t: usize,
    pub model: SeedModel,
    pub configuration: EdgeConfiguration,
    /// Canonical code (hex) of the ball seen by both endpoints.
    pub ball_code: String,
    pub reasoning: Vec<String>,
}

impl ImpossibilityCertificate {
    /// Replays the certificate against a candidate rule: both endpoints
    /// must receive the same output, and that loop must be a non-edge of `h`.
    pub fn refutes(&self, rule: &LocalRule, h: &FiniteGraph) -> Result<Option<ViolationWitness>, HomError> {
        check_alphabet(rule, h)?;
        if (rule.d(), rule.t(), rule.model()) != (self.d, self.t, self.model) {
            return Err(HomError::InvalidParams("certificate and rule classes differ".into()));
        }
        let region = EdgeRegion::new(self.d, self.t);
        let a = rule.evaluate(&self.configuration.ball(&region, Endpoint::U)?)?;
        let b = rule.evaluate(&self.configuration.ball(&region, Endpoint::V)?)?;
        Ok((a == b && !h.has_edge(a, b)).then(|| ViolationWitness {
            configuration: self.configuration.clone(),
            outputs: (rule.label(a).to_string(), rule.label(b).to_string()),
            non_edge: (a, b),
        }))
    }
}

pub fn alphabet_impossibility_certificate(
    h: &FiniteGraph,
    d: usize,
    t: usize,
    q: u8,
) -> Result<ImpossibilityCertificate, HomError> {
    let model = SeedModel::alphabet(q)?;
    if d < 2 {
        return Err(HomError::InvalidParams(format!("degree {d} < 2")));
    }
    if let Some(v) = (0..h.n()).find(|&v| h.has_edge(v, v)) {
        return Err(HomError::InvalidParams(format!("target has a loop at {v}")));
    }
    let configuration = EdgeConfiguration::all_zero(d, t, model);
    let region = EdgeRegion::new(d, t);
    let code_u = region.code_at(Endpoint::U, model, &configuration.tags, &[]);
    let code_v = region.code_at(Endpoint::V, model, &configuration.tags, &[]);
    debug_assert_eq!(code_u, code_v);
    let ball_code = hex::encode(&code_u);
    let reasoning = vec![
        format!("every vertex of the radius-{t} edge ball of T_{d} carries tag 0"),
        format!("both endpoints see the canonical ball {ball_code}"),
        "an equivariant rule maps equal canonical balls to equal outputs".to_string(),
        format!("the target on {} vertices has no loops, so the edge is mapped to a non-edge", h.n()),
        "this configuration has probability q^-(edge ball size) > 0".to_string(),
    ];
    Ok(ImpossibilityCertificate { d, t, model, configuration, ball_code, reasoning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::named_graph;
    use crate::rules::random_rule;

    #[test]
    fn constant_rule_is_refuted() {
        let h = named_graph("K4").unwrap();
        let rule = LocalRule::constant(3, 1, SeedModel::Rank, vertex_labels(&h), "2").unwrap();
        let HomCheck::Violation { witness, exact } = is_homomorphism_rule(&rule, &h).unwrap() else {
            panic!("constant rule passed");
        };
        assert!(exact);
        assert_eq!(witness.non_edge, (2, 2));
        assert_eq!(witness.configuration.ranks, vec![1, 2, 3, 4, 5, 6]);
        assert!(witness.replays(&rule, &h).unwrap());
    }

    #[test]
    fn alphabet_rules_fail_at_all_zero() {
        let h = named_graph("C5").unwrap();
        let rule = random_rule(3, 1, SeedModel::Alphabet(2), vertex_labels(&h), 4).unwrap();
        let HomCheck::Violation { witness, .. } = is_homomorphism_rule(&rule, &h).unwrap() else {
            panic!("alphabet rule passed");
        };
        assert_eq!(witness.configuration, EdgeConfiguration::all_zero(3, 1, SeedModel::Alphabet(2)));
    }

    #[test]
    fn rank_radius_one_rule_vs_c5_has_equal_inputs() {
        let h = named_graph("C5").unwrap();
        // Injective on the four balls, so only equal inputs can collide.
        let table = vec![0, 1, 2, 3];
        let rule = LocalRule::from_outputs(
            crate::rules::BallCatalog::get(3, 1, SeedModel::Rank).unwrap(),
            vertex_labels(&h),
            table,
        )
        .unwrap();
        let HomCheck::Violation { witness, .. } = is_homomorphism_rule(&rule, &h).unwrap() else {
            panic!("rule passed");
        };
        assert!(witness.replays(&rule, &h).unwrap());
    }

    #[test]
    fn sampled_falsification_at_radius_two() {
        let h = named_graph("K2").unwrap();
        let rule = random_rule(3, 2, SeedModel::Rank, vertex_labels(&h), 1).unwrap();
        let check = is_homomorphism_rule_with(&rule, &h, 10_000, 3).unwrap();
        let HomCheck::Violation { witness, exact } = check else { panic!("no violation found") };
        assert!(!exact);
        assert!(witness.replays(&rule, &h).unwrap());
    }

    #[test]
    fn certificate_replays() {
        let h = named_graph("Petersen").unwrap();
        let cert = alphabet_impossibility_certificate(&h, 3, 1, 2).unwrap();
        assert!(cert.configuration.tags.iter().all(|&x| x == 0));
        for seed in 0..10 {
            let rule = random_rule(3, 1, SeedModel::Alphabet(2), vertex_labels(&h), seed).unwrap();
            let w = cert.refutes(&rule, &h).unwrap().expect("certificate refutes");
            assert_eq!(w.non_edge.0, w.non_edge.1);
        }
    }

    #[test]
    fn alphabet_mismatch() {
        let h = named_graph("K2").unwrap();
        let rule = LocalRule::max_seed_independent(3).unwrap();
        assert!(matches!(is_homomorphism_rule(&rule, &h), Err(HomError::AlphabetMismatch { .. })));
    }
}
