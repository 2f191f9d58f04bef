//! Exhaustive search over rule tables.
//!
//! Tables are visited in mixed-radix order: the output for canonical ball 0
//! is the most significant digit, so the rule index of a table is its value
//! in base `|V(H)|`. Digits are fixed left to right; after fixing ball `k`
//! every realizable edge pair `(i, k)` with `i <= k` is checked, and a
//! failure refutes the whole block of tables sharing that prefix.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{alphabet_impossibility_certificate, vertex_labels, HomError, ImpossibilityCertificate, ViolationWitness};
use crate::entropy::EdgeKernel;
use crate::graphs::FiniteGraph;
use crate::rules::{format_rule, BallCatalog, LocalRule, RuleError, SeedModel};

/// Prefix checks allowed before a search stops with a resume cursor.
pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;
/// Reservoir size for stored witnesses.
pub const DEFAULT_WITNESS_CAP: usize = 1000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub step_budget: u64,
    /// Rule index to start from, as reported by an earlier `BudgetExceeded`.
    pub resume_cursor: Option<BigUint>,
    pub witness_cap: usize,
    /// Answer alphabet models from the constant-seed certificate without enumerating.
    pub constant_seed_shortcut: bool,
    /// Seeds the witness reservoir.
    pub rng_seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            step_budget: DEFAULT_STEP_BUDGET,
            resume_cursor: None,
            witness_cap: DEFAULT_WITNESS_CAP,
            constant_seed_shortcut: true,
            rng_seed: 0,
        }
    }
}

fn big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.collect_str(x),
    }
}

fn big_opt<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => big(x, s),
        None => s.serialize_none(),
    }
}

/// A refuted table together with the configuration that refutes it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StoredWitness {
    #[serde(serialize_with = "big")]
    pub rule_index: BigUint,
    #[serde(skip)]
    pub table: Vec<u32>,
    #[serde(flatten)]
    pub witness: ViolationWitness,
}

impl StoredWitness {
    /// Rebuilds the refuted rule from its index and replays the witness.
    pub fn replays(&self, h: &FiniteGraph, d: usize, t: usize, model: SeedModel) -> Result<bool, HomError> {
        let catalog = BallCatalog::get(d, t, model)?;
        let table = digits_of(&self.rule_index, h.n() as u32, catalog.len());
        if table.as_deref() != Some(self.table.as_slice()) {
            return Ok(false);
        }
        let rule = LocalRule::from_outputs(catalog, vertex_labels(h), self.table.clone())?;
        self.witness.replays(&rule, h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchStats {
    /// Tables decided so far, counting every table of a refuted block.
    #[serde(serialize_with = "big")]
    pub rules_examined: BigUint,
    /// `|V(H)|^(number of canonical balls)`.
    #[serde(serialize_with = "big")]
    pub class_size: BigUint,
    pub canonical_balls: usize,
    pub steps: u64,
    pub refuted_blocks: u64,
    pub witnesses_stored: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OutcomeKind {
    Found,
    ExhaustedNone,
    ImpossibleByConstantSeeds,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub kind: OutcomeKind,
    pub d: usize,
    pub t: usize,
    pub model: SeedModel,
    #[serde(serialize_with = "big")]
    pub rules_examined: BigUint,
    pub stats: SearchStats,
    pub witness_sample: Vec<StoredWitness>,
    pub class_caveat: String,
    #[serde(serialize_with = "big_opt")]
    pub resume_cursor: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ImpossibilityCertificate>,
    /// The found rule in the rule text format.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "rule_text")]
    pub rule: Option<LocalRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn rule_text<S: Serializer>(rule: &Option<LocalRule>, s: S) -> Result<S::Ok, S::Error> {
    match rule {
        Some(r) => s.serialize_str(&format_rule(r)),
        None => s.serialize_none(),
    }
}

fn caveat(d: usize, t: usize, model: SeedModel) -> String {
    format!(
        "class-relative: only equivariant rules of radius {t} on T_{d} under seed model {model} were searched; \
         factor-of-iid maps outside this class are not covered"
    )
}

/// Base-`n` digits of `index`, most significant first, padded to `len`.
/// `None` when `index >= n^len`.
pub(crate) fn digits_of(index: &BigUint, n: u32, len: usize) -> Option<Vec<u32>> {
    if n < 2 {
        return index.is_zero().then(|| vec![0; len]);
    }
    let mut digits = if index.is_zero() { Vec::new() } else { index.to_radix_le(n) };
    if digits.len() > len {
        return None;
    }
    digits.resize(len, 0);
    digits.reverse();
    Some(digits.into_iter().map(u32::from).collect())
}

fn value_of(digits: &[u32], n: u32) -> BigUint {
    digits.iter().fold(BigUint::zero(), |acc, &x| acc * n + x)
}

pub fn search(
    h: &FiniteGraph,
    d: usize,
    t: usize,
    model: SeedModel,
    options: &SearchOptions,
) -> Result<SearchOutcome, HomError> {
    let n = h.n();
    if n == 0 || n > u8::MAX as usize + 1 {
        return Err(HomError::InvalidParams(format!("target must have 1 to 256 vertices, has {n}")));
    }
    if let (SeedModel::Alphabet(q), true) = (model, options.constant_seed_shortcut) {
        // No enumeration: the class size is reported only when the catalog is within budget.
        let balls = BallCatalog::get(d, t, model).map_or(0, |c| c.len());
        return Ok(SearchOutcome {
            kind: OutcomeKind::ImpossibleByConstantSeeds,
            d,
            t,
            model,
            rules_examined: BigUint::zero(),
            stats: SearchStats {
                rules_examined: BigUint::zero(),
                class_size: if balls == 0 { BigUint::zero() } else { BigUint::from(n).pow(balls as u32) },
                canonical_balls: balls,
                steps: 0,
                refuted_blocks: 0,
                witnesses_stored: 0,
            },
            witness_sample: Vec::new(),
            class_caveat: caveat(d, t, model),
            resume_cursor: None,
            certificate: Some(alphabet_impossibility_certificate(h, d, t, q)?),
            rule: None,
            reason: None,
        });
    }
    let catalog = BallCatalog::get(d, t, model)?;
    let balls = catalog.len();
    let class_size = BigUint::from(n).pow(balls as u32);
    let start = options.resume_cursor.clone().unwrap_or_default();
    let mut outcome = SearchOutcome {
        kind: OutcomeKind::ExhaustedNone,
        d,
        t,
        model,
        rules_examined: BigUint::zero(),
        stats: SearchStats {
            rules_examined: start.clone(),
            class_size: class_size.clone(),
            canonical_balls: balls,
            steps: 0,
            refuted_blocks: 0,
            witnesses_stored: 0,
        },
        witness_sample: Vec::new(),
        class_caveat: caveat(d, t, model),
        resume_cursor: None,
        certificate: None,
        rule: None,
        reason: None,
    };
    let kernel = match EdgeKernel::get(d, t, model) {
        Ok(k) => k,
        Err(e @ RuleError::BudgetExceeded { .. }) => {
            outcome.kind = OutcomeKind::BudgetExceeded;
            outcome.reason = Some(format!("exact edge-ball enumeration unavailable: {e}"));
            outcome.resume_cursor = Some(start.clone());
            outcome.rules_examined = start;
            return Ok(outcome);
        }
        Err(e) => return Err(e.into()),
    };
    let Some(mut digits) = digits_of(&start, n as u32, balls) else {
        outcome.rules_examined = start.clone();
        outcome.stats.rules_examined = start;
        return Ok(outcome);
    };

    // constraints[k]: kernel entries (i, k) with i <= k.
    let mut constraints: Vec<Vec<(usize, usize)>> = vec![Vec::new(); balls];
    for (e, &(u, v, _)) in kernel.entries().iter().enumerate() {
        if u <= v {
            constraints[v as usize].push((u as usize, e));
        }
    }
    let block: Vec<BigUint> = (0..balls).map(|k| BigUint::from(n).pow((balls - 1 - k) as u32)).collect();
    let mut examined = start;
    let mut tail_is_zero = digits.iter().all(|&x| x == 0);
    let mut rng = ChaCha8Rng::seed_from_u64(options.rng_seed);
    let mut k = 0usize;
    let mut steps = 0u64;
    let mut blocks = 0u64;
    let exhausted = loop {
        if k == balls {
            break false;
        }
        if steps == options.step_budget {
            outcome.kind = OutcomeKind::BudgetExceeded;
            outcome.reason = Some(format!("step budget {} reached", options.step_budget));
            outcome.resume_cursor = Some(examined.clone());
            break true;
        }
        steps += 1;
        let violated = constraints[k].iter().find(|&&(i, _)| !h.has_edge(digits[i] as usize, digits[k] as usize));
        let Some(&(i, entry)) = violated else {
            k += 1;
            continue;
        };
        let covered = if tail_is_zero { block[k].clone() } else { &block[k] - value_of(&digits[k + 1..], n as u32) };
        blocks += 1;
        if options.witness_cap > 0 {
            let slot = if outcome.witness_sample.len() < options.witness_cap {
                Some(outcome.witness_sample.len())
            } else {
                let j = rng.random_range(0..blocks);
                (j < options.witness_cap as u64).then_some(j as usize)
            };
            if let Some(slot) = slot {
                let (a, b) = (digits[i] as usize, digits[k] as usize);
                let stored = StoredWitness {
                    rule_index: examined.clone(),
                    table: digits.clone(),
                    witness: ViolationWitness {
                        configuration: kernel.representative(entry),
                        outputs: (a.to_string(), b.to_string()),
                        non_edge: (a, b),
                    },
                };
                if slot == outcome.witness_sample.len() {
                    outcome.witness_sample.push(stored);
                } else {
                    outcome.witness_sample[slot] = stored;
                }
            }
        }
        examined += covered;
        digits[k + 1..].iter_mut().for_each(|x| *x = 0);
        tail_is_zero = true;
        digits[k] += 1;
        while digits[k] == n as u32 {
            digits[k] = 0;
            if k == 0 {
                break;
            }
            k -= 1;
            digits[k] += 1;
        }
        if k == 0 && digits[0] == 0 {
            break true;
        }
    };
    if !exhausted {
        let rule = LocalRule::from_outputs(catalog, vertex_labels(h), digits)?;
        debug_assert_eq!(super::is_homomorphism_rule(&rule, h), Ok(super::HomCheck::Pass));
        outcome.kind = OutcomeKind::Found;
        outcome.rule = Some(rule);
    }
    outcome.witness_sample.sort_by(|a, b| a.rule_index.cmp(&b.rule_index));
    outcome.rules_examined = examined.clone();
    outcome.stats = SearchStats {
        rules_examined: examined,
        class_size,
        canonical_balls: balls,
        steps,
        refuted_blocks: blocks,
        witnesses_stored: outcome.witness_sample.len(),
    };
    Ok(outcome)
}
