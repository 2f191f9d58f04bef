use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ball::{canonicalize, RawBall};
use super::catalog::BallCatalog;
use super::{RuleError, SeedModel};

pub const BUILTIN_RULES: [&str; 4] = ["constant", "max_seed_independent", "rank_table", "alphabet_table"];

/// A total table from the canonical balls of `(d, t, seed_model)` to an
/// output alphabet. Outputs are stored as indices into the alphabet.
#[derive(Clone)]
pub struct LocalRule {
    catalog: Arc<BallCatalog>,
    output_alphabet: Vec<String>,
    table: Vec<u32>,
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalRule")
            .field("d", &self.d())
            .field("t", &self.t())
            .field("model", &self.model())
            .field("output_alphabet", &self.output_alphabet)
            .field("table", &self.table)
            .finish()
    }
}

impl PartialEq for LocalRule {
    fn eq(&self, other: &Self) -> bool {
        (self.d(), self.t(), self.model()) == (other.d(), other.t(), other.model())
            && self.output_alphabet == other.output_alphabet
            && self.table == other.table
    }
}

fn check_alphabet(alphabet: &[String]) -> Result<(), RuleError> {
    if alphabet.is_empty() {
        return Err(RuleError::InvalidParams("empty output alphabet".into()));
    }
    for (i, l) in alphabet.iter().enumerate() {
        if l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == ',') {
            return Err(RuleError::InvalidParams(format!("label `{l}` must be nonempty without whitespace or commas")));
        }
        if alphabet[..i].contains(l) {
            return Err(RuleError::InvalidParams(format!("label `{l}` repeated")));
        }
    }
    Ok(())
}

impl LocalRule {
    /// Rule from a table given as outputs in catalog order.
    pub fn from_outputs(
        catalog: Arc<BallCatalog>,
        output_alphabet: Vec<String>,
        table: Vec<u32>,
    ) -> Result<Self, RuleError> {
        check_alphabet(&output_alphabet)?;
        if table.len() != catalog.len() {
            return Err(RuleError::IncompleteTable { expected: catalog.len(), provided: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&o| o as usize >= output_alphabet.len()) {
            return Err(RuleError::UnknownLabel(format!("#{bad}")));
        }
        Ok(LocalRule { catalog, output_alphabet, table })
    }

    /// Rule from an explicit `code -> label` mapping, which must cover every
    /// canonical ball.
    pub fn from_table<I>(
        d: usize,
        t: usize,
        model: SeedModel,
        output_alphabet: Vec<String>,
        entries: I,
    ) -> Result<Self, RuleError>
    where
        I: IntoIterator<Item = (Vec<u8>, String)>,
    {
        check_alphabet(&output_alphabet)?;
        let catalog = BallCatalog::get(d, t, model)?;
        let mut table: Vec<Option<u32>> = vec![None; catalog.len()];
        for (code, label) in entries {
            let i = catalog.index_of(&code).ok_or_else(|| RuleError::UnknownCode(hex::encode(&code)))?;
            let o = output_alphabet.iter().position(|l| *l == label).ok_or(RuleError::UnknownLabel(label))?;
            table[i] = Some(o as u32);
        }
        let provided = table.iter().flatten().count();
        if provided != catalog.len() {
            return Err(RuleError::IncompleteTable { expected: catalog.len(), provided });
        }
        let table = table.into_iter().map(|o| o.expect("checked")).collect();
        Ok(LocalRule { catalog, output_alphabet, table })
    }

    pub fn constant(
        d: usize,
        t: usize,
        model: SeedModel,
        output_alphabet: Vec<String>,
        label: &str,
    ) -> Result<Self, RuleError> {
        let catalog = BallCatalog::get(d, t, model)?;
        let o = output_alphabet
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| RuleError::UnknownLabel(label.to_string()))?;
        let table = vec![o as u32; catalog.len()];
        Self::from_outputs(catalog, output_alphabet, table)
    }

    /// Radius-1 rank rule: `IN` iff the root's seed is the largest in its
    /// closed neighbourhood, `OUT` otherwise. Its `IN` set is independent.
    pub fn max_seed_independent(d: usize) -> Result<Self, RuleError> {
        let catalog = BallCatalog::get(d, 1, SeedModel::Rank)?;
        let top = (d + 1) as u8;
        let table = catalog.codes().map(|c| if c[0] == top { 0 } else { 1 }).collect();
        Self::from_outputs(catalog, vec!["IN".into(), "OUT".into()], table)
    }

    pub fn catalog(&self) -> &Arc<BallCatalog> {
        &self.catalog
    }

    pub fn d(&self) -> usize {
        self.catalog.d()
    }

    pub fn t(&self) -> usize {
        self.catalog.t()
    }

    pub fn model(&self) -> SeedModel {
        self.catalog.model()
    }

    pub fn output_alphabet(&self) -> &[String] {
        &self.output_alphabet
    }

    /// Output index per canonical ball, in catalog order.
    pub fn outputs(&self) -> &[u32] {
        &self.table
    }

    pub fn label(&self, output: usize) -> &str {
        &self.output_alphabet[output]
    }

    pub(crate) fn output_for_code(&self, code: &[u8]) -> Option<u32> {
        self.catalog.index_of(code).map(|i| self.table[i])
    }

    /// Output index for a raw ball.
    pub fn evaluate(&self, raw: &RawBall) -> Result<usize, RuleError> {
        if (raw.d(), raw.t(), raw.model()) != (self.d(), self.t(), self.model()) {
            return Err(RuleError::MalformedBall(format!(
                "ball is (d={}, t={}, {}), rule expects (d={}, t={}, {})",
                raw.d(),
                raw.t(),
                raw.model(),
                self.d(),
                self.t(),
                self.model()
            )));
        }
        let c = canonicalize(raw)?;
        self.output_for_code(c.code()).map(|o| o as usize).ok_or_else(|| RuleError::UnknownCode(c.hex()))
    }

    /// `(hex code, label)` pairs in catalog order.
    pub fn entries(&self) -> impl Iterator<Item = (String, &str)> {
        self.catalog.codes().zip(&self.table).map(|(c, &o)| (hex::encode(c), self.output_alphabet[o as usize].as_str()))
    }

    /// Same rule with outputs renamed through `mapping[old] = new` into a new alphabet.
    pub fn recode(&self, new_alphabet: Vec<String>, mapping: &[usize]) -> Result<Self, RuleError> {
        if mapping.len() != self.output_alphabet.len() {
            return Err(RuleError::InvalidParams(format!(
                "recode mapping has {} entries for {} labels",
                mapping.len(),
                self.output_alphabet.len()
            )));
        }
        let table = self.table.iter().map(|&o| mapping[o as usize] as u32).collect();
        Self::from_outputs(self.catalog.clone(), new_alphabet, table)
    }
}

pub fn evaluate(rule: &LocalRule, raw: &RawBall) -> Result<String, RuleError> {
    rule.evaluate(raw).map(|o| rule.label(o).to_string())
}

/// Parameters for [`builtin_rule`]. Fields a rule does not use are ignored.
#[derive(Clone, Debug)]
pub struct RuleParams {
    pub d: usize,
    pub t: usize,
    pub model: SeedModel,
    pub output_alphabet: Vec<String>,
    pub label: Option<String>,
    pub table: BTreeMap<Vec<u8>, String>,
}

impl Default for RuleParams {
    fn default() -> Self {
        RuleParams {
            d: 3,
            t: 0,
            model: SeedModel::Rank,
            output_alphabet: Vec::new(),
            label: None,
            table: BTreeMap::new(),
        }
    }
}

pub fn builtin_rule(name: &str, p: &RuleParams) -> Result<LocalRule, RuleError> {
    match name {
        "constant" => {
            let label = p
                .label
                .clone()
                .or_else(|| p.output_alphabet.first().cloned())
                .ok_or_else(|| RuleError::InvalidParams("constant rule needs a label".into()))?;
            let alphabet = if p.output_alphabet.is_empty() { vec![label.clone()] } else { p.output_alphabet.clone() };
            LocalRule::constant(p.d, p.t, p.model, alphabet, &label)
        }
        "max_seed_independent" => LocalRule::max_seed_independent(p.d),
        "rank_table" | "alphabet_table" => {
            let wants_rank = name == "rank_table";
            if wants_rank != matches!(p.model, SeedModel::Rank) {
                return Err(RuleError::InvalidParams(format!("{name} does not accept model {}", p.model)));
            }
            LocalRule::from_table(
                p.d,
                p.t,
                p.model,
                p.output_alphabet.clone(),
                p.table.iter().map(|(c, l)| (c.clone(), l.clone())),
            )
        }
        other => Err(RuleError::UnknownName(other.to_string())),
    }
}

/// Independent uniform output per canonical ball, deterministic in `rng_seed`.
pub fn random_rule(
    d: usize,
    t: usize,
    model: SeedModel,
    output_alphabet: Vec<String>,
    rng_seed: u64,
) -> Result<LocalRule, RuleError> {
    check_alphabet(&output_alphabet)?;
    let catalog = BallCatalog::get(d, t, model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let k = output_alphabet.len() as u32;
    let table = (0..catalog.len()).map(|_| rng.random_range(0..k)).collect();
    LocalRule::from_outputs(catalog, output_alphabet, table)
}
