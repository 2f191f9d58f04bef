//! Label laws of a rule on `T_d` and the entropy inequalities they satisfy.
//!
//! All entropies are in nats. Exact laws carry rational probabilities next to
//! their float images; floats are used only to evaluate logarithms.

mod audit;
mod exact;
mod girth;
mod monte_carlo;
mod tail;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graphs::FiniteGraph;
use crate::rules::RuleError;

pub use audit::{audit, AuditInputs, EntropyReport, Verdict};
pub use exact::{exact_marginals, exact_vertex_law, EdgeKernel};
pub use girth::{decimal_rational, min_girth_constant, min_girth_constant_exact, GirthConstant, MAX_CONSTANT_BITS};
pub use monte_carlo::{mc_marginals, MC_BLOCK};
pub use tail::{tail_select, TailChain, TailReport};

/// Tolerance for float sums and for inequality checks on exact laws.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("pair marginal differs from the vertex law by {max_diff:e} (tolerance {tol:e})")]
    InconsistentMarginals { max_diff: f64, tol: f64 },
    #[error("C - 1 = {c_minus_one} is at least the number of labels {labels}")]
    CTooLarge { c_minus_one: u64, labels: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    MonteCarlo { n_samples: u64 },
}

impl Provenance {
    pub fn is_exact(self) -> bool {
        self == Provenance::Exact
    }

    /// The weaker of two provenances: Monte Carlo wins, with the smaller sample.
    pub fn combine(self, other: Provenance) -> Provenance {
        match (self, other) {
            (Provenance::Exact, p) | (p, Provenance::Exact) => p,
            (Provenance::MonteCarlo { n_samples: a }, Provenance::MonteCarlo { n_samples: b }) => {
                Provenance::MonteCarlo { n_samples: a.min(b) }
            }
        }
    }
}

pub(crate) fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `-p ln p` with `0 ln 0 = 0`.
pub(crate) fn neg_xlnx(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.ln()
    } else {
        0.0
    }
}

fn check_floats(p: &[f64]) -> Result<(), EntropyError> {
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(EntropyError::InvalidDistribution(format!("probability {x} is negative or not finite")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > EXACT_TOL {
        return Err(EntropyError::InvalidDistribution(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

fn check_rationals(p: &[BigRational]) -> Result<(), EntropyError> {
    if let Some(x) = p.iter().find(|x| x.is_negative()) {
        return Err(EntropyError::InvalidDistribution(format!("probability {x} is negative")));
    }
    let sum: BigRational = p.iter().sum();
    if !sum.is_one() {
        return Err(EntropyError::InvalidDistribution(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

/// Law of the label of a random vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelDistribution {
    labels: Vec<String>,
    p: Vec<f64>,
    exact: Option<Vec<BigRational>>,
    provenance: Provenance,
}

impl LabelDistribution {
    pub fn new(labels: Vec<String>, p: Vec<f64>, provenance: Provenance) -> Result<Self, EntropyError> {
        if labels.len() != p.len() {
            return Err(EntropyError::InvalidDistribution(format!(
                "{} labels for {} probabilities",
                labels.len(),
                p.len()
            )));
        }
        check_floats(&p)?;
        Ok(LabelDistribution { labels, p, exact: None, provenance })
    }

    pub fn from_rationals(labels: Vec<String>, exact: Vec<BigRational>) -> Result<Self, EntropyError> {
        if labels.len() != exact.len() {
            return Err(EntropyError::InvalidDistribution(format!(
                "{} labels for {} probabilities",
                labels.len(),
                exact.len()
            )));
        }
        check_rationals(&exact)?;
        let p = exact.iter().map(ratio_f64).collect();
        Ok(LabelDistribution { labels, p, exact: Some(exact), provenance: Provenance::Exact })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn prob(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.p[i])
    }

    /// Total-variation distance to a law over the same labels.
    pub fn total_variation(&self, other: &LabelDistribution) -> f64 {
        0.5 * self.p.iter().zip(&other.p).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

impl Serialize for LabelDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LabelDistribution", 4)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("p", &self.p)?;
        if let Some(exact) = &self.exact {
            st.serialize_field("exact", &exact.iter().map(ratio_string).collect::<Vec<_>>())?;
        }
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

/// Law of the ordered label pair at the two endpoints of a fixed edge:
/// `q[a][b] = P(vertex = a, neighbour = b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDistribution {
    labels: Vec<String>,
    q: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
    provenance: Provenance,
}

impl PairDistribution {
    /// Validates shape, normalization and exchangeability.
    pub fn new(labels: Vec<String>, q: Vec<Vec<f64>>, provenance: Provenance) -> Result<Self, EntropyError> {
        let k = labels.len();
        if q.len() != k || q.iter().any(|row| row.len() != k) {
            return Err(EntropyError::InvalidDistribution(format!("pair table is not {k} x {k}")));
        }
        check_floats(&q.concat())?;
        for a in 0..k {
            for b in 0..a {
                if (q[a][b] - q[b][a]).abs() > EXACT_TOL {
                    return Err(EntropyError::InvalidDistribution(format!(
                        "not exchangeable at ({}, {})",
                        labels[a], labels[b]
                    )));
                }
            }
        }
        Ok(PairDistribution { labels, q, exact: None, provenance })
    }

    pub fn from_rationals(labels: Vec<String>, exact: Vec<Vec<BigRational>>) -> Result<Self, EntropyError> {
        let k = labels.len();
        if exact.len() != k || exact.iter().any(|row| row.len() != k) {
            return Err(EntropyError::InvalidDistribution(format!("pair table is not {k} x {k}")));
        }
        check_rationals(&exact.concat())?;
        for a in 0..k {
            for b in 0..a {
                if exact[a][b] != exact[b][a] {
                    return Err(EntropyError::InvalidDistribution(format!(
                        "not exchangeable at ({}, {})",
                        labels[a], labels[b]
                    )));
                }
            }
        }
        let q = exact.iter().map(|row| row.iter().map(ratio_f64).collect()).collect();
        Ok(PairDistribution { labels, q, exact: Some(exact), provenance: Provenance::Exact })
    }

    /// Uniform law on the `2m` ordered edges of `h`; labels are vertex indices.
    pub fn uniform_on_edges(h: &FiniteGraph) -> Result<Self, EntropyError> {
        if h.m() == 0 {
            return Err(EntropyError::InvalidDistribution("graph has no edges".into()));
        }
        let n = h.n();
        let w = ratio(1, 2 * h.m() as u64);
        let exact = (0..n)
            .map(|a| (0..n).map(|b| if h.has_edge(a, b) { w.clone() } else { BigRational::zero() }).collect())
            .collect();
        Self::from_rationals((0..n).map(|v| v.to_string()).collect(), exact)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn q(&self) -> &[Vec<f64>] {
        &self.q
    }

    pub fn exact(&self) -> Option<&[Vec<BigRational>]> {
        self.exact.as_deref()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn prob(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.q[i][j])
    }

    /// Law of the first coordinate (row sums).
    pub fn marginal(&self) -> LabelDistribution {
        match &self.exact {
            Some(exact) => {
                let p = exact.iter().map(|row| row.iter().sum()).collect();
                LabelDistribution::from_rationals(self.labels.clone(), p).expect("rows of a valid law")
            }
            None => LabelDistribution {
                labels: self.labels.clone(),
                p: self.q.iter().map(|row| row.iter().sum()).collect(),
                exact: None,
                provenance: self.provenance,
            },
        }
    }

    /// Ordered pairs with positive mass.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.q
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().enumerate().map(move |(b, &x)| (a, b, x)))
            .filter(|&(_, _, x)| x > 0.0)
    }

    pub fn total_variation(&self, other: &PairDistribution) -> f64 {
        let diff: f64 =
            self.q.iter().zip(&other.q).flat_map(|(r, s)| r.iter().zip(s).map(|(a, b)| (a - b).abs())).sum();
        0.5 * diff
    }
}

impl Serialize for PairDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PairDistribution", 4)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("q", &self.q)?;
        if let Some(exact) = &self.exact {
            let rows: Vec<Vec<String>> = exact.iter().map(|r| r.iter().map(ratio_string).collect()).collect();
            st.serialize_field("exact", &rows)?;
        }
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

/// `-Σ p ln p` of a validated law.
pub fn entropy(dist: &LabelDistribution) -> f64 {
    dist.p.iter().map(|&p| neg_xlnx(p)).sum()
}

/// Entropy of a raw probability vector, validating it first.
pub fn entropy_of(p: &[f64]) -> Result<f64, EntropyError> {
    check_floats(p)?;
    Ok(p.iter().map(|&x| neg_xlnx(x)).sum())
}

/// Entropies of a pair `(Y, X) = (vertex, neighbour)` with joint law `q[y][x]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionalEntropy {
    /// `h(X | Y) = -Σ P(x, y) ln (P(x, y) / P(y))`.
    pub conditional: f64,
    /// `h(X, Y)`.
    pub joint: f64,
    /// `h(Y)`.
    pub conditioning: f64,
}

pub fn conditional_entropy(pair: &PairDistribution) -> ConditionalEntropy {
    let rows: Vec<f64> = pair.q.iter().map(|row| row.iter().sum()).collect();
    let mut conditional = 0.0;
    let mut joint = 0.0;
    for (row, &py) in pair.q.iter().zip(&rows) {
        for &pxy in row {
            if pxy > 0.0 {
                conditional -= pxy * (pxy / py).ln();
                joint -= pxy * pxy.ln();
            }
        }
    }
    let conditioning = rows.iter().map(|&p| neg_xlnx(p)).sum();
    ConditionalEntropy { conditional, joint, conditioning }
}
