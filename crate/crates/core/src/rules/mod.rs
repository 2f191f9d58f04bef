//! Equivariant finite-radius rules on the `d`-regular tree.
//!
//! A rule of radius `t` looks at the seed data on the radius-`t` ball around
//! a vertex and outputs a label. Equivariance means the output may not depend
//! on how the ball is drawn: permuting sibling subtrees must not change it.
//! Every ball is therefore reduced to a canonical byte code (sibling subtrees
//! sorted recursively) and a rule is a total table over those codes.

mod ball;
mod catalog;
mod io;
mod layout;
mod region;
mod rule;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub(crate) use ball::encode;
pub use ball::{canonicalize, CanonicalBall, RawBall};
pub(crate) use catalog::{check_budget, enumerate_codes};
pub use catalog::{enumerate_canonical_balls, BallCatalog, MAX_RAW_CONFIGURATIONS};
pub use io::{format_rule, parse_rule, read_rule, write_rule};
pub use layout::Layout;
pub(crate) use region::ball_preorder;
pub use region::{EdgeConfiguration, EdgeRegion, Endpoint};
pub use rule::{builtin_rule, evaluate, random_rule, LocalRule, RuleParams, BUILTIN_RULES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("{what}: {count} raw configurations exceed the enumeration budget of {cap}")]
    BudgetExceeded { what: String, count: String, cap: u64 },
    #[error("malformed ball: {0}")]
    MalformedBall(String),
    #[error("unknown builtin rule `{0}`")]
    UnknownName(String),
    #[error("rule table covers {provided} of {expected} canonical balls")]
    IncompleteTable { expected: usize, provided: usize },
    #[error("code {0} is not a canonical ball of this class")]
    UnknownCode(String),
    #[error("label `{0}` is not in the output alphabet")]
    UnknownLabel(String),
    #[error("invalid seed model `{0}` (expected alphabet:q, rank or hybrid:q with 2 <= q <= 255)")]
    InvalidModel(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("rule file, line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("rule file: {0}")]
    Io(String),
}

/// How i.i.d. randomness enters a rule.
///
/// `Alphabet(q)`: a uniform tag in `0..q` per vertex. `Rank`: continuous
/// seeds, of which the rule sees only the relative order within its ball.
/// `Hybrid(q)`: both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeedModel {
    Alphabet(u8),
    Rank,
    Hybrid(u8),
}

impl SeedModel {
    pub fn alphabet(q: u8) -> Result<Self, RuleError> {
        if q < 2 {
            return Err(RuleError::InvalidModel(format!("alphabet:{q}")));
        }
        Ok(SeedModel::Alphabet(q))
    }

    pub fn hybrid(q: u8) -> Result<Self, RuleError> {
        if q < 2 {
            return Err(RuleError::InvalidModel(format!("hybrid:{q}")));
        }
        Ok(SeedModel::Hybrid(q))
    }

    /// Number of tags, if the model has tags.
    pub fn tags(self) -> Option<u8> {
        match self {
            SeedModel::Alphabet(q) | SeedModel::Hybrid(q) => Some(q),
            SeedModel::Rank => None,
        }
    }

    pub fn has_ranks(self) -> bool {
        !matches!(self, SeedModel::Alphabet(_))
    }

    /// Bytes per vertex in a canonical code.
    pub fn label_width(self) -> usize {
        match self {
            SeedModel::Hybrid(_) => 2,
            _ => 1,
        }
    }

    /// Number of equally likely raw configurations on `n` vertices:
    /// `q^n`, `n!` or `q^n * n!`. `None` on `u128` overflow.
    pub fn raw_count(self, n: usize) -> Option<u128> {
        let tags = |q: u8| (0..n).try_fold(1u128, |acc, _| acc.checked_mul(q as u128));
        let orders = || (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k));
        match self {
            SeedModel::Alphabet(q) => tags(q),
            SeedModel::Rank => orders(),
            SeedModel::Hybrid(q) => tags(q)?.checked_mul(orders()?),
        }
    }
}

impl fmt::Display for SeedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedModel::Alphabet(q) => write!(f, "alphabet:{q}"),
            SeedModel::Rank => f.write_str("rank"),
            SeedModel::Hybrid(q) => write!(f, "hybrid:{q}"),
        }
    }
}

impl FromStr for SeedModel {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RuleError::InvalidModel(s.to_string());
        if s == "rank" {
            return Ok(SeedModel::Rank);
        }
        let (kind, q) = s.split_once(':').ok_or_else(bad)?;
        let q: u8 = q.parse().map_err(|_| bad())?;
        match kind {
            "alphabet" => SeedModel::alphabet(q),
            "hybrid" => SeedModel::hybrid(q),
            _ => Err(bad()),
        }
    }
}

impl Serialize for SeedModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SeedModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Seed data of one vertex of a raw ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Seed {
    Tag(u8),
    Key(f64),
    Tagged(u8, f64),
}

/// Size of the radius-`t` ball of the `d`-regular tree.
pub fn ball_size(d: usize, t: usize) -> usize {
    Layout::tree_size(d, d.saturating_sub(1), t)
}

/// Size of the union of the radius-`t` balls of the two endpoints of an edge.
pub fn edge_ball_size(d: usize, t: usize) -> usize {
    2 * Layout::tree_size(d.saturating_sub(1), d.saturating_sub(1), t)
}
