use std::fmt;

use super::{catalog::BallCatalog, Layout, RuleError, Seed, SeedModel};

/// Seed-labeled radius-`t` ball of `T_d`, in the preorder of [`Layout::ball`].
#[derive(Clone, Debug, PartialEq)]
pub struct RawBall {
    d: usize,
    t: usize,
    model: SeedModel,
    seeds: Vec<Seed>,
}

impl RawBall {
    pub fn new(d: usize, t: usize, model: SeedModel, seeds: Vec<Seed>) -> Result<Self, RuleError> {
        if d < 2 {
            return Err(RuleError::MalformedBall(format!("degree {d} < 2")));
        }
        let size = super::ball_size(d, t);
        if seeds.len() != size {
            return Err(RuleError::MalformedBall(format!(
                "radius-{t} ball of T_{d} has {size} vertices, got {} seeds",
                seeds.len()
            )));
        }
        for (i, s) in seeds.iter().enumerate() {
            let ok = match (model, s) {
                (SeedModel::Alphabet(q), Seed::Tag(x)) => x < &q,
                (SeedModel::Rank, Seed::Key(k)) => k.is_finite(),
                (SeedModel::Hybrid(q), Seed::Tagged(x, k)) => x < &q && k.is_finite(),
                _ => false,
            };
            if !ok {
                return Err(RuleError::MalformedBall(format!("seed {s:?} at position {i} does not fit model {model}")));
            }
        }
        Ok(RawBall { d, t, model, seeds })
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

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    /// Tags and order keys in the integer form used by [`encode`].
    fn parts(&self) -> Result<(Vec<u8>, Vec<u128>), RuleError> {
        let mut tags = Vec::new();
        let mut reals = Vec::new();
        for s in &self.seeds {
            match *s {
                Seed::Tag(x) => tags.push(x),
                Seed::Key(k) => reals.push(k),
                Seed::Tagged(x, k) => {
                    tags.push(x);
                    reals.push(k);
                }
            }
        }
        if reals.is_empty() {
            return Ok((tags, Vec::new()));
        }
        let mut order: Vec<usize> = (0..reals.len()).collect();
        order.sort_by(|&a, &b| reals[a].total_cmp(&reals[b]));
        if order.windows(2).any(|w| reals[w[0]] == reals[w[1]]) {
            return Err(RuleError::MalformedBall("tied rank seeds".into()));
        }
        let mut keys = vec![0u128; reals.len()];
        for (rank, &i) in order.iter().enumerate() {
            keys[i] = rank as u128;
        }
        Ok((tags, keys))
    }
}

/// Per-vertex code bytes for a labeling: the tag, the rank (1-based, by key
/// order) or both. Keys must be pairwise distinct.
pub(crate) fn label_bytes(model: SeedModel, tags: &[u8], keys: &[u128]) -> Vec<u8> {
    let n = tags.len().max(keys.len());
    let ranks = if model.has_ranks() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&i| keys[i]);
        let mut ranks = vec![0u8; n];
        for (r, &i) in order.iter().enumerate() {
            ranks[i] = (r + 1) as u8;
        }
        ranks
    } else {
        Vec::new()
    };
    match model {
        SeedModel::Alphabet(_) => tags.to_vec(),
        SeedModel::Rank => ranks,
        SeedModel::Hybrid(_) => tags.iter().zip(&ranks).flat_map(|(&t, &r)| [t, r]).collect(),
    }
}

pub(crate) fn encode(layout: &Layout, model: SeedModel, tags: &[u8], keys: &[u128]) -> Vec<u8> {
    layout.canonical_code(&label_bytes(model, tags, keys), model.label_width())
}

/// Isomorphism-class representative of a seed-labeled rooted ball.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalBall {
    d: usize,
    t: usize,
    model: SeedModel,
    code: Vec<u8>,
}

impl CanonicalBall {
    pub(crate) fn from_code(d: usize, t: usize, model: SeedModel, code: Vec<u8>) -> Self {
        CanonicalBall { d, t, model, code }
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

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn hex(&self) -> String {
        hex::encode(&self.code)
    }

    /// Number of raw labelings of the ball in this class.
    pub fn orbit_size(&self) -> u64 {
        Layout::ball(self.d, self.t).orbit_size(&self.code, self.model.label_width())
    }

    /// The raw ball whose preorder labeling is this canonical arrangement;
    /// ranks become keys `1.0, 2.0, ...`.
    pub fn to_raw(&self) -> RawBall {
        let seeds = match self.model {
            SeedModel::Alphabet(_) => self.code.iter().map(|&x| Seed::Tag(x)).collect(),
            SeedModel::Rank => self.code.iter().map(|&r| Seed::Key(r as f64)).collect(),
            SeedModel::Hybrid(_) => self.code.chunks_exact(2).map(|c| Seed::Tagged(c[0], c[1] as f64)).collect(),
        };
        RawBall { d: self.d, t: self.t, model: self.model, seeds }
    }
}

impl fmt::Debug for CanonicalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalBall(d={}, t={}, {}, {})", self.d, self.t, self.model, self.hex())
    }
}

impl fmt::Display for CanonicalBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            SeedModel::Rank => write!(f, "root rank {} of {}", self.code[0], super::ball_size(self.d, self.t)),
            _ => f.write_str(&self.hex()),
        }
    }
}

/// Reduces a raw ball to its canonical code.
pub fn canonicalize(raw: &RawBall) -> Result<CanonicalBall, RuleError> {
    let (tags, keys) = raw.parts()?;
    let layout = BallCatalog::layout_for(raw.d, raw.t);
    let code = encode(&layout, raw.model, &tags, &keys);
    Ok(CanonicalBall::from_code(raw.d, raw.t, raw.model, code))
}
