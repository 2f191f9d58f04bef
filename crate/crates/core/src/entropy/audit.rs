use num_traits::Zero;
use serde::Serialize;

use super::{conditional_entropy, entropy, EntropyError, LabelDistribution, PairDistribution, Provenance, EXACT_TOL};
use crate::graphs::FiniteGraph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    /// Distance to the bound, positive on the passing side.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub h_vertex: f64,
    pub h_edge: f64,
    pub h_nbr_given_vertex: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// `h_edge - (4/3) h_vertex`.
    pub slack_edge_vertex: f64,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
}

impl EntropyReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }
}

/// Inputs to [`audit`].
#[derive(Clone, Copy, Debug)]
pub struct AuditInputs<'a> {
    pub vertex: &'a LabelDistribution,
    pub pair: &'a PairDistribution,
    /// Regularity of the target; defaults to the regular degree of `h`.
    pub r: Option<usize>,
    pub h: Option<&'a FiniteGraph>,
}

/// Checks, in order: the edge-vertex inequality `(4/3) h_vertex <= h_edge`;
/// with a target `h`, that the pair law is supported on `E(h)`; with a known
/// regularity `r` (and a passing support check when `h` is given), the caps
/// `h_nbr_given_vertex <= ln r` and `h_vertex <= 3 ln r`.
///
/// Exact laws are checked with tolerance `1e-9`. Monte Carlo laws use three
/// delta-method standard errors of the plug-in statistic on top of that.
pub fn audit(inputs: AuditInputs<'_>) -> Result<EntropyReport, EntropyError> {
    let AuditInputs { vertex, pair, r, h } = inputs;
    if vertex.labels() != pair.labels() {
        return Err(EntropyError::InvalidParams("vertex and pair laws have different labels".into()));
    }
    check_consistency(vertex, pair)?;
    let provenance = vertex.provenance().combine(pair.provenance());
    let h_vertex = entropy(vertex);
    let cond = conditional_entropy(pair);
    let (h_edge, h_nbr) = (cond.joint, cond.conditional);
    let slack = h_edge - 4.0 / 3.0 * h_vertex;
    let stats = Influence::new(pair, vertex);
    let tol = |weights: (f64, f64)| match provenance {
        Provenance::Exact => EXACT_TOL,
        Provenance::MonteCarlo { n_samples } => EXACT_TOL + 3.0 * stats.std_error(weights, n_samples),
    };
    let mut verdicts = Vec::new();
    let within = |check: &str, margin: f64, tol: f64| Verdict { check: check.into(), pass: margin >= -tol, margin };
    // Statistics are `c_q * h_edge + c_p * h_vertex`; weights are `(c_q, c_p)`.
    verdicts.push(within("edge_vertex", slack, tol((1.0, -4.0 / 3.0))));
    let mut support_ok = true;
    if let Some(h) = h {
        let outside = mass_outside(pair, h)?;
        support_ok = outside == 0.0;
        verdicts.push(Verdict { check: "support".into(), pass: support_ok, margin: -outside });
    }
    let r = r.or_else(|| h.and_then(FiniteGraph::regular_degree));
    if let Some(r) = r.filter(|_| support_ok) {
        let ln_r = (r as f64).ln();
        verdicts.push(within("nbr_entropy_cap", ln_r - h_nbr, tol((1.0, -1.0))));
        verdicts.push(within("vertex_entropy_cap", 3.0 * ln_r - h_vertex, tol((0.0, 1.0))));
    }
    Ok(EntropyReport { h_vertex, h_edge, h_nbr_given_vertex: h_nbr, r, slack_edge_vertex: slack, verdicts, provenance })
}

fn check_consistency(vertex: &LabelDistribution, pair: &PairDistribution) -> Result<(), EntropyError> {
    let marginal = pair.marginal();
    if let (Some(a), Some(b)) = (marginal.exact(), vertex.exact()) {
        if a == b {
            return Ok(());
        }
        let max_diff = a.iter().zip(b).map(|(x, y)| super::ratio_f64(&(x - y)).abs()).fold(0.0, f64::max);
        return Err(EntropyError::InconsistentMarginals { max_diff: max_diff.max(f64::MIN_POSITIVE), tol: 0.0 });
    }
    let max_diff = marginal.p().iter().zip(vertex.p()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if max_diff > EXACT_TOL {
        return Err(EntropyError::InconsistentMarginals { max_diff, tol: EXACT_TOL });
    }
    Ok(())
}

/// Mass of ordered pairs that are not edges of `h`. Labels must name
/// vertices of `h` by index.
pub(crate) fn mass_outside(pair: &PairDistribution, h: &FiniteGraph) -> Result<f64, EntropyError> {
    let vertex_of = |label: &str| {
        label
            .parse::<usize>()
            .ok()
            .filter(|&v| v < h.n())
            .ok_or_else(|| EntropyError::InvalidParams(format!("label `{label}` is not a vertex of the target")))
    };
    let vs = pair.labels().iter().map(|l| vertex_of(l)).collect::<Result<Vec<_>, _>>()?;
    if let Some(exact) = pair.exact() {
        let mut out = num_rational::BigRational::zero();
        for (a, row) in exact.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                if !h.has_edge(vs[a], vs[b]) {
                    out += x;
                }
            }
        }
        return Ok(super::ratio_f64(&out));
    }
    Ok(pair.support().filter(|&(a, b, _)| !h.has_edge(vs[a], vs[b])).fold(0.0, |acc, (_, _, x)| acc + x))
}

/// Per-sample influence terms of the plug-in entropies under multinomial
/// sampling of ordered pairs: `-ln q(a,b)` for `h_edge` and
/// `-(ln p(a) + ln p(b)) / 2` for `h_vertex`.
struct Influence {
    cells: Vec<(f64, f64, f64)>,
}

impl Influence {
    fn new(pair: &PairDistribution, vertex: &LabelDistribution) -> Self {
        let p = vertex.p();
        let cells = pair.support().map(|(a, b, q)| (q, -q.ln(), -(p[a].ln() + p[b].ln()) / 2.0)).collect();
        Influence { cells }
    }

    fn std_error(&self, (cq, cp): (f64, f64), n: u64) -> f64 {
        let (mut m1, mut m2) = (0.0, 0.0);
        for &(w, gq, gp) in &self.cells {
            let g = cq * gq + cp * gp;
            m1 += w * g;
            m2 += w * g * g;
        }
        ((m2 - m1 * m1).max(0.0) / n as f64).sqrt()
    }
}
