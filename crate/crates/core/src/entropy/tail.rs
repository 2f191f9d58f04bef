use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{decimal_rational, neg_xlnx, ratio, ratio_f64, ratio_string, EntropyError, LabelDistribution};

/// The implication chain behind the large-preimage lemma, each link computed
/// rather than assumed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailChain {
    /// `outside_mass >= c0`: the case the lemma argues against.
    pub hypothesis_triggered: bool,
    /// Every label outside `S` has mass at most the smallest mass in `S`.
    pub max_outside_le_min_in_s: bool,
    /// Every label outside `S` has mass at most `1/C`.
    pub max_outside_le_inv_c: bool,
    /// `outside_mass * ln C`, a lower bound for the tail entropy when the
    /// previous link holds.
    pub tail_bound: f64,
    pub tail_entropy_ge_bound: bool,
    pub c0_ln_c: f64,
    pub tail_entropy_ge_c0_ln_c: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    #[serde(rename = "C")]
    pub c: u64,
    pub c0: f64,
    pub s: Vec<String>,
    pub s_indices: Vec<usize>,
    pub s_mass: f64,
    pub outside_mass: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside_mass_exact: Option<String>,
    pub tail_entropy: f64,
    pub max_outside: f64,
    pub min_in_s: f64,
    pub chain: TailChain,
    /// `not_triggered`, `implication_holds` or `implication_fails`.
    pub verdict: String,
}

/// Splits off the `C - 1` heaviest labels (ties to the smaller index) and
/// evaluates the tail against `c0`. Exact laws are compared exactly, with
/// `c0` read as the decimal it prints as.
pub fn tail_select(dist: &LabelDistribution, c: u64, c0: f64) -> Result<TailReport, EntropyError> {
    if c < 2 {
        return Err(EntropyError::InvalidParams(format!("C = {c} must be at least 2")));
    }
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(EntropyError::InvalidParams(format!("c0 = {c0} must lie in (0, 1)")));
    }
    let k = dist.len();
    if c > k as u64 {
        return Err(EntropyError::CTooLarge { c_minus_one: c - 1, labels: k });
    }
    let mut order: Vec<usize> = (0..k).collect();
    match dist.exact() {
        Some(e) => order.sort_by(|&a, &b| e[b].cmp(&e[a]).then(a.cmp(&b))),
        None => order.sort_by(|&a, &b| dist.p()[b].total_cmp(&dist.p()[a]).then(a.cmp(&b))),
    }
    let (inside, outside) = order.split_at((c - 1) as usize);
    let mut s_indices = inside.to_vec();
    s_indices.sort_unstable();
    let p = dist.p();
    let s_mass: f64 = inside.iter().map(|&i| p[i]).sum();
    let tail_entropy: f64 = outside.iter().map(|&i| neg_xlnx(p[i])).sum();
    let max_outside = p[outside[0]];
    let min_in_s = p[*inside.last().expect("C >= 2")];
    let ln_c = (c as f64).ln();

    let (outside_mass, outside_mass_exact, triggered, le_min, le_inv_c);
    match dist.exact() {
        Some(e) => {
            let out: BigRational = BigRational::one() - inside.iter().map(|&i| &e[i]).sum::<BigRational>();
            outside_mass = ratio_f64(&out);
            triggered = out >= decimal_rational(c0)?;
            le_min = e[outside[0]] <= e[*inside.last().expect("C >= 2")];
            le_inv_c = e[outside[0]] <= ratio(1, c);
            outside_mass_exact = Some(ratio_string(&out));
        }
        None => {
            outside_mass = (1.0 - s_mass).max(0.0);
            triggered = outside_mass >= c0;
            le_min = max_outside <= min_in_s;
            le_inv_c = max_outside <= 1.0 / c as f64;
            outside_mass_exact = None;
        }
    }
    let tol = super::EXACT_TOL;
    let tail_bound = outside_mass * ln_c;
    let c0_ln_c = c0 * ln_c;
    let chain = TailChain {
        hypothesis_triggered: triggered,
        max_outside_le_min_in_s: le_min,
        max_outside_le_inv_c: le_inv_c,
        tail_bound,
        tail_entropy_ge_bound: tail_entropy + tol >= tail_bound,
        c0_ln_c,
        tail_entropy_ge_c0_ln_c: tail_entropy + tol >= c0_ln_c,
    };
    let verdict = if !triggered {
        "not_triggered"
    } else if chain.max_outside_le_min_in_s
        && chain.max_outside_le_inv_c
        && chain.tail_entropy_ge_bound
        && chain.tail_entropy_ge_c0_ln_c
    {
        "implication_holds"
    } else {
        "implication_fails"
    };
    Ok(TailReport {
        c,
        c0,
        s: s_indices.iter().map(|&i| dist.labels()[i].clone()).collect(),
        s_indices,
        s_mass,
        outside_mass,
        outside_mass_exact,
        tail_entropy,
        max_outside,
        min_in_s,
        chain,
        verdict: verdict.into(),
    })
}
