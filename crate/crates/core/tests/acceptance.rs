//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Run with `cargo test -p fiid-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brackets_power, brute_alpha, brute_chi, brute_girth};
use fiid_core::entropy::{audit, exact_marginals, mc_marginals, min_girth_constant, tail_select, AuditInputs};
use fiid_core::graphs::{exact_invariants, named_graph, random_regular};
use fiid_core::homsearch::{search, vertex_labels, SearchOptions};
use fiid_core::rules::random_rule;
use fiid_core::simulate::{
    format_labeling, run_on_graph, theorem_pipeline, theorem_pipeline_from_laws, MarginalMode, StepStatus,
    NO_REFUTATION,
};
use fiid_core::{
    FiniteGraph, Girth, LabelDistribution, LocalRule, OutcomeKind, PairDistribution, Provenance, SeedModel,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn frac(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.1?}, limit {limit:?}"));
    }
    Ok(())
}

/// Entropies of a pair law computed directly from its table:
/// `(h_vertex, h_edge, h_nbr_given_vertex)`.
fn direct_entropies(q: &[Vec<f64>]) -> (f64, f64, f64) {
    let p: Vec<f64> = q.iter().map(|row| row.iter().sum()).collect();
    let xlnx = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    let h_vertex = p.iter().map(|&x| xlnx(x)).sum();
    let h_edge = q.iter().flatten().map(|&x| xlnx(x)).sum();
    let mut h_nbr = 0.0;
    for (a, row) in q.iter().enumerate() {
        for &x in row {
            if x > 0.0 {
                h_nbr -= x * (x / p[a]).ln();
            }
        }
    }
    (h_vertex, h_edge, h_nbr)
}

/// The 200 rules shared by criteria 1 and 2.
fn criterion_rules() -> Vec<LocalRule> {
    let classes = [
        (0, SeedModel::Alphabet(2)),
        (1, SeedModel::Alphabet(2)),
        (2, SeedModel::Alphabet(2)),
        (0, SeedModel::Alphabet(3)),
        (1, SeedModel::Alphabet(3)),
        (2, SeedModel::Alphabet(3)),
        (1, SeedModel::Rank),
        (1, SeedModel::Rank),
    ];
    (0..200u64)
        .map(|i| {
            let (t, model) = classes[i as usize % classes.len()];
            let k = 2 + (i % 6) as usize;
            let labels = (0..k).map(|j| format!("L{j}")).collect();
            random_rule(3, t, model, labels, 1000 + i).expect("class within budget")
        })
        .collect()
}

fn c1_chain_rule(rules: &[LocalRule]) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (i, rule) in rules.iter().enumerate() {
        let (v, p) = exact_marginals(rule).map_err(|e| e.to_string())?;
        let report = audit(AuditInputs { vertex: &v, pair: &p, r: None, h: None }).map_err(|e| e.to_string())?;
        let (hv, he, hn) = direct_entropies(p.q());
        let agree = [(report.h_vertex, hv), (report.h_edge, he), (report.h_nbr_given_vertex, hn)];
        ensure!(agree.iter().all(|(a, b)| (a - b).abs() < 1e-12), "rule {i}: entropies differ from the direct sums");
        let gap = (report.h_edge - report.h_vertex - report.h_nbr_given_vertex).abs();
        worst = worst.max(gap);
        ensure!(gap < 1e-9, "rule {i}: |h_edge - h_vertex - h_nbr| = {gap:e}");
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} rules, max gap {worst:.1e}, {:.1?}", rules.len(), start.elapsed()))
}

fn c2_edge_vertex(rules: &[LocalRule]) -> Outcome {
    let mut min_slack = f64::INFINITY;
    for (i, rule) in rules.iter().enumerate() {
        let (v, p) = exact_marginals(rule).map_err(|e| e.to_string())?;
        let (hv, he, _) = direct_entropies(p.q());
        ensure!(4.0 / 3.0 * hv <= he + 1e-9, "rule {i}: (4/3) {hv} > {he}");
        let report = audit(AuditInputs { vertex: &v, pair: &p, r: None, h: None }).map_err(|e| e.to_string())?;
        ensure!(report.verdict("edge_vertex").is_some_and(|x| x.pass), "rule {i}: audit verdict fails");
        min_slack = min_slack.min(he - 4.0 / 3.0 * hv);
    }
    Ok(format!("{} rules, min slack {min_slack:.3e}", rules.len()))
}

fn random_edge_law(h: &FiniteGraph, rng: &mut ChaCha8Rng) -> PairDistribution {
    let n = h.n();
    let mut q = vec![vec![0.0; n]; n];
    for (u, v) in h.edges() {
        // Some edges get tiny or zero weight, so supports vary.
        let w = if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>().powi(2) };
        q[u][v] = w;
        q[v][u] = w;
    }
    let (u, v) = h.edges().next().expect("target has an edge");
    q[u][v] += 1e-3;
    q[v][u] += 1e-3;
    let s: f64 = q.iter().flatten().sum();
    q.iter_mut().flatten().for_each(|x| *x /= s);
    PairDistribution::new(vertex_labels(h), q, Provenance::Exact).expect("valid law")
}

fn c3_entropy_caps() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for name in ["C5", "Petersen", "Heawood"] {
        let h = named_graph(name).map_err(|e| e.to_string())?;
        let r = h.regular_degree().expect("regular") as f64;
        for i in 0..100 {
            let pair = random_edge_law(&h, &mut rng);
            let vertex = pair.marginal();
            let (hv, he, hn) = direct_entropies(pair.q());
            ensure!(hn <= r.ln() + 1e-9, "{name} law {i}: h_nbr {hn} > ln {r}");
            // The edge-vertex inequality on this law gives h_vertex <= 3 (h_edge - h_vertex) <= 3 ln r.
            if 4.0 / 3.0 * hv <= he + 1e-9 {
                ensure!(hv <= 3.0 * (he - hv) + 1e-9, "{name} law {i}: chain algebra");
            }
            ensure!(hv <= 3.0 * r.ln() + 1e-9, "{name} law {i}: h_vertex {hv} > 3 ln {r}");
            let report =
                audit(AuditInputs { vertex: &vertex, pair: &pair, r: None, h: Some(&h) }).map_err(|e| e.to_string())?;
            // Synthetic laws need not satisfy the edge-vertex inequality; only the caps are at stake.
            for check in ["support", "nbr_entropy_cap", "vertex_entropy_cap"] {
                ensure!(report.verdict(check).is_some_and(|v| v.pass), "{name} law {i}: {check} {:?}", report.verdicts);
            }
            checked += 1;
        }
    }
    // Uniform on the ordered edges of C5 sits on the boundary h_nbr = ln 2.
    let c5 = named_graph("C5").map_err(|e| e.to_string())?;
    let uniform = PairDistribution::uniform_on_edges(&c5).map_err(|e| e.to_string())?;
    let (_, _, hn) = direct_entropies(uniform.q());
    ensure!((hn - 2f64.ln()).abs() < 1e-12, "C5 boundary case h_nbr = {hn}");
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} edge-supported laws, {:.1?}", start.elapsed()))
}

fn c4_max_seed() -> Outcome {
    let rule = LocalRule::max_seed_independent(3).map_err(|e| e.to_string())?;
    let (v, p) = exact_marginals(&rule).map_err(|e| e.to_string())?;
    ensure!(v.exact() == Some(&[frac(1, 4), frac(3, 4)][..]), "vertex law {:?}", v.exact());
    let pe = p.exact().ok_or("pair law not exact")?;
    let flat: Vec<BigRational> = pe.iter().flatten().cloned().collect();
    ensure!(flat == [frac(0, 1), frac(1, 4), frac(1, 4), frac(1, 2)], "pair law {flat:?}");
    let (hv, _, _) = direct_entropies(p.q());
    ensure!((hv - 0.562335).abs() < 1e-6, "h_vertex {hv}");
    let (mv, mp) = mc_marginals(&rule, 1_000_000, 2024).map_err(|e| e.to_string())?;
    let tv = mv.total_variation(&v).max(mp.total_variation(&p));
    ensure!(tv <= 0.005, "Monte Carlo TV {tv}");
    Ok(format!("h_vertex {hv:.6}, MC TV {tv:.1e} at 10^6 samples"))
}

fn c5_constants() -> Outcome {
    let value = |r, c0| min_girth_constant(r, c0).map_err(|e| e.to_string())?.value.ok_or("overflow".to_string());
    ensure!(value(3, 0.3)? == BigUint::from(59_050u32), "C(3, 0.3)");
    ensure!(value(2, 0.75)? == BigUint::from(17u32), "C(2, 0.75)");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let r = rng.random_range(2..12u64);
        let hundredths = rng.random_range(5..100u32);
        let c0 = f64::from(hundredths) / 100.0;
        let c = value(r, c0)?;
        // 3 / (h/100) = 300 / h; reduce to B / A by hand.
        let g = gcd(300, hundredths);
        let (b, a) = (300 / g, hundredths / g);
        ensure!(brackets_power(&c, r, a, b), "r={r} c0={c0}: C={c} does not bracket r^({b}/{a})");
    }
    let big = value(3, 0.089)?;
    ensure!(brackets_power(&big, 3, 89, 3000), "C(3, 0.089) = {big}");
    Ok(format!("2 worked values, 20 random pairs, C(3, 0.089) = {big}"))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn c6_tail() -> Outcome {
    let uniform = |k: u64| {
        LabelDistribution::from_rationals((0..k).map(|i| i.to_string()).collect(), vec![frac(1, k); k as usize])
            .expect("valid law")
    };
    let a = tail_select(&uniform(4), 3, 0.5).map_err(|e| e.to_string())?;
    ensure!(a.s_indices == [0, 1], "uniform-4 S {:?}", a.s_indices);
    ensure!(a.outside_mass_exact.as_deref() == Some("1/2"), "uniform-4 outside {:?}", a.outside_mass_exact);
    ensure!((a.tail_entropy - 0.5 * 4f64.ln()).abs() < 1e-12, "uniform-4 tail {}", a.tail_entropy);
    ensure!(a.verdict == "implication_holds" && a.tail_entropy >= 0.5 * 3f64.ln(), "uniform-4 verdict {}", a.verdict);
    let point = LabelDistribution::from_rationals(vec!["0".into(), "1".into()], vec![frac(1, 1), frac(0, 1)])
        .map_err(|e| e.to_string())?;
    let b = tail_select(&point, 2, 0.089).map_err(|e| e.to_string())?;
    ensure!(b.outside_mass_exact.as_deref() == Some("0") && b.verdict == "not_triggered", "point mass {b:?}");
    let c = tail_select(&uniform(100), 11, 0.5).map_err(|e| e.to_string())?;
    ensure!(c.outside_mass_exact.as_deref() == Some("9/10"), "uniform-100 outside {:?}", c.outside_mass_exact);
    ensure!((c.tail_entropy - 0.9 * 100f64.ln()).abs() < 1e-12, "uniform-100 tail {}", c.tail_entropy);

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let k = rng.random_range(3..60usize);
        let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>().powi(3)).collect();
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let cc = rng.random_range(2..k as u64 + 1);
        let dist = LabelDistribution::new((0..k).map(|j| j.to_string()).collect(), p.clone(), Provenance::Exact)
            .map_err(|e| e.to_string())?;
        let report = tail_select(&dist, cc, 0.2).map_err(|e| e.to_string())?;
        let direct: f64 = (0..k).filter(|j| !report.s_indices.contains(j)).map(|j| -p[j] * p[j].ln()).sum();
        ensure!((report.tail_entropy - direct).abs() < 1e-12, "distribution {i}: {} vs {direct}", report.tail_entropy);
    }
    Ok("3 worked examples exact, 100 random tails".into())
}

fn c7_homsearch() -> Outcome {
    let start = Instant::now();
    let mut replays = 0;
    for name in ["K2", "K3", "C5", "Petersen", "Heawood"] {
        let h = named_graph(name).map_err(|e| e.to_string())?;
        for (t, q) in [(0, 2), (1, 2), (2, 3)] {
            let out = search(&h, 3, t, SeedModel::Alphabet(q), &SearchOptions::default()).map_err(|e| e.to_string())?;
            ensure!(out.kind == OutcomeKind::ImpossibleByConstantSeeds, "{name} alphabet:{q} t={t}: {:?}", out.kind);
            let cert = out.certificate.ok_or("no certificate")?;
            let rule =
                random_rule(3, t, SeedModel::Alphabet(q), vertex_labels(&h), replays).map_err(|e| e.to_string())?;
            let w = cert.refutes(&rule, &h).map_err(|e| e.to_string())?.ok_or("certificate does not refute")?;
            ensure!(w.replays(&rule, &h).map_err(|e| e.to_string())?, "{name}: certificate witness does not replay");
            replays += 1;
        }
    }
    let c5 = named_graph("C5").map_err(|e| e.to_string())?;
    let options = SearchOptions { witness_cap: 625, ..Default::default() };
    let out = search(&c5, 3, 1, SeedModel::Rank, &options).map_err(|e| e.to_string())?;
    ensure!(out.kind == OutcomeKind::ExhaustedNone, "C5: {:?}", out.kind);
    ensure!(out.rules_examined == BigUint::from(625u32), "C5: {} rules", out.rules_examined);
    ensure!(!out.witness_sample.is_empty(), "C5: no witnesses");
    for w in &out.witness_sample {
        ensure!(
            w.replays(&c5, 3, 1, SeedModel::Rank).map_err(|e| e.to_string())?,
            "C5: witness {} fails",
            w.rule_index
        );
    }
    let k2 = named_graph("K2").map_err(|e| e.to_string())?;
    let out2 = search(&k2, 3, 1, SeedModel::Rank, &SearchOptions::default()).map_err(|e| e.to_string())?;
    ensure!(out2.kind == OutcomeKind::ExhaustedNone, "K2: {:?}", out2.kind);
    ensure!(out2.rules_examined == BigUint::from(16u32), "K2: {} rules", out2.rules_examined);
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "{replays} certificates replayed, C5 625 rules with {} witnesses, K2 16 rules, {:.1?}",
        out.witness_sample.len(),
        start.elapsed()
    ))
}

fn c8_emulation() -> Outcome {
    let g = random_regular(100_000, 3, 8).map_err(|e| e.to_string())?;
    let rule = LocalRule::max_seed_independent(3).map_err(|e| e.to_string())?;
    let (labeling, report) = run_on_graph(&rule, &g, 42).map_err(|e| e.to_string())?;
    let is = report.independent_set.as_ref().ok_or("no independent-set stats")?;
    ensure!((0.24..=0.26).contains(&is.in_fraction), "IN fraction {}", is.in_fraction);
    ensure!(is.adjacent_in_in == 0, "{} IN-IN edges", is.adjacent_in_in);
    ensure!(report.covered_fraction >= 0.99, "covered {}", report.covered_fraction);
    let bytes = |l: &_, r: &_| format!("{}{}", serde_json::to_string(r).unwrap(), format_labeling(&rule, l));
    let (labeling2, report2) = run_on_graph(&rule, &g, 42).map_err(|e| e.to_string())?;
    ensure!(bytes(&labeling, &report) == bytes(&labeling2, &report2), "repeat differs");
    Ok(format!("IN {:.4}, covered {:.5}, repeat byte-identical", is.in_fraction, report.covered_fraction))
}

fn c9_pipeline() -> Outcome {
    let petersen = named_graph("Petersen").map_err(|e| e.to_string())?;
    let constant =
        LocalRule::constant(3, 1, SeedModel::Rank, vertex_labels(&petersen), "0").map_err(|e| e.to_string())?;
    let a = theorem_pipeline(&constant, &petersen, 0.089, 5, MarginalMode::Exact).map_err(|e| e.to_string())?;
    ensure!(a.refuted_at == Some(1), "constant rule refuted at {:?}", a.refuted_at);
    ensure!(a.classification == "not a homomorphism (support)", "{}", a.classification);
    // IN -> 0, OUT -> 1, an edge of Petersen; (1, 1) carries mass 1/2.
    let max_seed = LocalRule::max_seed_independent(3).map_err(|e| e.to_string())?;
    let recoded = max_seed.recode(vertex_labels(&petersen), &[0, 1]).map_err(|e| e.to_string())?;
    let b = theorem_pipeline(&recoded, &petersen, 0.089, 5, MarginalMode::Exact).map_err(|e| e.to_string())?;
    ensure!(b.refuted_at == Some(1), "recoded rule refuted at {:?}", b.refuted_at);
    ensure!(b.support.mass_outside_exact.as_deref() == Some("1/2"), "{:?}", b.support.mass_outside_exact);

    let heawood = named_graph("Heawood").map_err(|e| e.to_string())?;
    let pair = PairDistribution::uniform_on_edges(&heawood).map_err(|e| e.to_string())?;
    let vertex = pair.marginal();
    let c = theorem_pipeline_from_laws(&vertex, &pair, &heawood, 0.089, 5).map_err(|e| e.to_string())?;
    ensure!(c.support.status == StepStatus::Pass, "step 1 {:?}", c.support.status);
    ensure!(c.entropy.status == StepStatus::Pass, "step 2 {:?}", c.entropy.status);
    ensure!((c.entropy.h_vertex - 14f64.ln()).abs() < 1e-9, "h_vertex {}", c.entropy.h_vertex);
    ensure!((c.entropy.bound - 3.0 * 3f64.ln()).abs() < 1e-12, "bound {}", c.entropy.bound);
    ensure!(c.tail.outside_mass_exact.as_deref() == Some("5/7"), "outside {:?}", c.tail.outside_mass_exact);
    ensure!(c.tail.s.len() == 4, "|S| = {}", c.tail.s.len());
    ensure!(c.acyclic.status == StepStatus::Pass && c.acyclic.girth == Girth::Finite(6), "step 4 {:?}", c.acyclic);
    ensure!(c.domain.domain_mass_exact.as_deref() == Some("2/7"), "domain {:?}", c.domain.domain_mass_exact);
    ensure!(c.domain.status == StepStatus::Pass && (c.domain.threshold - 0.911).abs() < 1e-12, "step 5 {:?}", c.domain);
    ensure!(c.refuted_at.is_none() && c.classification == NO_REFUTATION, "{}", c.classification);
    Ok("constant and recoded rules refuted at step 1; Heawood law: ln 14, 10/14, 4/14, no refutation".into())
}

fn c10_graphs() -> Outcome {
    let start = Instant::now();
    for (name, girth) in [("Petersen", 5), ("Heawood", 6), ("McGee", 7)] {
        let g = named_graph(name).map_err(|e| e.to_string())?;
        ensure!(g.girth() == Girth::Finite(girth), "{name}: girth {}", g.girth());
        let edges: Vec<_> = g.edges().collect();
        ensure!(brute_girth(g.n(), &edges) == Some(girth), "{name}: cycle enumeration disagrees");
    }
    let p = named_graph("Petersen").map_err(|e| e.to_string())?;
    let inv = exact_invariants(&p).map_err(|e| e.to_string())?;
    let edges: Vec<_> = p.edges().collect();
    ensure!(inv.independence_number == 4 && brute_alpha(10, &edges) == 4, "alpha");
    ensure!(inv.chromatic_number == 3 && brute_chi(10, &edges) == 3, "chi");
    within(start, Duration::from_secs(30))?;
    Ok(format!("girths 5, 6, 7; alpha 4, chi 3; {:.1?}", start.elapsed()))
}

fn main() -> ExitCode {
    let rules = criterion_rules();
    let criteria: Vec<Criterion> = vec![
        ("entropy chain rule", Box::new(|| c1_chain_rule(&rules))),
        ("edge-vertex inequality", Box::new(|| c2_edge_vertex(&rules))),
        ("neighbour and vertex entropy caps", Box::new(c3_entropy_caps)),
        ("max-seed independent-set laws", Box::new(c4_max_seed)),
        ("girth constant", Box::new(c5_constants)),
        ("tail selection", Box::new(c6_tail)),
        ("homomorphism search", Box::new(c7_homsearch)),
        ("emulation", Box::new(c8_emulation)),
        ("refutation pipeline", Box::new(c9_pipeline)),
        ("graph oracles", Box::new(c10_graphs)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
