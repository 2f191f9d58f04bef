use std::path::Path;

use anyhow::{bail, Context, Result};
use fiid_core::entropy::{
    audit, conditional_entropy, entropy, exact_marginals, exact_vertex_law, mc_marginals, min_girth_constant,
    tail_select, AuditInputs, LabelDistribution, PairDistribution,
};
use fiid_core::graphs::{
    exact_invariants, format_graph, named_graph, profile, random_regular, read_graph, NAMED_GRAPHS,
};
use fiid_core::homsearch::{
    alphabet_impossibility_certificate, is_homomorphism_rule_with, search, vertex_labels, HomCheck, SearchOptions,
    DEFAULT_FALSIFICATION_SAMPLES,
};
use fiid_core::rules::{builtin_rule, format_rule, random_rule, read_rule, write_rule, RuleParams};
use fiid_core::simulate::{
    format_labeling, run_on_graph_with, theorem_pipeline, theorem_pipeline_from_laws, MarginalMode,
};
use fiid_core::{FiniteGraph, LocalRule};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::{EntropyCmd, GraphCmd, HomCmd, LawMode, RuleClass, RuleCmd, SimCmd};

/// A command's report and whether its audited property held.
pub struct Outcome {
    pub payload: Value,
    pub pass: bool,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { payload, pass: true }
    }
}

pub struct Ctx<'a> {
    pub seed: Option<u64>,
    pub out: Option<&'a Path>,
}

impl Ctx<'_> {
    /// The master seed, generated when none was given.
    fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(rand::random)
    }

    fn write(&self, text: &str) -> Result<Option<String>> {
        match self.out {
            Some(p) => {
                std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                Ok(Some(p.display().to_string()))
            }
            None => Ok(None),
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn load_graph(spec: &str) -> Result<FiniteGraph> {
    if NAMED_GRAPHS.contains(&spec) {
        return Ok(named_graph(spec)?);
    }
    read_graph(Path::new(spec)).with_context(|| format!("`{spec}` is neither a named graph nor a readable graph file"))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

/// Loads `builtin:name` or a rule file, then applies `--recode`.
fn load_rule(spec: &str, class: &RuleClass, target: Option<&FiniteGraph>) -> Result<LocalRule> {
    let default_labels = || target.map(vertex_labels).unwrap_or_default();
    let rule = match spec.strip_prefix("builtin:") {
        Some(name) => {
            let params = RuleParams {
                d: class.d,
                t: class.t,
                model: class.model,
                output_alphabet: class.labels.as_deref().map(split_list).unwrap_or_else(default_labels),
                label: class.label.clone(),
                ..RuleParams::default()
            };
            builtin_rule(name, &params)?
        }
        None => read_rule(Path::new(spec))?,
    };
    let Some(recode) = &class.recode else {
        return Ok(rule);
    };
    let targets = split_list(recode);
    if targets.len() != rule.output_alphabet().len() {
        bail!("--recode needs {} labels, got {}", rule.output_alphabet().len(), targets.len());
    }
    let mut alphabet = class.labels.as_deref().map(split_list).unwrap_or_else(default_labels);
    if alphabet.is_empty() {
        for l in &targets {
            if !alphabet.contains(l) {
                alphabet.push(l.clone());
            }
        }
    }
    let mapping = targets
        .iter()
        .map(|l| {
            alphabet.iter().position(|a| a == l).with_context(|| format!("recode label `{l}` is not in the alphabet"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rule.recode(alphabet, &mapping)?)
}

fn rule_summary(rule: &LocalRule) -> Value {
    json!({
        "d": rule.d(),
        "t": rule.t(),
        "model": rule.model(),
        "output_alphabet": rule.output_alphabet(),
        "canonical_balls": rule.catalog().len(),
    })
}

fn laws(rule: &LocalRule, mode: &LawMode, seed: u64) -> Result<(LabelDistribution, PairDistribution)> {
    Ok(match mode.samples.filter(|_| !mode.exact) {
        Some(n) => mc_marginals(rule, n, seed)?,
        None => exact_marginals(rule)?,
    })
}

fn uses_samples(mode: &LawMode) -> bool {
    mode.samples.is_some() && !mode.exact
}

fn laws_payload(rule: &LocalRule, vertex: &LabelDistribution, pair: &PairDistribution, seed: Option<u64>) -> Value {
    let cond = conditional_entropy(pair);
    let mut v = json!({
        "rule": rule_summary(rule),
        "provenance": vertex.provenance().combine(pair.provenance()),
        "vertex": vertex,
        "pair": pair,
        "h_vertex": entropy(vertex),
        "h_edge": cond.joint,
        "h_nbr_given_vertex": cond.conditional,
    });
    if let Some(s) = seed {
        v["rng_seed"] = json!(s);
    }
    v
}

pub fn graph(cmd: GraphCmd, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        GraphCmd::Gen { n, d } => {
            let seed = ctx.seed();
            let g = random_regular(n, d, seed)?;
            let text = format_graph(&g);
            let mut payload = json!({ "n": n, "d": d, "rng_seed": seed, "profile": profile(&g) });
            match ctx.write(&text)? {
                Some(path) => payload["path"] = json!(path),
                None => payload["graph"] = json!(text),
            }
            Ok(Outcome::ok(payload))
        }
        GraphCmd::Profile { target } => Ok(Outcome::ok(to_value(&profile(&load_graph(&target)?)))),
        GraphCmd::Invariants { target } => {
            let g = load_graph(&target)?;
            let inv = exact_invariants(&g)?;
            Ok(Outcome::ok(
                json!({ "profile": profile(&g), "independence_number": inv.independence_number, "chromatic_number": inv.chromatic_number }),
            ))
        }
    }
}

pub fn rule(cmd: RuleCmd, ctx: &Ctx) -> Result<Outcome> {
    let (rule, seed, entries) = match cmd {
        RuleCmd::Make { rule, class } => {
            if !rule.starts_with("builtin:") {
                bail!("rule make takes builtin:name, got `{rule}`");
            }
            (load_rule(&rule, &class, None)?, None, false)
        }
        RuleCmd::Random { class } => {
            let labels = class.labels.as_deref().map(split_list).context("rule random needs --labels")?;
            let seed = ctx.seed();
            (random_rule(class.d, class.t, class.model, labels, seed)?, Some(seed), false)
        }
        RuleCmd::Show { rule, class, entries } => (load_rule(&rule, &class, None)?, None, entries),
    };
    let mut payload = rule_summary(&rule);
    if let Some(s) = seed {
        payload["rng_seed"] = json!(s);
    }
    if entries {
        payload["entries"] = rule.entries().map(|(code, label)| json!([code, label])).collect();
    }
    match ctx.out {
        Some(p) => {
            write_rule(&rule, p)?;
            payload["path"] = json!(p.display().to_string());
        }
        None if !entries => payload["rule"] = json!(format_rule(&rule)),
        None => {}
    }
    Ok(Outcome::ok(payload))
}

/// Parses `a/b` or a decimal as an exact rational.
fn parse_prob(s: &str) -> Result<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (i64, i64) = (a.trim().parse()?, b.trim().parse()?);
        if b == 0 {
            bail!("zero denominator in `{s}`");
        }
        return Ok(BigRational::new(a.into(), b.into()));
    }
    Ok(fiid_core::entropy::decimal_rational(s.trim().parse::<f64>()?)?)
}

pub fn entropy_cmd(cmd: EntropyCmd, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        EntropyCmd::Exact { rule, class } => {
            let rule = load_rule(&rule, &class, None)?;
            let (vertex, pair) = exact_marginals(&rule)?;
            Ok(Outcome::ok(laws_payload(&rule, &vertex, &pair, None)))
        }
        EntropyCmd::Mc { rule, class, samples } => {
            let rule = load_rule(&rule, &class, None)?;
            let seed = ctx.seed();
            let (vertex, pair) = mc_marginals(&rule, samples, seed)?;
            Ok(Outcome::ok(laws_payload(&rule, &vertex, &pair, Some(seed))))
        }
        EntropyCmd::Audit { rule, class, mode, target, r } => {
            let h = target.as_deref().map(load_graph).transpose()?;
            let rule = load_rule(&rule, &class, h.as_ref())?;
            let seed = uses_samples(&mode).then(|| ctx.seed());
            let (vertex, pair) = laws(&rule, &mode, seed.unwrap_or(0))?;
            let report = audit(AuditInputs { vertex: &vertex, pair: &pair, r, h: h.as_ref() })?;
            let mut payload = to_value(&report);
            payload["rule"] = rule_summary(&rule);
            if let Some(s) = seed {
                payload["rng_seed"] = json!(s);
            }
            Ok(Outcome { pass: report.passed(), payload })
        }
        EntropyCmd::Constant { r, c0 } => Ok(Outcome::ok(to_value(&min_girth_constant(r, c0)?))),
        EntropyCmd::Tail { rule, probs, class, mode, c, c0 } => {
            let mut seed = None;
            let dist = match (rule, probs) {
                (Some(rule), _) => {
                    let rule = load_rule(&rule, &class, None)?;
                    if uses_samples(&mode) {
                        let s = ctx.seed();
                        seed = Some(s);
                        laws(&rule, &mode, s)?.0
                    } else {
                        exact_vertex_law(&rule)?
                    }
                }
                (None, Some(probs)) => {
                    let p = probs.split(',').map(parse_prob).collect::<Result<Vec<_>>>()?;
                    LabelDistribution::from_rationals((0..p.len()).map(|i| i.to_string()).collect(), p)?
                }
                (None, None) => unreachable!("clap requires --rule or --probs"),
            };
            let report = tail_select(&dist, c, c0)?;
            let mut payload = to_value(&report);
            if let Some(s) = seed {
                payload["rng_seed"] = json!(s);
            }
            Ok(Outcome { pass: report.verdict != "implication_fails", payload })
        }
    }
}

pub fn hom(cmd: HomCmd, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        HomCmd::Check { rule, class, target, samples } => {
            let h = load_graph(&target)?;
            let rule = load_rule(&rule, &class, Some(&h))?;
            let seed = ctx.seed();
            let check = is_homomorphism_rule_with(&rule, &h, samples.unwrap_or(DEFAULT_FALSIFICATION_SAMPLES), seed)?;
            let mut payload = to_value(&check);
            payload["rule"] = rule_summary(&rule);
            if matches!(check, HomCheck::NoViolationFound { .. }) {
                payload["rng_seed"] = json!(seed);
            }
            Ok(Outcome { pass: !check.is_violation(), payload })
        }
        HomCmd::Search { target, d, t, model, budget, resume, witness_cap, no_shortcut } => {
            let h = load_graph(&target)?;
            let defaults = SearchOptions::default();
            let seed = ctx.seed.unwrap_or(defaults.rng_seed);
            let options = SearchOptions {
                step_budget: budget.unwrap_or(defaults.step_budget),
                resume_cursor: resume
                    .map(|r| r.parse::<BigUint>())
                    .transpose()
                    .context("--resume must be a non-negative integer")?,
                witness_cap: witness_cap.unwrap_or(defaults.witness_cap),
                constant_seed_shortcut: !no_shortcut,
                rng_seed: seed,
            };
            let outcome = search(&h, d, t, model, &options)?;
            let mut payload = to_value(&outcome);
            payload["rng_seed"] = json!(seed);
            Ok(Outcome::ok(payload))
        }
        HomCmd::Certificate { target, d, t, model, rule, label } => {
            let h = load_graph(&target)?;
            let Some(q) = model.tags().filter(|_| !model.has_ranks()) else {
                bail!("certificates exist for alphabet models only, got {model}");
            };
            let cert = alphabet_impossibility_certificate(&h, d, t, q)?;
            let mut payload = to_value(&cert);
            let mut pass = true;
            if let Some(spec) = rule {
                let class = RuleClass { d, t, model, labels: None, label, recode: None };
                let rule = load_rule(&spec, &class, Some(&h))?;
                let witness = cert.refutes(&rule, &h)?;
                pass = witness.is_some();
                payload["replay"] = json!({ "refuted": pass, "witness": witness });
            }
            Ok(Outcome { pass, payload })
        }
    }
}

pub fn sim(cmd: SimCmd, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        SimCmd::Run { rule, class, graph, n, target } => {
            let h = target.as_deref().map(load_graph).transpose()?;
            let rule = load_rule(&rule, &class, h.as_ref())?;
            let seed = ctx.seed();
            let g = match (graph, n) {
                (Some(spec), _) => load_graph(&spec)?,
                (None, Some(n)) => random_regular(n, rule.d(), seed)?,
                (None, None) => unreachable!("clap requires --graph or --n"),
            };
            let (labeling, report) = run_on_graph_with(&rule, &g, seed, h.as_ref())?;
            let mut payload = to_value(&report);
            if let Some(path) = ctx.write(&format_labeling(&rule, &labeling))? {
                payload["labeling_path"] = json!(path);
            }
            Ok(Outcome::ok(payload))
        }
        SimCmd::Pipeline { rule, law, class, mode, target, c0, c } => {
            let h = load_graph(&target)?;
            let report = match (rule, law.as_deref()) {
                (Some(spec), _) => {
                    let rule = load_rule(&spec, &class, Some(&h))?;
                    let mode = match mode.samples.filter(|_| !mode.exact) {
                        Some(samples) => MarginalMode::MonteCarlo { samples, seed: ctx.seed() },
                        None => MarginalMode::Exact,
                    };
                    let mut report = to_value(&theorem_pipeline(&rule, &h, c0, c, mode)?);
                    if let MarginalMode::MonteCarlo { seed, .. } = mode {
                        report["rng_seed"] = json!(seed);
                    }
                    report
                }
                (None, Some("uniform-edges")) => {
                    let pair = PairDistribution::uniform_on_edges(&h)?;
                    to_value(&theorem_pipeline_from_laws(&pair.marginal(), &pair, &h, c0, c)?)
                }
                (None, Some(other)) => {
                    bail!("unknown synthetic law `{other}` (expected uniform-edges)")
                }
                (None, None) => unreachable!("clap requires --rule or --law"),
            };
            Ok(Outcome::ok(report))
        }
    }
}
