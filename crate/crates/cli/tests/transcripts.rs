//! Golden transcripts and exit-code checks for every subcommand.
//!
//! Goldens live in `tests/golden/<name>.jsonl`; run with `UPDATE_GOLDEN=1`
//! to rewrite them after an intended output change.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fiid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiid")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Runs with `--no-timestamp`, checks the exit code and returns the payload.
fn payload(args: &[&str], code: i32) -> Value {
    let mut full = vec!["--no-timestamp"];
    full.extend_from_slice(args);
    let out = fiid(&full);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "one JSON line per run");
    let env: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(env["schema_version"], 1);
    assert_eq!(env["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(env.get("timestamp").is_none());
    env["payload"].clone()
}

fn golden(name: &str, args: &[&str], code: i32) {
    let mut full = vec!["--no-timestamp"];
    full.extend_from_slice(args);
    let out = fiid(&full);
    assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.jsonl"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(text, expected, "golden {name} differs");
}

#[test]
fn graph_goldens() {
    golden("graph_gen", &["graph", "gen", "--n", "12", "--d", "3", "--seed", "4"], 0);
    golden("graph_profile", &["graph", "profile", "--target", "McGee"], 0);
    golden("graph_invariants", &["graph", "invariants", "--target", "Petersen"], 0);
}

#[test]
fn rule_goldens() {
    golden("rule_make", &["rule", "make", "--rule", "builtin:max_seed_independent"], 0);
    golden("rule_random", &["rule", "random", "--labels", "a,b,c", "--t", "1", "--seed", "7"], 0);
    golden(
        "rule_show",
        &[
            "rule",
            "show",
            "--rule",
            "builtin:constant",
            "--labels",
            "x,y",
            "--label",
            "y",
            "--model",
            "alphabet:2",
            "--entries",
        ],
        0,
    );
}

#[test]
fn entropy_goldens() {
    golden("entropy_exact", &["entropy", "exact", "--rule", "builtin:max_seed_independent"], 0);
    golden(
        "entropy_mc",
        &["entropy", "mc", "--rule", "builtin:max_seed_independent", "--samples", "20000", "--seed", "3"],
        0,
    );
    golden("entropy_audit", &["entropy", "audit", "--rule", "builtin:max_seed_independent", "--exact"], 0);
    golden("entropy_constant", &["entropy", "constant", "--r", "3", "--c0", "0.3"], 0);
    golden("entropy_tail", &["entropy", "tail", "--probs", "1/4,1/4,1/4,1/4", "--C", "3", "--c0", "0.5"], 0);
}

#[test]
fn hom_goldens() {
    golden("hom_check", &["hom", "check", "--rule", "builtin:constant", "--label", "2", "--target", "K4"], 1);
    golden(
        "hom_search",
        &["hom", "search", "--target", "C5", "--d", "3", "--t", "1", "--model", "rank", "--witness-cap", "3"],
        0,
    );
    golden("hom_certificate", &["hom", "certificate", "--target", "Petersen", "--model", "alphabet:2", "--t", "1"], 0);
}

#[test]
fn sim_goldens() {
    golden("sim_run", &["sim", "run", "--rule", "builtin:max_seed_independent", "--n", "2000", "--seed", "1"], 0);
    golden("sim_pipeline", &["sim", "pipeline", "--law", "uniform-edges", "--target", "Heawood", "--C", "5"], 0);
}

#[test]
fn documented_examples() {
    assert_eq!(payload(&["entropy", "constant", "--r", "3", "--c0", "0.3"], 0)["C"], 59050);
    let search = payload(&["hom", "search", "--target", "C5", "--d", "3", "--t", "1", "--model", "rank"], 0);
    assert_eq!(search["kind"], "ExhaustedNone");
    assert_eq!(search["rules_examined"], 625);
    let audit = payload(&["entropy", "audit", "--rule", "builtin:max_seed_independent", "--exact"], 0);
    assert!((audit["slack_edge_vertex"].as_f64().unwrap() - 0.289941).abs() < 1e-6);
    assert_eq!(audit["verdicts"][0]["check"], "edge_vertex");
    assert_eq!(audit["verdicts"][0]["pass"], true);
}

#[test]
fn large_constant_is_a_string() {
    let p = payload(&["entropy", "constant", "--r", "3", "--c0", "0.05"], 0);
    assert!(p["C"].is_string(), "{p}");
    assert_eq!(p["overflow"], false);
}

#[test]
fn failing_audits_exit_one() {
    // OUT-OUT pairs have mass 1/2 and are not edges of K2.
    let p = payload(
        &["entropy", "audit", "--rule", "builtin:max_seed_independent", "--recode", "0,1", "--target", "K2"],
        1,
    );
    assert_eq!(p["verdicts"][1]["check"], "support");
    assert_eq!(p["verdicts"][1]["pass"], false);
    // Uniform mass on 100 labels with C = 3: the tail chain still holds.
    let probs = vec!["1/100"; 100].join(",");
    payload(&["entropy", "tail", "--probs", &probs, "--C", "3", "--c0", "0.5"], 0);
}

#[test]
fn pipeline_refutes_constant_and_recoded_rules() {
    let p = payload(
        &["sim", "pipeline", "--rule", "builtin:constant", "--label", "0", "--target", "Petersen", "--C", "5"],
        0,
    );
    assert_eq!(p["refuted_at"], 1);
    assert_eq!(p["classification"], "not a homomorphism (support)");
    let p = payload(
        &[
            "sim",
            "pipeline",
            "--rule",
            "builtin:max_seed_independent",
            "--recode",
            "0,1",
            "--target",
            "Petersen",
            "--C",
            "5",
        ],
        0,
    );
    assert_eq!(p["refuted_at"], 1);
    assert_eq!(p["support"]["mass_outside_exact"], "1/2");
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(fiid(&["bogus"]).status.code(), Some(2));
    assert_eq!(fiid(&["graph", "profile"]).status.code(), Some(2));
    assert_eq!(fiid(&["graph", "profile", "--target", "/nonexistent/graph"]).status.code(), Some(2));
    assert_eq!(fiid(&["entropy", "constant", "--r", "3", "--c0", "2"]).status.code(), Some(2));
    assert_eq!(fiid(&["rule", "make", "--rule", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(fiid(&["hom", "certificate", "--target", "K4", "--model", "rank"]).status.code(), Some(2));
    assert_eq!(fiid(&["entropy", "tail", "--C", "3"]).status.code(), Some(2));
}

#[test]
fn identical_commands_give_identical_bytes() {
    let args = ["--no-timestamp", "sim", "run", "--rule", "builtin:max_seed_independent", "--n", "3000", "--seed", "9"];
    assert_eq!(fiid(&args).stdout, fiid(&args).stdout);
    let args = [
        "--no-timestamp",
        "entropy",
        "mc",
        "--rule",
        "builtin:max_seed_independent",
        "--samples",
        "5000",
        "--seed",
        "2",
    ];
    assert_eq!(fiid(&args).stdout, fiid(&args).stdout);
}

#[test]
fn timestamp_present_by_default() {
    let out = fiid(&["entropy", "constant", "--r", "2", "--c0", "0.75"]);
    let env: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(env["timestamp"].is_u64());
    assert_eq!(env["payload"]["C"], 17);
}

#[test]
fn generated_seeds_are_recorded() {
    let p = payload(&["graph", "gen", "--n", "8"], 0);
    let seed = p["rng_seed"].as_u64().unwrap().to_string();
    let again = payload(&["graph", "gen", "--n", "8", "--seed", &seed], 0);
    assert_eq!(p["graph"], again["graph"]);
}

#[test]
fn artifacts_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("fiid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("g.txt");
    let rule = dir.join("r.rule");
    let labeling = dir.join("labels.txt");
    let g = graph.to_str().unwrap();
    let r = rule.to_str().unwrap();
    payload(&["graph", "gen", "--n", "50", "--seed", "1", "--out", g], 0);
    payload(&["rule", "make", "--rule", "builtin:max_seed_independent", "--out", r], 0);
    let from_file = payload(&["entropy", "exact", "--rule", r], 0);
    let builtin = payload(&["entropy", "exact", "--rule", "builtin:max_seed_independent"], 0);
    assert_eq!(from_file, builtin);
    let sim =
        payload(&["sim", "run", "--rule", r, "--graph", g, "--seed", "2", "--out", labeling.to_str().unwrap()], 0);
    let lines = std::fs::read_to_string(&labeling).unwrap();
    assert_eq!(lines.lines().count() as u64, sim["labeled"].as_u64().unwrap());
    assert!(lines.lines().all(|l| l.ends_with(" IN") || l.ends_with(" OUT")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_documents_every_flag() {
    let top = stdout(&fiid(&["--help"]));
    for flag in ["--seed", "--threads", "--no-timestamp", "--out", "--bits"] {
        assert!(top.contains(flag), "top-level help lacks {flag}");
    }
    let cases: [(&[&str], &[&str]); 4] = [
        (&["hom", "search", "--help"], &["--target", "--d", "--t", "--model"]),
        (&["entropy", "tail", "--help"], &["--C", "--c0", "--rule", "--samples"]),
        (&["sim", "pipeline", "--help"], &["--target", "--C", "--c0", "--rule"]),
        (&["entropy", "audit", "--help"], &["--rule", "--exact", "--samples", "--target"]),
    ];
    for (args, flags) in cases {
        let text = stdout(&fiid(args));
        for flag in flags {
            assert!(text.contains(flag), "{args:?} help lacks {flag}");
        }
    }
}

#[test]
fn bits_flag_rescales_entropies_only() {
    let nats = payload(&["entropy", "audit", "--rule", "builtin:max_seed_independent", "--exact"], 0);
    let bits = payload(&["--bits", "entropy", "audit", "--rule", "builtin:max_seed_independent", "--exact"], 0);
    let ln2 = std::f64::consts::LN_2;
    for key in ["h_vertex", "h_edge", "h_nbr_given_vertex", "slack_edge_vertex"] {
        let (n, b) = (nats[key].as_f64().unwrap(), bits[key].as_f64().unwrap());
        assert!((n / ln2 - b).abs() < 1e-12, "{key}");
    }
    assert_eq!(bits["units"], "bits");
    assert_eq!(nats["verdicts"][0]["pass"], bits["verdicts"][0]["pass"]);
    let p = payload(&["--bits", "sim", "pipeline", "--law", "uniform-edges", "--target", "Heawood", "--C", "5"], 0);
    assert!((p["entropy"]["h_vertex"].as_f64().unwrap() - 14f64.log2()).abs() < 1e-9);
    assert_eq!(p["tail"]["outside_mass_exact"], "5/7");
}

#[test]
fn threads_flag_is_accepted() {
    let p = payload(
        &["--threads", "2", "sim", "run", "--rule", "builtin:max_seed_independent", "--n", "500", "--seed", "1"],
        0,
    );
    let q = payload(&["sim", "run", "--rule", "builtin:max_seed_independent", "--n", "500", "--seed", "1"], 0);
    assert_eq!(p, q);
}
