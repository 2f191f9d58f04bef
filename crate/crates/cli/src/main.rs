mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use args::{Cli, Command};
use commands::Ctx;

/// Version of the envelope layout.
const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    schema_version: u32,
    tool_version: &'static str,
    command: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    payload: Value,
}

/// Payload keys whose values are entropies in nats.
const ENTROPY_KEYS: [&str; 7] =
    ["h_vertex", "h_edge", "h_nbr_given_vertex", "slack_edge_vertex", "tail_entropy", "tail_bound", "c0_ln_c"];

/// Verdicts whose margin is a difference of entropies.
const ENTROPY_CHECKS: [&str; 3] = ["edge_vertex", "nbr_entropy_cap", "vertex_entropy_cap"];

/// Rescales every entropy-valued number in `v` from nats to bits.
fn to_bits(v: &mut Value) {
    let scale = |x: &mut Value| {
        if let Some(f) = x.as_f64() {
            *x = Value::from(f / std::f64::consts::LN_2);
        }
    };
    match v {
        Value::Object(map) => {
            let entropy_verdict = map.get("check").and_then(Value::as_str).is_some_and(|c| ENTROPY_CHECKS.contains(&c));
            for (key, x) in map.iter_mut() {
                if ENTROPY_KEYS.contains(&key.as_str()) || (entropy_verdict && key == "margin") {
                    scale(x);
                } else if key == "entropy" && x.get("bound").is_some() {
                    // The pipeline's entropy step: all three numbers are entropies.
                    for k in ["h_vertex", "bound", "margin"] {
                        if let Some(y) = x.get_mut(k) {
                            scale(y);
                        }
                    }
                } else {
                    to_bits(x);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(to_bits),
        _ => {}
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx { seed: cli.global.seed, out: cli.global.out.as_deref() };
    let result = match cli.command {
        Command::Graph(c) => commands::graph(c, &ctx),
        Command::Rule(c) => commands::rule(c, &ctx),
        Command::Entropy(c) => commands::entropy_cmd(c, &ctx),
        Command::Hom(c) => commands::hom(c, &ctx),
        Command::Sim(c) => commands::sim(c, &ctx),
    };
    let mut outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if cli.global.bits {
        to_bits(&mut outcome.payload);
        if let Value::Object(map) = &mut outcome.payload {
            map.insert("units".into(), Value::from("bits"));
        }
    }
    let timestamp =
        (!cli.global.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let envelope = ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: &argv,
        timestamp,
        payload: outcome.payload,
    };
    let line = serde_json::to_string(&envelope).expect("envelope serializes");
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
