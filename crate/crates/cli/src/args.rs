use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use fiid_core::SeedModel;

/// Factor-of-i.i.d. rules on regular trees: laws, entropy audits,
/// homomorphism search and emulation. Reports are JSON lines on stdout.
///
/// Exit status: 0 success, 1 an audited property fails, 2 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "fiid", version, max_term_width = 100)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master RNG seed. Randomized commands generate one and record it when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp from the report envelope, making output byte-reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Report entropies in bits instead of nats. Affects only the output.
    #[arg(long, global = true)]
    pub bits: bool,
    /// Write the command's artifact (graph, rule or labeling file) to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite graphs: generation, profiles and exact invariants.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Local rules: built-in, random and stored.
    #[command(subcommand)]
    Rule(RuleCmd),
    /// Label laws and entropy inequalities.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Homomorphism rules into a target graph.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Emulation on finite graphs and the refutation pipeline.
    #[command(subcommand)]
    Sim(SimCmd),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Uniform random d-regular simple graph (configuration model with rejection).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Size, girth, regularity, bipartiteness and connectivity.
    Profile {
        /// Named graph (K2, K3, K4, C5, Petersen, Heawood, McGee) or graph file.
        #[arg(long)]
        target: String,
    },
    /// Exact independence and chromatic numbers (at most 40 vertices).
    Invariants {
        /// Named graph or graph file.
        #[arg(long)]
        target: String,
    },
}

/// Rule class and labels for built-in rules; ignored for rule files except
/// `--recode`.
#[derive(Debug, Clone, Args)]
pub struct RuleClass {
    /// Tree degree.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Rule radius.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Seed model: alphabet:q, rank or hybrid:q.
    #[arg(long, default_value = "rank")]
    pub model: SeedModel,
    /// Comma-separated output alphabet (default: the target's vertex indices when a target is given).
    #[arg(long)]
    pub labels: Option<String>,
    /// Output of the constant rule.
    #[arg(long)]
    pub label: Option<String>,
    /// Comma-separated new label for each output, in alphabet order.
    #[arg(long)]
    pub recode: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum RuleCmd {
    /// Instantiate a built-in rule.
    Make {
        /// builtin:constant or builtin:max_seed_independent.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
    },
    /// Uniformly random output per canonical ball.
    Random {
        #[command(flatten)]
        class: RuleClass,
    },
    /// Summary and table of a rule.
    Show {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
        /// Include the full table.
        #[arg(long)]
        entries: bool,
    },
}

#[derive(Debug, Args)]
pub struct LawMode {
    /// Exact laws by enumeration (the default unless --samples is given).
    #[arg(long)]
    pub exact: bool,
    /// Monte Carlo sample count (edges sampled).
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum EntropyCmd {
    /// Exact vertex and edge label laws and their entropies.
    Exact {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
    },
    /// Monte Carlo vertex and edge label laws.
    Mc {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Edge-vertex inequality, support and entropy caps. Exits 1 when a check fails.
    Audit {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
        #[command(flatten)]
        mode: LawMode,
        /// Target graph for the support check and the caps.
        #[arg(long)]
        target: Option<String>,
        /// Regularity for the caps (default: the target's degree).
        #[arg(long)]
        r: Option<usize>,
    },
    /// Least integer above r^(3/c0).
    Constant {
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 0.089)]
        c0: f64,
    },
    /// Heaviest C-1 labels and the tail-entropy chain. Exits 1 when the chain breaks.
    #[command(group(ArgGroup::new("source").required(true).args(["rule", "probs"])))]
    Tail {
        /// builtin:name or rule file; its vertex law is used.
        #[arg(long)]
        rule: Option<String>,
        /// Comma-separated probabilities, as fractions (1/4) or decimals; labels are 0, 1, ...
        #[arg(long)]
        probs: Option<String>,
        #[command(flatten)]
        class: RuleClass,
        #[command(flatten)]
        mode: LawMode,
        #[arg(long = "C")]
        c: u64,
        #[arg(long, default_value_t = 0.089)]
        c0: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum HomCmd {
    /// Is the rule a homomorphism into the target? Exits 1 on a violation.
    Check {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
        #[arg(long)]
        target: String,
        /// Sampled configurations when exhaustive checking is over budget.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Exhaustive search of a rule class for a homomorphism rule.
    Search {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value = "rank")]
        model: SeedModel,
        /// Prefix checks before stopping with a resume cursor.
        #[arg(long)]
        budget: Option<u64>,
        /// Rule index from an earlier budget-exceeded run.
        #[arg(long)]
        resume: Option<String>,
        /// Refutation witnesses kept (reservoir sample).
        #[arg(long)]
        witness_cap: Option<usize>,
        /// Enumerate alphabet models instead of answering with the constant-seed certificate.
        #[arg(long)]
        no_shortcut: bool,
    },
    /// Constant-seed certificate against every alphabet-model rule.
    Certificate {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Must be alphabet:q.
        #[arg(long, default_value = "alphabet:2")]
        model: SeedModel,
        /// Also replay the certificate against this rule.
        #[arg(long)]
        rule: Option<String>,
        /// Output of a builtin:constant replay rule.
        #[arg(long, requires = "rule")]
        label: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SimCmd {
    /// Run a rule on a finite graph; --out dumps the labeling.
    #[command(group(ArgGroup::new("substrate").required(true).args(["graph", "n"])))]
    Run {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        class: RuleClass,
        /// Named graph or graph file to run on.
        #[arg(long)]
        graph: Option<String>,
        /// Run on a random d-regular graph with this many vertices, generated from --seed.
        #[arg(long)]
        n: Option<usize>,
        /// Count covered edges whose labels are not adjacent here.
        #[arg(long)]
        target: Option<String>,
    },
    /// Five-step refutation pipeline against a regular target.
    #[command(group(ArgGroup::new("source").required(true).args(["rule", "law"])))]
    Pipeline {
        /// builtin:name or rule file.
        #[arg(long)]
        rule: Option<String>,
        /// Synthetic law instead of a rule: uniform-edges.
        #[arg(long)]
        law: Option<String>,
        #[command(flatten)]
        class: RuleClass,
        #[command(flatten)]
        mode: LawMode,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0.089)]
        c0: f64,
        #[arg(long = "C")]
        c: u64,
    },
}
