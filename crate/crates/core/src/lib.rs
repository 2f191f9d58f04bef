//! Finite-radius factor-of-i.i.d. rules on the `d`-regular tree: exact and
//! sampled label laws, entropy audits, homomorphism-rule search into finite
//! targets, and emulation on finite graphs.
//!
//! The report and data types shared by the command-line front end and the
//! benchmarks are re-exported at the crate root.

pub mod entropy;
pub mod graphs;
pub mod homsearch;
pub mod rules;
pub mod simulate;

pub use entropy::{
    EntropyError, EntropyReport, GirthConstant, LabelDistribution, PairDistribution, Provenance, TailReport,
};
pub use graphs::{FiniteGraph, Girth, GraphError, GraphProfile, Side};
pub use homsearch::{HomCheck, HomError, ImpossibilityCertificate, OutcomeKind, SearchOutcome};
pub use rules::{CanonicalBall, LocalRule, RuleError, SeedModel};
pub use simulate::{MarginalMode, PipelineReport, SimError, SimulationReport};
