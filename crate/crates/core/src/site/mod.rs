//! Preorders of basic opens, sieves, inductive closure and covering systems.

mod axioms;
mod basis;
mod covering;
mod elemset;
mod inductive;
mod sieve;
mod space;

pub use axioms::{check_topology, TopologyReport, TopologyViolation};
pub use basis::Basis;
pub use covering::{
    check_induction_transcript, cover_induction, generate_topology, AxiomViolation,
    CoveringSystem, CoveringSystemDoc, InductionStep, InductionTranscript,
};
pub use elemset::{Elem, ElemSet};
pub use inductive::{set, InductiveDefinition, Rule};
pub use sieve::{Downset, Sieve};
pub use space::{
    ClosedSieve, CoverDerivation, CoverRule, CoverVerdict, CoverWitness, Fuel, Space,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("relation is not a preorder: {0}")]
    NotPreorder(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("{elem} is not below the root {root}")]
    NotBelowRoot { elem: String, root: String },
    #[error("{0} is not derivable")]
    NotDerivable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("covering axiom fails for p={p}, alpha={alpha:?}, q={q}")]
    CoveringAxiomViolation {
        p: String,
        alpha: Vec<String>,
        q: String,
    },
    #[error("sieve does not cover {root}")]
    NotACover { root: String },
    #[error("induction hypothesis fails at {elem} for family {family:?}")]
    HypothesisFails { elem: String, family: Vec<String> },
    #[error("predicate fails on sieve member {0}")]
    PremiseFails(String),
}
