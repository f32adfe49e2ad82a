//! First-order formulas over the sheaves of a truncated space, the forcing
//! relation with checkable derivations, and the disjoint-refinement machinery
//! behind choice in sheaves.

mod cc;
mod eval;
mod syntax;

pub use cc::{choice_amalgamation, choice_amalgamation_seq, cc_refine};
pub(crate) use cc::check_refinement;
pub use eval::{
    check_derivation, classical_eval, force, forced_set, AtomTable, Datum, Derivation, Env,
    ExistsPiece, ForceVerdict, ForcingContext, OrPiece, Value,
};
pub use syntax::{parse_checked, parse_formula, sort_check, sort_check_with, Formula, Signature, Sort, Term};
