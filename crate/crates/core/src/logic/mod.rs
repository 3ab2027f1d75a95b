//! Goal language: syntax, parsing, normal forms, fragments and semantics.

pub mod classify;
pub mod eval;
pub mod formula;
pub mod nnf;
pub mod parse;
pub mod signature;

pub use classify::{classify, goal_type_of, is_guarded, is_kw_formula, FragmentReport, TypeSet};
pub use eval::{check_validity_small, eval, eval_everywhere, Observation};
pub use formula::Formula;
pub use nnf::{normalize_trivial, to_nnf, to_nnf_expanded};
pub use parse::{parse_formula, ParseError};
pub use signature::{PlayerId, Signature, VarId};
