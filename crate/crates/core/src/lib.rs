//! Asynchronous TeamLTL: exact evaluators for set-based (lax) and
//! multiset-based (strict) team semantics over lasso traces, the ⊎-disjunctive
//! and quasi-flat normal forms, automata-based decision procedures, and the
//! time-evaluation-function fragment of TeamCTL.

pub mod decide;
pub mod error;
pub mod evalcore;
pub mod formula;
pub mod ltlengine;
pub mod normform;
pub mod sample;
pub mod team;
pub mod teamctl;

pub use error::{Error, Result};
pub use evalcore::{eval_lax, eval_lax_with, eval_ltl, eval_strict, eval_strict_with, EvalOptions, Limits, UntilBound};
pub use formula::{parse_formula, Formula, FragmentInfo};
pub use team::{LassoTrace, Multiteam, Team};
