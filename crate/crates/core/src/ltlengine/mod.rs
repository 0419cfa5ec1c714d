//! Classical LTL machinery: Kripke structures, a tableau Büchi construction,
//! model checking with counterexample lassos and satisfiability with
//! witness lassos.

mod buchi;
mod kripke;
pub(crate) mod ndfs;

use serde::Serialize;

pub use buchi::{ltl_to_buchi, BuchiAutomaton, Transition, MAX_STATES};
pub use kripke::{parse_kripke, KripkeStructure};

use crate::error::{Error, Result};
use crate::evalcore::eval_ltl;
use crate::formula::Formula;
use crate::team::{LassoTrace, PropSet, Team};
use ndfs::{find_accepting_lasso, BuchiGraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Trace(LassoTrace),
    Team(Team),
}

/// Which part of a normal-form disjunct a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Alpha,
    Beta(usize),
}

/// Outcome of one LTL check made on behalf of a team-level procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub disjunct: usize,
    pub part: Part,
    pub formula: String,
    pub holds: bool,
    /// A counterexample (for model checks) or model of the checked formula.
    pub trace: Option<LassoTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub disjunct_index: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl Verdict {
    pub(crate) fn new(holds: bool, witness: Option<Witness>) -> Verdict {
        Verdict {
            holds,
            witness,
            disjunct_index: None,
            diagnostics: vec![],
        }
    }

    pub fn witness_trace(&self) -> Option<&LassoTrace> {
        match &self.witness {
            Some(Witness::Trace(t)) => Some(t),
            _ => None,
        }
    }

    pub fn witness_team(&self) -> Option<&Team> {
        match &self.witness {
            Some(Witness::Team(t)) => Some(t),
            _ => None,
        }
    }
}

struct Product<'a> {
    k: &'a KripkeStructure,
    a: &'a BuchiAutomaton,
}

impl BuchiGraph for Product<'_> {
    type Node = (usize, usize);
    type Letter = PropSet;
    fn initial(&self) -> Vec<(usize, usize)> {
        vec![(self.k.initial(), self.a.initial)]
    }
    fn successors(&self, &(s, q): &(usize, usize)) -> Vec<(PropSet, (usize, usize))> {
        let label = self.k.label(s);
        let mut out = Vec::new();
        for tr in self.a.transitions[q].iter().filter(|tr| tr.enabled(label)) {
            for &s2 in self.k.successors(s) {
                out.push((label.clone(), (s2, tr.target)));
            }
        }
        out
    }
    fn accepting(&self, &(_, q): &(usize, usize)) -> bool {
        self.a.accepting[q]
    }
}

fn require_ltl(f: &Formula) -> Result<()> {
    if f.is_ltl() {
        Ok(())
    } else {
        Err(Error::fragment(format!("not an LTL formula: {f}")))
    }
}

/// Some trace of `k` violating `f`, or `None` if every trace satisfies it.
pub fn counterexample(k: &KripkeStructure, f: &Formula) -> Result<Option<LassoTrace>> {
    require_ltl(f)?;
    let neg = f.dual()?;
    let a = ltl_to_buchi(&neg)?;
    let Some(l) = find_accepting_lasso(&Product { k, a: &a }, MAX_STATES)? else {
        return Ok(None);
    };
    let w = buchi::lasso_of(l);
    if !k.generates(&w) {
        return Err(Error::Internal(format!("counterexample {w} is not a trace of the structure")));
    }
    if !eval_ltl(&w, &neg)? {
        return Err(Error::Internal(format!("counterexample {w} does not refute {f}")));
    }
    Ok(Some(w))
}

/// Whether every trace of `k` satisfies `f`; on failure the witness is a
/// violating trace of `k`.
pub fn mc_ltl(k: &KripkeStructure, f: &Formula) -> Result<Verdict> {
    Ok(match counterexample(k, f)? {
        None => Verdict::new(true, None),
        Some(w) => Verdict::new(false, Some(Witness::Trace(w))),
    })
}

/// A lasso satisfying `f`, if there is one.
pub fn model(f: &Formula) -> Result<Option<LassoTrace>> {
    require_ltl(f)?;
    let Some(w) = ltl_to_buchi(f)?.find_word()? else {
        return Ok(None);
    };
    if !eval_ltl(&w, f)? {
        return Err(Error::Internal(format!("model {w} does not satisfy {f}")));
    }
    Ok(Some(w))
}

pub fn sat_ltl(f: &Formula) -> Result<Verdict> {
    Ok(match model(f)? {
        Some(w) => Verdict::new(true, Some(Witness::Trace(w))),
        None => Verdict::new(false, None),
    })
}

#[cfg(test)]
mod tests;
