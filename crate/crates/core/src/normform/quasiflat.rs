//! Quasi-flat normal form `⩔_i (α_i ∧ ⋀_j ∃β_ij)` for left-downward-closed
//! formulas with `~`.

use std::fmt;

use super::dnf::to_dnf;
use crate::error::{Error, Result};
use crate::evalcore::eval_ltl;
use crate::formula::Formula;
use crate::team::Team;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiFlatDisjunct {
    pub alpha: Formula,
    pub betas: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiFlatForm {
    pub disjuncts: Vec<QuasiFlatDisjunct>,
}

impl QuasiFlatDisjunct {
    fn new(alpha: Formula, betas: Vec<Formula>) -> Self {
        QuasiFlatDisjunct { alpha, betas }
    }

    pub fn holds_on(&self, team: &Team) -> Result<bool> {
        for t in team {
            if !eval_ltl(t, &self.alpha)? {
                return Ok(false);
            }
        }
        for b in &self.betas {
            let mut found = false;
            for t in team {
                if eval_ltl(t, b)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `α & E β_1 & …`; just `α` without betas.
    pub fn to_formula(&self) -> Formula {
        self.betas
            .iter()
            .fold(self.alpha.clone(), |acc, b| Formula::and(acc, Formula::exists(b.clone())))
    }
}

impl QuasiFlatForm {
    pub fn holds_on(&self, team: &Team) -> Result<bool> {
        for d in &self.disjuncts {
            if d.holds_on(team)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn to_formula(&self) -> Formula {
        self.disjuncts
            .iter()
            .map(QuasiFlatDisjunct::to_formula)
            .reduce(Formula::bor)
            .unwrap_or(Formula::Bot)
    }

    pub fn deduped(&self) -> QuasiFlatForm {
        let mut seen = std::collections::HashSet::new();
        QuasiFlatForm {
            disjuncts: self.disjuncts.iter().filter(|d| seen.insert((*d).clone())).cloned().collect(),
        }
    }
}

impl fmt::Display for QuasiFlatDisjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl fmt::Display for QuasiFlatForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.disjuncts.is_empty() {
            return writeln!(f, "bot");
        }
        for (i, d) in self.disjuncts.iter().enumerate() {
            writeln!(f, "[{i}] {d}")?;
        }
        Ok(())
    }
}

pub fn to_quasiflat(f: &Formula) -> Result<QuasiFlatForm> {
    let info = f.classify();
    if info.has_atoms {
        return Err(Error::fragment(format!("team atoms have no quasi-flat form: {f}")));
    }
    if !info.is_left_dc {
        return Err(Error::fragment(format!(
            "left arguments of G and U must be free of `~` and `E`: {f}"
        )));
    }
    Ok(QuasiFlatForm {
        disjuncts: qf(&f.desugar()),
    })
}

fn smart_and(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::Top, x) | (x, Formula::Top) => x,
        (a, b) => Formula::and(a, b),
    }
}

fn dual(f: &Formula) -> Formula {
    f.dual().expect("quasi-flat components are LTL")
}

fn qf(f: &Formula) -> Vec<QuasiFlatDisjunct> {
    use Formula::*;
    match f {
        Prop(_) | NegProp(_) | Top | Bot => vec![QuasiFlatDisjunct::new(f.clone(), vec![])],
        Exists(b) => vec![QuasiFlatDisjunct::new(Top, vec![(**b).clone()])],
        And(a, b) => {
            let (qa, qb) = (qf(a), qf(b));
            let mut out = Vec::with_capacity(qa.len() * qb.len());
            for x in &qa {
                for y in &qb {
                    out.push(conj(x, y));
                }
            }
            out
        }
        BOr(a, b) => {
            let mut out = qf(a);
            out.extend(qf(b));
            out
        }
        Or(a, b) => {
            let (qa, qb) = (qf(a), qf(b));
            let mut out = Vec::with_capacity(qa.len() * qb.len());
            for x in &qa {
                for y in &qb {
                    let betas = x
                        .betas
                        .iter()
                        .map(|b| smart_and(x.alpha.clone(), b.clone()))
                        .chain(y.betas.iter().map(|b| smart_and(y.alpha.clone(), b.clone())))
                        .collect();
                    out.push(QuasiFlatDisjunct::new(
                        Formula::or(x.alpha.clone(), y.alpha.clone()),
                        betas,
                    ));
                }
            }
            out
        }
        // ~⩔_i(α_i ∧ ⋀_j ∃β_ij) = ⋀_i (∃α_i^d ⊎ ⩔_j β_ij^d), expanded left to right.
        BNeg(a) => {
            let mut out = vec![QuasiFlatDisjunct::new(Top, vec![])];
            for d in qf(a) {
                let mut options = vec![QuasiFlatDisjunct::new(Top, vec![dual(&d.alpha)])];
                options.extend(d.betas.iter().map(|b| QuasiFlatDisjunct::new(dual(b), vec![])));
                out = out
                    .iter()
                    .flat_map(|x| options.iter().map(move |o| conj(x, o)))
                    .collect();
            }
            out
        }
        Next(a) => qf(a)
            .into_iter()
            .map(|d| {
                QuasiFlatDisjunct::new(
                    Formula::next(d.alpha),
                    d.betas.into_iter().map(Formula::next).collect(),
                )
            })
            .collect(),
        Globally(a) => left_dnf(a)
            .into_iter()
            .map(|g| QuasiFlatDisjunct::new(Formula::globally(g), vec![]))
            .collect(),
        Until(a, b) => {
            let (left, right) = (left_dnf(a), qf(b));
            let mut out = Vec::with_capacity(left.len() * right.len());
            for g in &left {
                for d in &right {
                    out.push(QuasiFlatDisjunct::new(
                        Formula::until(g.clone(), d.alpha.clone()),
                        d.betas
                            .iter()
                            .map(|b| Formula::until(g.clone(), smart_and(d.alpha.clone(), b.clone())))
                            .collect(),
                    ));
                }
            }
            out
        }
        other => unreachable!("quasi-flat form of {other:?}"),
    }
}

fn left_dnf(f: &Formula) -> Vec<Formula> {
    to_dnf(f).expect("left arguments are in the or-fragment").disjuncts
}

fn conj(x: &QuasiFlatDisjunct, y: &QuasiFlatDisjunct) -> QuasiFlatDisjunct {
    QuasiFlatDisjunct::new(
        smart_and(x.alpha.clone(), y.alpha.clone()),
        x.betas.iter().chain(&y.betas).cloned().collect(),
    )
}
