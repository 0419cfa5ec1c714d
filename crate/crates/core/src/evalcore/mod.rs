//! Exact evaluators: classical LTL on a lasso, lax semantics on teams,
//! strict semantics on multiteams.
//!
//! Until quantifies over position sets. Choosing positions only from the
//! canonical range `[0, prefix + loop)` is complete when the left argument is
//! closed under subteams. Otherwise a member may need a larger maximum (to
//! stay in `T'` with the full set of earlier suffixes in play) so the
//! evaluator searches `[0, prefix + 2·loop)`, which is enough for every
//! combination of picked suffixes, minimum and maximum that matters.
//! [`UntilBound::Fixed`] forces one bound everywhere for audits.

pub(crate) mod arena;
pub(crate) mod lax;
pub(crate) mod strict;
pub(crate) mod universe;

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::team::{LassoTrace, Multiteam, Team};
use arena::Arena;
use universe::{LtlTable, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_traces: usize,
    pub max_positions: usize,
    pub max_depth: usize,
    /// Cap on elementary evaluation steps per call.
    pub max_steps: u64,
    /// Cap on configuration-graph size for tef evaluation.
    pub max_configurations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_traces: 6,
            max_positions: 8,
            max_depth: 10,
            max_steps: 200_000_000,
            max_configurations: 1 << 16,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Limits {
        Limits {
            max_traces: usize::MAX,
            max_positions: usize::MAX,
            max_depth: usize::MAX,
            ..Limits::default()
        }
    }
}

impl FromStr for Limits {
    type Err = Error;

    /// `traces=6,pos=8,depth=10`; omitted keys keep their defaults.
    fn from_str(s: &str) -> Result<Limits> {
        let mut out = Limits::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("limit `{part}` is not key=value")))?;
            let bad = || Error::Invalid(format!("limit `{part}` needs a positive integer"));
            let n: u64 = value.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            match key.trim() {
                "traces" => out.max_traces = n as usize,
                "pos" => out.max_positions = n as usize,
                "depth" => out.max_depth = n as usize,
                "steps" => out.max_steps = n,
                "configs" => out.max_configurations = n as usize,
                other => return Err(Error::Invalid(format!("unknown limit `{other}`"))),
            }
        }
        Ok(out)
    }
}

/// How far until-witness positions reach: `[0, prefix + B·loop)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UntilBound {
    /// `B = 1` under subteam-closed left arguments, `B = 2` otherwise.
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub limits: Limits,
    pub until_bound: UntilBound,
}

#[derive(Debug, Clone)]
pub(crate) struct Budget {
    left: u64,
}

impl Budget {
    pub fn new(limits: &Limits) -> Budget {
        Budget {
            left: limits.max_steps,
        }
    }

    pub fn tick(&mut self, n: u64) -> Result<()> {
        if self.left < n {
            return Err(Error::ResourceLimit(
                "evaluation step budget exhausted".to_string(),
            ));
        }
        self.left -= n;
        Ok(())
    }
}

pub(crate) fn check_formula(f: &Formula, limits: &Limits) -> Result<()> {
    let depth = f.desugar().depth();
    if depth > limits.max_depth {
        return Err(Error::ResourceLimit(format!(
            "formula depth {depth} exceeds {}",
            limits.max_depth
        )));
    }
    Ok(())
}

pub(crate) fn check_traces<'a>(
    traces: impl IntoIterator<Item = &'a LassoTrace>,
    count: usize,
    limits: &Limits,
) -> Result<()> {
    if count > limits.max_traces {
        return Err(Error::ResourceLimit(format!(
            "{count} traces exceed {}",
            limits.max_traces
        )));
    }
    for t in traces {
        if t.canonical_len() > limits.max_positions {
            return Err(Error::ResourceLimit(format!(
                "trace {t} has {} positions, more than {}",
                t.canonical_len(),
                limits.max_positions
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_universe(uni: &Universe) -> Result<()> {
    if uni.len() > 64 {
        return Err(Error::ResourceLimit(format!(
            "{} distinct suffixes exceed 64",
            uni.len()
        )));
    }
    Ok(())
}

/// Classical satisfaction `t ⊨ f` for LTL `f`.
pub fn eval_ltl(t: &LassoTrace, f: &Formula) -> Result<bool> {
    if !f.is_ltl() {
        return Err(Error::fragment(format!("not an LTL formula: {f}")));
    }
    let mut arena = Arena::new();
    let id = arena.add(f);
    let (uni, ids) = Universe::build([t]);
    let mut table = LtlTable::new(&arena);
    Ok(table.get(&arena, &uni, id)[ids[0]])
}

pub fn eval_lax(team: &Team, f: &Formula) -> Result<bool> {
    eval_lax_with(team, f, &EvalOptions::default())
}

pub fn eval_lax_with(team: &Team, f: &Formula, opts: &EvalOptions) -> Result<bool> {
    check_formula(f, &opts.limits)?;
    check_traces(team.iter(), team.len(), &opts.limits)?;
    let mut arena = Arena::new();
    let id = arena.add(f);
    let (uni, ids) = Universe::build(team.iter());
    check_universe(&uni)?;
    let mask = ids.iter().fold(0u64, |m, &u| m | 1 << u);
    lax::LaxEval::new(&arena, &uni, opts.until_bound, Budget::new(&opts.limits)).eval(id, mask)
}

pub fn eval_strict(team: &Multiteam, f: &Formula) -> Result<bool> {
    eval_strict_with(team, f, &EvalOptions::default())
}

pub fn eval_strict_with(team: &Multiteam, f: &Formula, opts: &EvalOptions) -> Result<bool> {
    check_formula(f, &opts.limits)?;
    check_traces(team.traces(), team.len(), &opts.limits)?;
    let mut arena = Arena::new();
    let id = arena.add(f);
    let (uni, mut ids) = Universe::build(team.traces());
    check_universe(&uni)?;
    ids.sort_unstable();
    strict::StrictEval::new(&arena, &uni, opts.until_bound, Budget::new(&opts.limits)).eval(id, &ids)
}
