//! Team-level model checking and satisfiability: through the selection
//! disjuncts for TeamLTL(⊎), through the quasi-flat form for the
//! left-downward-closed fragment with `~`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::evalcore::{eval_lax_with, EvalOptions, Limits};
use crate::formula::Formula;
use crate::ltlengine::{counterexample, model, Diagnostic, KripkeStructure, Part, Verdict, Witness};
use crate::normform::{enumerate_selections, to_quasiflat, QuasiFlatDisjunct, ResidencyProbe};
use crate::team::{LassoTrace, Team};

#[derive(Debug, Clone, Default)]
pub struct DecideOptions {
    /// Worker threads for independent disjunct checks; 0 and 1 both mean
    /// sequential.
    pub jobs: usize,
    /// Skip disjuncts syntactically equal to earlier ones.
    pub dedupe: bool,
    /// Report every disjunct check, not only the deciding one.
    pub diagnostics: bool,
    pub probe: Option<ResidencyProbe>,
}

/// 128-bit fingerprint used for deduplication without keeping formulas.
fn fingerprint<T: Hash>(x: &T) -> (u64, u64) {
    let mut a = DefaultHasher::new();
    x.hash(&mut a);
    let mut b = DefaultHasher::new();
    0x9e37_79b9_7f4a_7c15u64.hash(&mut b);
    x.hash(&mut b);
    (a.finish(), b.finish())
}

/// Outcome of checking one index: `None` if skipped, else success and info.
type Check<T> = Result<Option<(bool, T)>>;

/// Runs `check` on indices `0..n` and returns the least index whose check
/// succeeded together with the outcomes of every index up to it (all of
/// them if none succeeded). Outcomes and errors are those a sequential scan
/// would see.
#[allow(clippy::type_complexity)]
fn first_success<T, F>(n: usize, jobs: usize, check: F) -> Result<(Option<usize>, Vec<(usize, T)>)>
where
    T: Send,
    F: Fn(usize) -> Check<T> + Sync,
{
    if jobs <= 1 {
        let mut seen = Vec::new();
        for i in 0..n {
            if let Some((ok, info)) = check(i)? {
                seen.push((i, info));
                if ok {
                    return Ok((Some(i), seen));
                }
            }
        }
        return Ok((None, seen));
    }
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<(usize, Check<T>)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n || i > best.load(Ordering::SeqCst) {
                    break;
                }
                let r = check(i);
                let stop = match &r {
                    Ok(Some((true, _))) | Err(_) => {
                        best.fetch_min(i, Ordering::SeqCst);
                        true
                    }
                    _ => false,
                };
                results.lock().unwrap().push((i, r));
                if stop {
                    break;
                }
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(i, _)| *i);
    let mut seen = Vec::new();
    for (i, r) in results {
        if let Some((ok, info)) = r? {
            seen.push((i, info));
            if ok {
                return Ok((Some(i), seen));
            }
        }
    }
    Ok((None, seen))
}

fn bor_guard(f: &Formula) -> Result<()> {
    if f.is_bor_fragment() {
        Ok(())
    } else {
        Err(Error::fragment(format!("expected a formula without `~`, `E` or team atoms: {f}")))
    }
}

/// Whether every trace set of `k` satisfies `f`, deciding one selection
/// disjunct at a time. On failure the witness collects one counterexample
/// per disjunct.
pub fn mc_team_dnf(k: &KripkeStructure, f: &Formula, opts: &DecideOptions) -> Result<Verdict> {
    bor_guard(f)?;
    let mut sel = enumerate_selections(f)?;
    if let Some(p) = &opts.probe {
        sel = sel.with_probe(p.clone());
    }
    let dupes = duplicates(opts.dedupe, sel.len(), |i| sel.disjunct(i).formula);
    let (win, seen) = first_success(sel.len(), opts.jobs, |i| {
        if dupes.contains(&i) {
            return Ok(None);
        }
        let d = sel.disjunct(i);
        let cex = counterexample(k, &d.formula)?;
        let diag = Diagnostic {
            disjunct: i,
            part: Part::Alpha,
            formula: d.formula.to_string(),
            holds: cex.is_none(),
            trace: cex,
        };
        Ok(Some((diag.holds, diag)))
    })?;
    let witness = match win {
        Some(_) => None,
        None => Some(Witness::Team(seen.iter().filter_map(|(_, d)| d.trace.clone()).collect())),
    };
    Ok(Verdict {
        holds: win.is_some(),
        witness,
        disjunct_index: win,
        diagnostics: if opts.diagnostics {
            seen.into_iter().map(|(_, d)| d).collect()
        } else {
            vec![]
        },
    })
}

/// Indices whose value equals an earlier one. Values are produced one at a
/// time and only fingerprints are kept.
fn duplicates<T: Hash>(on: bool, n: usize, value: impl Fn(usize) -> T) -> HashSet<usize> {
    let mut out = HashSet::new();
    if on {
        let mut seen = HashSet::new();
        for i in 0..n {
            if !seen.insert(fingerprint(&value(i))) {
                out.insert(i);
            }
        }
    }
    out
}

fn unbounded() -> EvalOptions {
    EvalOptions {
        limits: Limits::unbounded(),
        ..EvalOptions::default()
    }
}

fn check_witness(team: &Team, f: &Formula) -> Result<()> {
    match eval_lax_with(team, f, &unbounded()) {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::Internal(format!("witness {team} does not satisfy {f}"))),
        // Too large to re-evaluate exactly; the normal-form check stands.
        Err(Error::ResourceLimit(_)) => Ok(()),
        Err(e) => Err(e),
    }
}

/// Whether some nonempty team satisfies `f`. The witness is a singleton.
pub fn sat_team_dnf(f: &Formula, opts: &DecideOptions) -> Result<Verdict> {
    bor_guard(f)?;
    let mut sel = enumerate_selections(f)?;
    if let Some(p) = &opts.probe {
        sel = sel.with_probe(p.clone());
    }
    let dupes = duplicates(opts.dedupe, sel.len(), |i| sel.disjunct(i).formula);
    let (win, seen) = first_success(sel.len(), opts.jobs, |i| {
        if dupes.contains(&i) {
            return Ok(None);
        }
        let d = sel.disjunct(i);
        let w = model(&d.formula)?;
        let diag = Diagnostic {
            disjunct: i,
            part: Part::Alpha,
            formula: d.formula.to_string(),
            holds: w.is_some(),
            trace: w,
        };
        Ok(Some((diag.holds, diag)))
    })?;
    let witness = match win {
        Some(i) => {
            let w = seen.iter().find(|(j, _)| *j == i).and_then(|(_, d)| d.trace.clone()).unwrap();
            let team: Team = [w].into_iter().collect();
            check_witness(&team, f)?;
            Some(Witness::Team(team))
        }
        None => None,
    };
    Ok(Verdict {
        holds: win.is_some(),
        witness,
        disjunct_index: win,
        diagnostics: if opts.diagnostics {
            seen.into_iter().map(|(_, d)| d).collect()
        } else {
            vec![]
        },
    })
}

fn quasiflat_disjuncts(f: &Formula, dedupe: bool) -> Result<Vec<QuasiFlatDisjunct>> {
    let q = to_quasiflat(f)?;
    Ok(if dedupe { q.deduped() } else { q }.disjuncts)
}

/// Model checking through the quasi-flat form: `α` must hold on every trace
/// of `k` and each `∃β` needs a trace of `k` satisfying `β`, found as a
/// counterexample to the dual.
pub fn mc_team_quasiflat(k: &KripkeStructure, f: &Formula, opts: &DecideOptions) -> Result<Verdict> {
    let ds = quasiflat_disjuncts(f, opts.dedupe)?;
    let (win, seen) = first_success(ds.len(), opts.jobs, |i| {
        let d = &ds[i];
        let mut diags = Vec::new();
        let cex = counterexample(k, &d.alpha)?;
        let alpha_ok = cex.is_none();
        diags.push(Diagnostic {
            disjunct: i,
            part: Part::Alpha,
            formula: d.alpha.to_string(),
            holds: alpha_ok,
            trace: cex,
        });
        let mut ok = alpha_ok;
        if ok {
            for (j, b) in d.betas.iter().enumerate() {
                let w = counterexample(k, &b.dual()?)?;
                ok &= w.is_some();
                diags.push(Diagnostic {
                    disjunct: i,
                    part: Part::Beta(j),
                    formula: b.to_string(),
                    holds: w.is_some(),
                    trace: w,
                });
                if !ok {
                    break;
                }
            }
        }
        Ok(Some((ok, diags)))
    })?;
    let witness = match win {
        Some(_) => None,
        None => {
            let team: Team = seen
                .iter()
                .flat_map(|(_, ds)| ds.iter())
                .filter(|d| d.part == Part::Alpha)
                .filter_map(|d| d.trace.clone())
                .collect();
            Some(Witness::Team(team))
        }
    };
    let diagnostics = if opts.diagnostics {
        seen.into_iter().flat_map(|(_, d)| d).collect()
    } else {
        seen.into_iter()
            .filter(|(i, _)| Some(*i) == win)
            .flat_map(|(_, d)| d)
            .filter(|d| matches!(d.part, Part::Beta(_)))
            .collect()
    };
    Ok(Verdict {
        holds: win.is_some(),
        witness,
        disjunct_index: win,
        diagnostics,
    })
}

/// Satisfiability through the quasi-flat form. The witness team holds one
/// model of `α ∧ β_j` per `j`, or a model of `α` when there are no betas.
pub fn sat_team_quasiflat(f: &Formula, opts: &DecideOptions) -> Result<Verdict> {
    let ds = quasiflat_disjuncts(f, opts.dedupe)?;
    let (win, seen) = first_success(ds.len(), opts.jobs, |i| {
        let d = &ds[i];
        let goals: Vec<(Part, Formula)> = if d.betas.is_empty() {
            vec![(Part::Alpha, d.alpha.clone())]
        } else {
            d.betas
                .iter()
                .enumerate()
                .map(|(j, b)| (Part::Beta(j), Formula::and(d.alpha.clone(), b.clone())))
                .collect()
        };
        let mut diags = Vec::new();
        let mut ok = true;
        for (part, g) in goals {
            let w = model(&g)?;
            ok &= w.is_some();
            diags.push(Diagnostic {
                disjunct: i,
                part,
                formula: g.to_string(),
                holds: w.is_some(),
                trace: w,
            });
            if !ok {
                break;
            }
        }
        Ok(Some((ok, diags)))
    })?;
    let witness = match win {
        Some(i) => {
            let team: Team = seen
                .iter()
                .filter(|(j, _)| *j == i)
                .flat_map(|(_, ds)| ds.iter())
                .filter_map(|d| d.trace.clone())
                .collect::<Vec<LassoTrace>>()
                .into_iter()
                .collect();
            if !ds[i].holds_on(&team)? {
                return Err(Error::Internal(format!("witness {team} misses disjunct {i}")));
            }
            check_witness(&team, f)?;
            Some(Witness::Team(team))
        }
        None => None,
    };
    Ok(Verdict {
        holds: win.is_some(),
        witness,
        disjunct_index: win,
        diagnostics: if opts.diagnostics {
            seen.into_iter().flat_map(|(_, d)| d).collect()
        } else {
            vec![]
        },
    })
}
