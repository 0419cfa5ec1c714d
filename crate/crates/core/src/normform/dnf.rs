//! ⊎-disjunctive normal form and its streaming selection enumerator.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::evalcore::eval_ltl;
use crate::formula::Formula;
use crate::team::Team;

/// `⩔ α_i` with every `α_i` in LTL. Disjunct `i` is the formula picked by
/// selection function `i`; see [`enumerate_selections`] for the numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfForm {
    pub disjuncts: Vec<Formula>,
}

impl DnfForm {
    /// Drops syntactically repeated disjuncts, keeping first occurrences.
    pub fn deduped(&self) -> DnfForm {
        let mut seen = std::collections::HashSet::new();
        DnfForm {
            disjuncts: self
                .disjuncts
                .iter()
                .filter(|d| seen.insert((*d).clone()))
                .cloned()
                .collect(),
        }
    }

    /// `∃i ∀t ∈ T: t ⊨ α_i`.
    pub fn holds_on(&self, team: &Team) -> Result<bool> {
        for d in &self.disjuncts {
            let mut all = true;
            for t in team {
                if !eval_ltl(t, d)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The disjuncts joined by `or`; `bot` when there are none.
    pub fn to_formula(&self) -> Formula {
        self.disjuncts
            .iter()
            .cloned()
            .reduce(Formula::bor)
            .unwrap_or(Formula::Bot)
    }
}

impl fmt::Display for DnfForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.disjuncts.iter().enumerate() {
            writeln!(f, "[{i}] {d}")?;
        }
        Ok(())
    }
}

fn check_bor_fragment(f: &Formula) -> Result<Formula> {
    if !f.is_bor_fragment() {
        return Err(Error::fragment(format!(
            "expected a formula without `~`, `E` or team atoms: {f}"
        )));
    }
    Ok(f.desugar())
}

/// ⊎-disjunctive normal form with exactly `2^k` disjuncts for `k` occurrences
/// of `or`.
pub fn to_dnf(f: &Formula) -> Result<DnfForm> {
    let d = check_bor_fragment(f)?;
    Ok(DnfForm {
        disjuncts: dnf(&d),
    }
    .padded_check())
}

impl DnfForm {
    fn padded_check(self) -> DnfForm {
        debug_assert!(self.disjuncts.len().is_power_of_two());
        self
    }
}

fn pairwise(a: &[Formula], b: &[Formula], join: impl Fn(Formula, Formula) -> Formula) -> Vec<Formula> {
    a.iter()
        .flat_map(|x| b.iter().map(|y| join(x.clone(), y.clone())))
        .collect()
}

fn dnf(f: &Formula) -> Vec<Formula> {
    use Formula::*;
    match f {
        Prop(_) | NegProp(_) | Top | Bot => vec![f.clone()],
        And(a, b) => pairwise(&dnf(a), &dnf(b), Formula::and),
        Or(a, b) => pairwise(&dnf(a), &dnf(b), Formula::or),
        Next(a) => dnf(a).into_iter().map(Formula::next).collect(),
        Globally(a) => dnf(a).into_iter().map(Formula::globally).collect(),
        Until(a, b) => pairwise(&dnf(a), &dnf(b), Formula::until),
        // Selection functions also fix the occurrences inside the side that
        // is not taken, so each side is repeated once per such choice.
        BOr(a, b) => {
            let (da, db) = (dnf(a), dnf(b));
            let mut out = Vec::with_capacity(2 * da.len() * db.len());
            for x in &da {
                out.extend(std::iter::repeat_n(x.clone(), db.len()));
            }
            for _ in 0..da.len() {
                out.extend(db.iter().cloned());
            }
            out
        }
        other => unreachable!("dnf on {other:?}"),
    }
}

/// Counts disjuncts alive at the same time.
#[derive(Debug, Clone, Default)]
pub struct ResidencyProbe {
    live: Arc<AtomicUsize>,
    peak: Arc<AtomicUsize>,
    total: Arc<AtomicUsize>,
}

impl ResidencyProbe {
    pub fn new() -> ResidencyProbe {
        ResidencyProbe::default()
    }

    /// Largest number of disjuncts that were alive simultaneously.
    pub fn peak(&self) -> usize {
        self.peak.load(Ordering::SeqCst)
    }

    /// Number of disjuncts produced so far.
    pub fn total(&self) -> usize {
        self.total.load(Ordering::SeqCst)
    }

    fn enter(&self) -> Token {
        let now = self.live.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(now, Ordering::SeqCst);
        self.total.fetch_add(1, Ordering::SeqCst);
        Token(self.live.clone())
    }
}

#[derive(Debug)]
struct Token(Arc<AtomicUsize>);

impl Drop for Token {
    fn drop(&mut self) {
        self.0.fetch_sub(1, Ordering::SeqCst);
    }
}

/// One selection disjunct `φ^f`.
#[derive(Debug)]
pub struct Disjunct {
    pub index: usize,
    pub formula: Formula,
    _token: Option<Token>,
}

/// Cursor over the selection functions of a ⊎-formula. Disjunct `i` takes,
/// at the `j`-th occurrence of `or` in pre-order (an occurrence comes before
/// the occurrences inside its arguments), the right argument iff bit
/// `k - 1 - j` of `i` is set.
#[derive(Debug, Clone)]
pub struct Selections {
    formula: Formula,
    bor_count: usize,
    next: usize,
    probe: Option<ResidencyProbe>,
}

pub fn enumerate_selections(f: &Formula) -> Result<Selections> {
    let formula = check_bor_fragment(f)?;
    let bor_count = formula.classify().bor_count;
    if bor_count >= usize::BITS as usize - 1 {
        return Err(Error::ResourceLimit(format!("{bor_count} occurrences of `or`")));
    }
    Ok(Selections {
        formula,
        bor_count,
        next: 0,
        probe: None,
    })
}

impl Selections {
    pub fn with_probe(mut self, probe: ResidencyProbe) -> Selections {
        self.probe = Some(probe);
        self
    }

    pub fn bor_count(&self) -> usize {
        self.bor_count
    }

    /// `2^k`.
    pub fn len(&self) -> usize {
        1 << self.bor_count
    }

    /// Always false: even without `or` there is one selection.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Builds disjunct `index` directly.
    pub fn disjunct(&self, index: usize) -> Disjunct {
        assert!(index < self.len(), "selection index out of range");
        let mut occurrence = 0;
        let formula = select(&self.formula, index, self.bor_count, &mut occurrence);
        Disjunct {
            index,
            formula,
            _token: self.probe.as_ref().map(ResidencyProbe::enter),
        }
    }
}

impl Iterator for Selections {
    type Item = Disjunct;

    fn next(&mut self) -> Option<Disjunct> {
        if self.next >= self.len() {
            return None;
        }
        let d = self.disjunct(self.next);
        self.next += 1;
        Some(d)
    }
}

fn bor_occurrences(f: &Formula) -> usize {
    usize::from(matches!(f, Formula::BOr(..))) + f.children().into_iter().map(bor_occurrences).sum::<usize>()
}

fn select(f: &Formula, index: usize, k: usize, occurrence: &mut usize) -> Formula {
    use Formula::*;
    let go = |g: &Formula, occ: &mut usize| select(g, index, k, occ);
    match f {
        Prop(_) | NegProp(_) | Top | Bot => f.clone(),
        And(a, b) => {
            let a = go(a, occurrence);
            Formula::and(a, go(b, occurrence))
        }
        Or(a, b) => {
            let a = go(a, occurrence);
            Formula::or(a, go(b, occurrence))
        }
        Until(a, b) => {
            let a = go(a, occurrence);
            Formula::until(a, go(b, occurrence))
        }
        Next(a) => Formula::next(go(a, occurrence)),
        Globally(a) => Formula::globally(go(a, occurrence)),
        BOr(a, b) => {
            let bit = index >> (k - 1 - *occurrence) & 1;
            *occurrence += 1;
            if bit == 0 {
                let out = go(a, occurrence);
                *occurrence += bor_occurrences(b);
                out
            } else {
                *occurrence += bor_occurrences(a);
                go(b, occurrence)
            }
        }
        other => unreachable!("selection on {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn dnf_of(s: &str) -> Vec<Formula> {
        to_dnf(&f(s)).unwrap().disjuncts
    }

    #[test]
    fn literals_are_their_own_normal_form() {
        assert_eq!(dnf_of("p"), vec![f("p")]);
    }

    #[test]
    fn globally_distributes_over_boolean_disjunction() {
        assert_eq!(dnf_of("G (p or q)"), vec![f("G p"), f("G q")]);
    }

    #[test]
    fn conjunction_and_next() {
        assert_eq!(
            dnf_of("(p or q) & X (r or s)"),
            vec![f("p & X r"), f("p & X s"), f("q & X r"), f("q & X s")]
        );
    }

    #[test]
    fn nested_boolean_disjunction_is_padded() {
        assert_eq!(dnf_of("(p or q) or r"), vec![f("p"), f("q"), f("r"), f("r")]);
        assert_eq!(dnf_of("p or (q or r)"), vec![f("p"), f("p"), f("q"), f("r")]);
    }

    #[test]
    fn derived_operators_are_expanded_first() {
        assert_eq!(dnf_of("p W2 q"), vec![f("G p"), f("p U q")]);
    }

    #[test]
    fn rejects_non_bor_formulas() {
        assert!(matches!(to_dnf(&f("~p")), Err(Error::Fragment(_))));
        assert!(matches!(enumerate_selections(&f("E p")), Err(Error::Fragment(_))));
    }

    #[test]
    fn selections_stream_in_counter_order() {
        let s: Vec<Formula> = enumerate_selections(&f("p or q")).unwrap().map(|d| d.formula).collect();
        assert_eq!(s, vec![f("p"), f("q")]);
        let s: Vec<Formula> = enumerate_selections(&f("G (p or q)")).unwrap().map(|d| d.formula).collect();
        assert_eq!(s, vec![f("G p"), f("G q")]);
    }

    #[test]
    fn streaming_keeps_one_disjunct_alive() {
        let phi = f("(p or q) & ((r or s) | X (p or r))");
        let probe = ResidencyProbe::new();
        let mut n = 0;
        for d in enumerate_selections(&phi).unwrap().with_probe(probe.clone()) {
            assert!(d.formula.is_ltl());
            n += 1;
        }
        assert_eq!(n, 8);
        assert_eq!(probe.total(), 8);
        assert_eq!(probe.peak(), 1);
    }

    #[test]
    fn deduplication_keeps_first_occurrences() {
        let d = to_dnf(&f("(p or q) or p")).unwrap().deduped();
        assert_eq!(d.disjuncts, vec![f("p"), f("q")]);
    }
}
