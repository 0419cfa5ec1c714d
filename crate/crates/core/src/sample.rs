//! Random and exhaustive generators for formulas, traces and teams, used by
//! the property suites and handy for counterexample searches.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::Formula;
use crate::team::{LassoTrace, Multiteam, PropSet, Team};
use crate::teamctl::TefFormula;

/// Syntactic fragment a generated formula must fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// Plain LTL (read as TeamLTL without `or`/`~`).
    Ltl,
    /// TeamLTL(⊎).
    Bor,
    /// TeamLTL(⊎) with LTL left arguments of G and U.
    LeftFlatBor,
    /// TeamLTL(~, ⊎) with TeamLTL(⊎) left arguments of G and U.
    LeftDcNeg,
    /// TeamLTL(~, ⊎) without restrictions.
    Neg,
}

impl Fragment {
    fn allows_bor(self) -> bool {
        self != Fragment::Ltl
    }

    fn allows_neg(self) -> bool {
        matches!(self, Fragment::LeftDcNeg | Fragment::Neg)
    }

    /// The fragment for left arguments of G and U.
    fn left(self) -> Fragment {
        match self {
            Fragment::LeftFlatBor => Fragment::Ltl,
            Fragment::LeftDcNeg => Fragment::Bor,
            other => other,
        }
    }
}

/// Every normalized lasso with `prefix + loop ≤ max_total`, sorted.
pub fn all_lassos(props: &[&str], max_total: usize) -> Vec<LassoTrace> {
    let steps = all_steps(props);
    let mut out = BTreeSet::new();
    for total in 1..=max_total {
        for cycle_len in 1..=total {
            let prefix_len = total - cycle_len;
            for word in words(&steps, total) {
                let (p, c) = word.split_at(prefix_len);
                out.insert(LassoTrace::new(p.to_vec(), c.to_vec()).expect("nonempty loop"));
            }
        }
    }
    out.into_iter().collect()
}

fn all_steps(props: &[&str]) -> Vec<PropSet> {
    (0u32..1 << props.len())
        .map(|m| {
            props
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, p)| p.to_string())
                .collect()
        })
        .collect()
}

fn words(steps: &[PropSet], n: usize) -> Vec<Vec<PropSet>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                steps.iter().map(move |s| {
                    let mut w2 = w.clone();
                    w2.push(s.clone());
                    w2
                })
            })
            .collect();
    }
    out
}

pub fn random_step<R: Rng>(rng: &mut R, props: &[&str]) -> PropSet {
    props
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|p| p.to_string())
        .collect()
}

/// A lasso with `prefix + loop ≤ max_total` (before normalization).
pub fn random_lasso<R: Rng>(rng: &mut R, props: &[&str], max_total: usize) -> LassoTrace {
    let total = rng.gen_range(1..=max_total.max(1));
    let cycle_len = rng.gen_range(1..=total);
    let prefix = (0..total - cycle_len).map(|_| random_step(rng, props)).collect();
    let cycle = (0..cycle_len).map(|_| random_step(rng, props)).collect();
    LassoTrace::new(prefix, cycle).expect("nonempty loop")
}

/// A team of at most `max_traces` members (possibly empty).
pub fn random_team<R: Rng>(rng: &mut R, props: &[&str], max_traces: usize, max_total: usize) -> Team {
    let n = rng.gen_range(0..=max_traces);
    (0..n).map(|_| random_lasso(rng, props, max_total)).collect()
}

/// A multiteam of at most `max_entries` entries; repeats are likely.
pub fn random_multiteam<R: Rng>(
    rng: &mut R,
    props: &[&str],
    max_entries: usize,
    max_total: usize,
) -> Multiteam {
    let n = rng.gen_range(0..=max_entries);
    let mut traces: Vec<LassoTrace> = Vec::new();
    for _ in 0..n {
        if !traces.is_empty() && rng.gen_bool(0.3) {
            let t = traces.choose(rng).unwrap().clone();
            traces.push(t);
        } else {
            traces.push(random_lasso(rng, props, max_total));
        }
    }
    Multiteam::from_traces(traces)
}

fn literal<R: Rng>(rng: &mut R, props: &[&str]) -> Formula {
    let p = props.choose(rng).expect("at least one proposition").to_string();
    match rng.gen_range(0..10) {
        0 => Formula::Top,
        1 => Formula::Bot,
        2..=5 => Formula::Prop(p),
        _ => Formula::NegProp(p),
    }
}

/// A random formula of the fragment with depth at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, props: &[&str], depth: usize, frag: Fragment) -> Formula {
    if depth <= 1 || rng.gen_bool(0.2) {
        return literal(rng, props);
    }
    let d = depth - 1;
    let sub = |rng: &mut R, f: Fragment| random_formula(rng, props, d, f);
    let left = frag.left();
    let mut choices = vec![0, 0, 1, 1, 2, 3, 4, 4, 5, 6];
    if frag.allows_bor() {
        choices.extend([7, 7, 7, 8]);
    }
    if frag.allows_neg() {
        choices.extend([9, 9, 10]);
    }
    match *choices.choose(rng).unwrap() {
        0 => Formula::and(sub(rng, frag), sub(rng, frag)),
        1 => Formula::or(sub(rng, frag), sub(rng, frag)),
        2 => Formula::next(sub(rng, frag)),
        3 => Formula::globally(sub(rng, left)),
        4 => Formula::until(sub(rng, left), sub(rng, frag)),
        5 => match rng.gen_range(0..4) {
            0 => Formula::finally(sub(rng, frag)),
            1 => Formula::WeakUntil1(Box::new(sub(rng, left)), Box::new(sub(rng, frag))),
            2 => Formula::Release1(Box::new(sub(rng, frag)), Box::new(sub(rng, left))),
            _ => Formula::strong_release(sub(rng, frag), sub(rng, left)),
        },
        6 => literal(rng, props),
        7 => Formula::bor(sub(rng, frag), sub(rng, frag)),
        8 => Formula::WeakUntil2(Box::new(sub(rng, left)), Box::new(sub(rng, frag))),
        9 => Formula::bneg(sub(rng, frag)),
        _ => Formula::exists(sub(rng, Fragment::Ltl)),
    }
}

/// A random left-flat TeamCTL(X, G∀, M∃, ⊎) formula.
pub fn random_tef<R: Rng>(rng: &mut R, props: &[&str], depth: usize) -> TefFormula {
    random_tef_in(rng, props, depth, false)
}

fn random_tef_in<R: Rng>(rng: &mut R, props: &[&str], depth: usize, flat: bool) -> TefFormula {
    let lit = |rng: &mut R| {
        let p = props.choose(rng).unwrap().to_string();
        if rng.gen_bool(0.5) {
            TefFormula::Prop(p)
        } else {
            TefFormula::NegProp(p)
        }
    };
    if depth <= 1 || rng.gen_bool(0.2) {
        return lit(rng);
    }
    let d = depth - 1;
    let b = |f: TefFormula| Box::new(f);
    let mut opts: Vec<u8> = vec![0, 1, 2, 3, 4];
    if !flat {
        opts.extend([5, 5]);
    }
    match *opts.choose(rng).unwrap() {
        0 => TefFormula::And(b(random_tef_in(rng, props, d, flat)), b(random_tef_in(rng, props, d, flat))),
        1 => TefFormula::Or(b(random_tef_in(rng, props, d, flat)), b(random_tef_in(rng, props, d, flat))),
        2 => TefFormula::Next(b(random_tef_in(rng, props, d, flat))),
        3 => TefFormula::GlobA(b(random_tef_in(rng, props, d, true))),
        4 => TefFormula::StrongReleaseE(
            b(random_tef_in(rng, props, d, flat)),
            b(random_tef_in(rng, props, d, true)),
        ),
        _ => TefFormula::BOr(b(random_tef_in(rng, props, d, flat)), b(random_tef_in(rng, props, d, flat))),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn exhaustive_lassos_are_distinct_words() {
        let all = all_lassos(&["p"], 2);
        // {x}^ω for 2 letters, four 2-loops minus 2 non-primitive, four
        // prefixed lassos minus 2 absorbed: 2 + 2 + 2.
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn generated_formulas_stay_in_their_fragment() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let f = random_formula(&mut rng, &["p", "q"], 4, Fragment::LeftFlatBor);
            let info = f.classify();
            assert!(info.is_left_flat && !info.has_bneg, "{f}");
            let f = random_formula(&mut rng, &["p", "q"], 4, Fragment::LeftDcNeg);
            assert!(f.classify().is_left_dc, "{f}");
            let f = random_formula(&mut rng, &["p", "q"], 4, Fragment::Ltl);
            assert!(f.classify().is_ltl, "{f}");
            let f = random_formula(&mut rng, &["p", "q"], 4, Fragment::Bor);
            assert!(f.is_bor_fragment(), "{f}");
        }
    }
}
