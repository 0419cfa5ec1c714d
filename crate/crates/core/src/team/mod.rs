//! Ultimately periodic traces, teams and multiteams.

mod file;

pub use file::{parse_team_file, TeamFile};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type PropSet = BTreeSet<String>;

pub fn props<I, S>(names: I) -> PropSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    names.into_iter().map(Into::into).collect()
}

/// The infinite word `prefix · cycle^ω`, kept in normal form: the cycle is
/// primitive and the prefix cannot be folded into it. Structural equality is
/// therefore equality of the denoted words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoTrace {
    prefix: Vec<PropSet>,
    cycle: Vec<PropSet>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<PropSet>, cycle: Vec<PropSet>) -> Result<LassoTrace> {
        if cycle.is_empty() {
            return Err(Error::Invalid("a lasso needs a nonempty loop".into()));
        }
        Ok(Self::normalized(prefix, cycle))
    }

    /// The constant trace `step^ω`.
    pub fn constant(step: PropSet) -> LassoTrace {
        LassoTrace {
            prefix: vec![],
            cycle: vec![step],
        }
    }

    fn normalized(mut prefix: Vec<PropSet>, mut cycle: Vec<PropSet>) -> LassoTrace {
        let n = cycle.len();
        let period = (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]))
            .unwrap_or(n);
        cycle.truncate(period);
        while prefix.last().is_some_and(|last| *last == cycle[cycle.len() - 1]) {
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoTrace { prefix, cycle }
    }

    pub fn prefix(&self) -> &[PropSet] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[PropSet] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// `prefix_len + cycle_len`: the number of distinct suffixes.
    pub fn canonical_len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn canonical_positions(&self) -> Range<usize> {
        0..self.canonical_len()
    }

    /// Folds an arbitrary position into the canonical range.
    pub fn canonical_index(&self, i: usize) -> usize {
        let p = self.prefix.len();
        if i < p {
            i
        } else {
            p + (i - p) % self.cycle.len()
        }
    }

    pub fn at(&self, i: usize) -> &PropSet {
        let j = self.canonical_index(i);
        let p = self.prefix.len();
        if j < p {
            &self.prefix[j]
        } else {
            &self.cycle[j - p]
        }
    }

    /// The successor position of canonical position `i`.
    pub fn successor_index(&self, i: usize) -> usize {
        self.canonical_index(i + 1)
    }

    pub fn suffix(&self, i: usize) -> LassoTrace {
        let j = self.canonical_index(i);
        let p = self.prefix.len();
        if j < p {
            LassoTrace {
                prefix: self.prefix[j..].to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(j - p);
            LassoTrace {
                prefix: vec![],
                cycle,
            }
        }
    }

    /// The first `n` letters.
    pub fn unroll(&self, n: usize) -> Vec<PropSet> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    pub fn restrict(&self, ap: &BTreeSet<String>) -> LassoTrace {
        let project = |s: &PropSet| s.intersection(ap).cloned().collect::<PropSet>();
        Self::normalized(
            self.prefix.iter().map(project).collect(),
            self.cycle.iter().map(project).collect(),
        )
    }
}

pub(crate) fn render_step(step: &PropSet) -> String {
    let inner: Vec<&str> = step.iter().map(String::as_str).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Display for LassoTrace {
    /// Team-file notation: `{p} / {q}` for `{p}{q}^ω`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |steps: &[PropSet]| steps.iter().map(render_step).collect::<Vec<_>>().join(" ");
        if self.prefix.is_empty() {
            write!(f, "/ {}", join(&self.cycle))
        } else {
            write!(f, "{} / {}", join(&self.prefix), join(&self.cycle))
        }
    }
}

impl Serialize for LassoTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite set of traces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team {
    traces: BTreeSet<LassoTrace>,
}

impl Team {
    pub fn new() -> Team {
        Team::default()
    }

    pub fn insert(&mut self, t: LassoTrace) -> bool {
        self.traces.insert(t)
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, t: &LassoTrace) -> bool {
        self.traces.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LassoTrace> {
        self.traces.iter()
    }

    /// Members in the order of their rendering, for reports.
    pub fn sorted_by_rendering(&self) -> Vec<&LassoTrace> {
        let mut out: Vec<(String, &LassoTrace)> = self.traces.iter().map(|t| (t.to_string(), t)).collect();
        out.sort();
        out.into_iter().map(|(_, t)| t).collect()
    }

    pub fn restrict_ap(&self, ap: &BTreeSet<String>) -> Team {
        self.iter().map(|t| t.restrict(ap)).collect()
    }

    /// All subteams, smallest first by bitmask order.
    pub fn subteams(&self) -> Vec<Team> {
        let members: Vec<&LassoTrace> = self.iter().collect();
        (0u64..1 << members.len())
            .map(|mask| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, t)| (*t).clone())
                    .collect()
            })
            .collect()
    }
}

impl FromIterator<LassoTrace> for Team {
    fn from_iter<I: IntoIterator<Item = LassoTrace>>(iter: I) -> Team {
        Team {
            traces: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Team {
    type Item = &'a LassoTrace;
    type IntoIter = std::collections::btree_set::Iter<'a, LassoTrace>;
    fn into_iter(self) -> Self::IntoIter {
        self.traces.iter()
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sorted_by_rendering().iter().map(|t| format!("[{t}]")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Team {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.sorted_by_rendering())
    }
}

/// A finite multiset of traces, as entries with distinct indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiteam {
    entries: BTreeMap<usize, LassoTrace>,
}

impl Multiteam {
    pub fn new() -> Multiteam {
        Multiteam::default()
    }

    /// Builds entries `0, 1, …` in iteration order; repeats are kept.
    pub fn from_traces<I: IntoIterator<Item = LassoTrace>>(traces: I) -> Multiteam {
        Multiteam {
            entries: traces.into_iter().enumerate().collect(),
        }
    }

    /// Returns false if the index was already taken.
    pub fn insert(&mut self, index: usize, t: LassoTrace) -> bool {
        if self.entries.contains_key(&index) {
            return false;
        }
        self.entries.insert(index, t);
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &LassoTrace)> {
        self.entries.iter().map(|(i, t)| (*i, t))
    }

    pub fn traces(&self) -> impl Iterator<Item = &LassoTrace> {
        self.entries.values()
    }

    pub fn support(&self) -> Team {
        self.entries.values().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use proptest::prelude::*;

    fn s(names: &[&str]) -> PropSet {
        props(names.iter().copied())
    }

    fn lasso(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        LassoTrace::new(prefix.iter().map(|x| s(x)).collect(), cycle.iter().map(|x| s(x)).collect()).unwrap()
    }

    #[test]
    fn empty_loop_is_rejected() {
        assert!(LassoTrace::new(vec![s(&["p"])], vec![]).is_err());
    }

    #[test]
    fn suffix_examples() {
        let t = lasso(&[&["p"]], &[&["q"]]);
        assert_eq!(t.suffix(0), t);
        assert_eq!(t.suffix(1), lasso(&[], &[&["q"]]));
        let t = lasso(&[&["p"]], &[&["q"], &["r"]]);
        let s5 = t.suffix(5);
        assert_eq!(s5, lasso(&[], &[&["q"], &["r"]]));
        assert_eq!(s5.unroll(8), t.unroll(13)[5..].to_vec());
    }

    #[test]
    fn canonical_position_examples() {
        assert_eq!(lasso(&[], &[&["p"]]).canonical_positions(), 0..1);
        assert_eq!(lasso(&[&["p"]], &[&["q"]]).canonical_positions(), 0..2);
        let t = lasso(&[&["p"], &["p"]], &[&["q"], &["r"]]);
        assert_eq!(t.canonical_positions(), 0..4);
        let distinct: BTreeSet<LassoTrace> = (0..7).map(|i| t.suffix(i)).collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn normalization_is_semantic() {
        assert_eq!(lasso(&[&["p"], &["q"]], &[&["q"]]), lasso(&[&["p"]], &[&["q"]]));
        assert_eq!(lasso(&[], &[&["p"], &["p"]]), lasso(&[], &[&["p"]]));
        assert_eq!(lasso(&[&["b"]], &[&["a"], &["b"]]), lasso(&[], &[&["b"], &["a"]]));
        assert_ne!(lasso(&[], &[&["a"], &["b"]]), lasso(&[], &[&["b"], &["a"]]));
    }

    #[test]
    fn restrict_examples() {
        let p = s(&["p"]);
        let team: Team = [lasso(&[], &[&["p", "q"]])].into_iter().collect();
        assert_eq!(team.restrict_ap(&p), [lasso(&[], &[&["p"]])].into_iter().collect());
        let team: Team = [lasso(&[], &[&["p", "q"]]), lasso(&[], &[&["p"]])].into_iter().collect();
        let r = team.restrict_ap(&p);
        assert_eq!(r.len(), 1);
        assert_eq!(r.iter().next().unwrap().unroll(6), lasso(&[], &[&["p"]]).unroll(6));
        let team: Team = [lasso(&[&["a"]], &[&["b"]]), lasso(&[], &[&["c"], &["d"]])].into_iter().collect();
        assert_eq!(team.restrict_ap(&BTreeSet::new()), [lasso(&[], &[&[]])].into_iter().collect());
    }

    #[test]
    fn rendering() {
        assert_eq!(lasso(&[&["p"]], &[&["q", "r"], &[]]).to_string(), "{p} / {q,r} {}");
        assert_eq!(lasso(&[], &[&["p"]]).to_string(), "/ {p}");
    }

    #[test]
    fn multiteam_support_deduplicates() {
        let t = lasso(&[&["p"]], &[&["q"]]);
        let m = Multiteam::from_traces([t.clone(), t.clone()]);
        assert_eq!(m.len(), 2);
        assert_eq!(m.support().len(), 1);
    }

    proptest! {
        #[test]
        fn suffix_composes(t in sample::strategy::lasso(&["p", "q"], 5), i in 0usize..=8, j in 0usize..=8) {
            prop_assert_eq!(t.suffix(i).suffix(j), t.suffix(i + j));
        }

        #[test]
        fn suffix_matches_unrolling(t in sample::strategy::lasso(&["p", "q"], 5), i in 0usize..=8) {
            prop_assert_eq!(t.suffix(i).unroll(10), t.unroll(i + 10)[i..].to_vec());
        }

        #[test]
        fn canonical_positions_cover_exactly_the_suffixes(t in sample::strategy::lasso(&["p", "q"], 5)) {
            let all: BTreeSet<LassoTrace> = (0..3 * t.canonical_len() + 2).map(|i| t.suffix(i)).collect();
            let canon: BTreeSet<LassoTrace> = t.canonical_positions().map(|i| t.suffix(i)).collect();
            prop_assert_eq!(&all, &canon);
            prop_assert_eq!(canon.len(), t.canonical_len());
        }

        #[test]
        fn equal_words_normalize_equally(
            prefix in proptest::collection::vec(sample::strategy::step(&["p", "q"]), 0..3),
            cycle in proptest::collection::vec(sample::strategy::step(&["p", "q"]), 1..3),
            reps in 1usize..3,
            extra in 0usize..3,
        ) {
            let a = LassoTrace::new(prefix.clone(), cycle.clone()).unwrap();
            // Unroll the loop `extra` letters into the prefix and repeat it.
            let mut longer_prefix = prefix.clone();
            for k in 0..extra {
                longer_prefix.push(cycle[k % cycle.len()].clone());
            }
            let mut rotated = cycle.clone();
            rotated.rotate_left(extra % cycle.len());
            let long_cycle: Vec<PropSet> = (0..reps).flat_map(|_| rotated.clone()).collect();
            let b = LassoTrace::new(longer_prefix, long_cycle).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
