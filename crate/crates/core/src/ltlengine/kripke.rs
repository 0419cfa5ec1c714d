//! Finite Kripke structures with left-total transition relations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::syntax::is_ident;
use crate::team::{render_step, LassoTrace, PropSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    states: Vec<String>,
    labels: Vec<PropSet>,
    /// Sorted, duplicate-free successor lists.
    edges: Vec<Vec<usize>>,
    initial: usize,
}

impl KripkeStructure {
    /// Validates names, the initial state and left-totality.
    pub fn new(
        states: Vec<String>,
        labels: Vec<PropSet>,
        edges: Vec<(usize, usize)>,
        initial: usize,
    ) -> Result<KripkeStructure> {
        if states.is_empty() {
            return Err(Error::Invalid("a Kripke structure needs at least one state".into()));
        }
        if labels.len() != states.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} states",
                labels.len(),
                states.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(Error::Invalid(format!("state `{s}` declared twice")));
            }
        }
        if initial >= states.len() {
            return Err(Error::Invalid(format!("initial state {initial} out of range")));
        }
        let mut succ = vec![BTreeSet::new(); states.len()];
        for (a, b) in edges {
            if a >= states.len() || b >= states.len() {
                return Err(Error::Invalid(format!("edge ({a}, {b}) out of range")));
            }
            succ[a].insert(b);
        }
        if let Some(i) = succ.iter().position(BTreeSet::is_empty) {
            return Err(Error::NotLeftTotal(states[i].clone()));
        }
        Ok(KripkeStructure {
            states,
            labels,
            edges: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            initial,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn label(&self, s: usize) -> &PropSet {
        &self.labels[s]
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.edges[s]
    }

    /// Whether some path from the initial state spells `t`.
    pub fn generates(&self, t: &LassoTrace) -> bool {
        let n = t.canonical_len();
        // alive[i][s]: state s can follow t from position i forever.
        let mut alive: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..self.len()).map(|s| self.labels[s] == *t.at(i)).collect())
            .collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                let j = t.successor_index(i);
                for s in 0..self.len() {
                    if alive[i][s] && !self.edges[s].iter().any(|&u| alive[j][u]) {
                        alive[i][s] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        alive[0][self.initial]
    }

    /// Traces of all lassos `s_0 … s_{m-1} → s_j` through pairwise distinct
    /// states with `m ≤ max_len`.
    pub fn simple_lassos(&self, max_len: usize) -> Vec<LassoTrace> {
        let mut out = BTreeSet::new();
        let mut path = vec![self.initial];
        self.extend_simple(&mut path, max_len, &mut out);
        out.into_iter().collect()
    }

    fn extend_simple(&self, path: &mut Vec<usize>, max_len: usize, out: &mut BTreeSet<LassoTrace>) {
        let last = *path.last().unwrap();
        for &s in &self.edges[last] {
            if let Some(j) = path.iter().position(|&p| p == s) {
                let labels: Vec<PropSet> = path.iter().map(|&p| self.labels[p].clone()).collect();
                let (pre, cyc) = labels.split_at(j);
                out.insert(LassoTrace::new(pre.to_vec(), cyc.to_vec()).expect("nonempty loop"));
            } else if path.len() < max_len {
                path.push(s);
                self.extend_simple(path, max_len, out);
                path.pop();
            }
        }
    }
}

impl fmt::Display for KripkeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "init: {}", self.states[self.initial])?;
        for (s, l) in self.states.iter().zip(&self.labels) {
            writeln!(f, "label {s} {}", render_step(l))?;
        }
        for (a, succ) in self.edges.iter().enumerate() {
            for &b in succ {
                writeln!(f, "edge {} {}", self.states[a], self.states[b])?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for KripkeStructure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_kripke(s)
    }
}

/// Parses the line format
///
/// ```text
/// states: s0 s1
/// init: s0
/// label s0 {p,q}
/// label s1 {}
/// edge s0 s1
/// edge s1 s1
/// ```
///
/// `#` starts a comment line. Every state needs exactly one label.
pub fn parse_kripke(text: &str) -> Result<KripkeStructure> {
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut init: Option<(usize, usize, String)> = None;
    let mut labels: Vec<(usize, usize, String, PropSet)> = Vec::new();
    let mut edges: Vec<(usize, usize, String, String)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix("states:") {
            if states.is_some() {
                return Err(Error::syntax(line, col, "second `states:` line"));
            }
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if names.is_empty() {
                return Err(Error::syntax(line, col, "`states:` lists no states"));
            }
            for s in &names {
                if !is_ident(s) {
                    return Err(Error::syntax(line, col, format!("`{s}` is not a state name")));
                }
            }
            states = Some((line, names));
        } else if let Some(rest) = trimmed.strip_prefix("init:") {
            if init.is_some() {
                return Err(Error::syntax(line, col, "second `init:` line"));
            }
            let name = rest.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(Error::syntax(line, col, "`init:` takes exactly one state"));
            }
            init = Some((line, col, name.to_string()));
        } else if let Some(rest) = trimmed.strip_prefix("label ") {
            let rest = rest.trim();
            let (name, set) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::syntax(line, col, "expected `label <state> {…}`"))?;
            labels.push((line, col, name.to_string(), parse_set(set.trim(), line, col)?));
        } else if let Some(rest) = trimmed.strip_prefix("edge ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::syntax(line, col, "expected `edge <from> <to>`"));
            }
            edges.push((line, col, parts[0].to_string(), parts[1].to_string()));
        } else {
            return Err(Error::syntax(line, col, format!("unrecognized line `{trimmed}`")));
        }
    }

    let (_, names) = states.ok_or_else(|| Error::syntax(1, 1, "missing `states:` line"))?;
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let lookup = |name: &str, line: usize, col: usize| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::syntax(line, col, format!("unknown state `{name}`")))
    };
    let (il, ic, iname) = init.ok_or_else(|| Error::syntax(1, 1, "missing `init:` line"))?;
    let initial = lookup(&iname, il, ic)?;
    let mut label_of: Vec<Option<PropSet>> = vec![None; names.len()];
    for (line, col, name, set) in labels {
        let s = lookup(&name, line, col)?;
        if label_of[s].replace(set).is_some() {
            return Err(Error::syntax(line, col, format!("state `{name}` labeled twice")));
        }
    }
    let mut pairs = Vec::with_capacity(edges.len());
    for (line, col, a, b) in edges {
        pairs.push((lookup(&a, line, col)?, lookup(&b, line, col)?));
    }
    let mut final_labels = Vec::with_capacity(names.len());
    for (s, l) in label_of.into_iter().enumerate() {
        final_labels.push(l.ok_or_else(|| Error::Invalid(format!("state `{}` has no label", names[s])))?);
    }
    KripkeStructure::new(names, final_labels, pairs, initial)
}

fn parse_set(text: &str, line: usize, col: usize) -> Result<PropSet> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::syntax(line, col, format!("expected a set like {{p,q}}, found `{text}`")))?;
    let mut out = PropSet::new();
    for p in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if !is_ident(p) {
            return Err(Error::syntax(line, col, format!("`{p}` is not a proposition")));
        }
        out.insert(p.to_string());
    }
    Ok(out)
}
