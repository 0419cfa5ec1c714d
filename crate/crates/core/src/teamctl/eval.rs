use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::TefFormula;
use crate::error::{Error, Result};
use crate::evalcore::{check_traces, Limits};
use crate::team::{LassoTrace, Multiteam};

/// Canonical local position of every entry, in entry order.
pub type Configuration = Vec<usize>;

/// The tef graph of a multiteam: a configuration steps to every
/// configuration where a nonempty set of entries moved one position on.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    traces: Vec<LassoTrace>,
}

impl ConfigGraph {
    pub fn new(team: &Multiteam) -> ConfigGraph {
        ConfigGraph {
            traces: team.traces().cloned().collect(),
        }
    }

    pub fn initial(&self) -> Configuration {
        vec![0; self.traces.len()]
    }

    /// `∏ (prefix + loop)` over the entries.
    pub fn size_bound(&self) -> usize {
        self.traces
            .iter()
            .try_fold(1usize, |acc, t| acc.checked_mul(t.canonical_len()))
            .unwrap_or(usize::MAX)
    }

    fn advance(&self, c: &[usize], moved: u32) -> Configuration {
        c.iter()
            .enumerate()
            .map(|(i, &p)| if moved >> i & 1 == 1 { self.traces[i].successor_index(p) } else { p })
            .collect()
    }

    /// Successors in order of the moved set, read as a binary number.
    pub fn successors(&self, c: &Configuration) -> Vec<Configuration> {
        let n = self.traces.len();
        (1u32..1 << n).map(|m| self.advance(c, m)).collect()
    }

    /// All paths with `k` edges from the initial configuration.
    pub fn paths(&self, k: usize) -> BTreeSet<Vec<Configuration>> {
        let mut out = BTreeSet::from([vec![self.initial()]]);
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|p| {
                    self.successors(p.last().unwrap())
                        .into_iter()
                        .map(move |c| {
                            let mut q = p.clone();
                            q.push(c);
                            q
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum TNode {
    Prop(usize, bool),
    Top,
    Bot,
    And(usize, usize),
    Or(usize, usize),
    BOr(usize, usize),
    Next(usize),
    NextE(usize),
    NextA(usize),
    GlobE(usize),
    GlobA(usize),
    UntilE(usize, usize),
    UntilA(usize, usize),
}

/// Active entries and their positions; inactive positions are zero.
type State = (u32, Configuration);

struct TefEval<'a> {
    graph: &'a ConfigGraph,
    nodes: Vec<TNode>,
    props: Vec<String>,
    max_configs: usize,
    memo: HashMap<(usize, State), bool>,
}

impl TefEval<'_> {
    fn add(&mut self, f: &TefFormula) -> usize {
        use TefFormula as T;
        let node = match f {
            T::Prop(p) | T::NegProp(p) => {
                let i = match self.props.iter().position(|q| q == p) {
                    Some(i) => i,
                    None => {
                        self.props.push(p.clone());
                        self.props.len() - 1
                    }
                };
                TNode::Prop(i, matches!(f, T::Prop(_)))
            }
            T::Top => TNode::Top,
            T::Bot => TNode::Bot,
            T::And(a, b) => TNode::And(self.add(a), self.add(b)),
            T::Or(a, b) => TNode::Or(self.add(a), self.add(b)),
            T::BOr(a, b) => TNode::BOr(self.add(a), self.add(b)),
            T::Next(a) => TNode::Next(self.add(a)),
            T::NextE(a) => TNode::NextE(self.add(a)),
            T::NextA(a) => TNode::NextA(self.add(a)),
            T::GlobE(a) => TNode::GlobE(self.add(a)),
            T::GlobA(a) => TNode::GlobA(self.add(a)),
            T::UntilE(a, b) => TNode::UntilE(self.add(a), self.add(b)),
            T::UntilA(a, b) => TNode::UntilA(self.add(a), self.add(b)),
            T::StrongReleaseE(psi, phi) => {
                let phi = self.add(phi);
                let psi = self.add(psi);
                self.nodes.push(TNode::And(phi, psi));
                TNode::UntilE(phi, self.nodes.len() - 1)
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn active(mask: u32) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| mask >> i & 1 == 1)
    }

    /// One global step where the entries in `moved` advance.
    fn step(&self, (mask, c): &State, moved: u32) -> State {
        (*mask, self.graph.advance(c, moved & mask))
    }

    /// Tef successors; the empty multiteam idles in place.
    fn successors(&self, s: &State) -> Vec<State> {
        let mask = s.0;
        if mask == 0 {
            return vec![s.clone()];
        }
        let mut out = Vec::new();
        let mut sub = mask;
        // Nonempty submasks of `mask`, ascending.
        let mut subs = Vec::new();
        while sub != 0 {
            subs.push(sub);
            sub = (sub - 1) & mask;
        }
        subs.reverse();
        for m in subs {
            out.push(self.step(s, m));
        }
        out
    }

    fn reachable(&self, s: &State) -> Result<Vec<State>> {
        let mut seen: HashSet<State> = HashSet::from([s.clone()]);
        let mut order = vec![s.clone()];
        let mut queue = VecDeque::from([s.clone()]);
        while let Some(r) = queue.pop_front() {
            for n in self.successors(&r) {
                if seen.insert(n.clone()) {
                    if seen.len() > self.max_configs {
                        return Err(Error::ResourceLimit(format!(
                            "more than {} configurations",
                            self.max_configs
                        )));
                    }
                    order.push(n.clone());
                    queue.push_back(n);
                }
            }
        }
        Ok(order)
    }

    fn eval(&mut self, id: usize, s: &State) -> Result<bool> {
        let key = (id, s.clone());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let (mask, c) = s;
        let v = match self.nodes[id] {
            TNode::Prop(p, positive) => {
                let name = &self.props[p];
                Self::active(*mask).all(|i| self.graph.traces[i].at(c[i]).contains(name) == positive)
            }
            TNode::Top => true,
            TNode::Bot => *mask == 0,
            TNode::And(a, b) => self.eval(a, s)? && self.eval(b, s)?,
            TNode::BOr(a, b) => self.eval(a, s)? || self.eval(b, s)?,
            TNode::Or(a, b) => {
                let mut found = false;
                let mut left = *mask;
                loop {
                    let right = mask & !left;
                    let ls = (left, restrict(c, left));
                    let rs = (right, restrict(c, right));
                    if self.eval(a, &ls)? && self.eval(b, &rs)? {
                        found = true;
                        break;
                    }
                    if left == 0 {
                        break;
                    }
                    left = (left - 1) & mask;
                }
                found
            }
            TNode::Next(a) => {
                let n = self.step(s, *mask);
                self.eval(a, &n)?
            }
            TNode::NextE(a) => {
                let mut any = false;
                for n in self.successors(s) {
                    if self.eval(a, &n)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            TNode::NextA(a) => {
                let mut all = true;
                for n in self.successors(s) {
                    if !self.eval(a, &n)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            TNode::GlobA(a) => {
                let mut all = true;
                for r in self.reachable(s)? {
                    if !self.eval(a, &r)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            TNode::GlobE(a) => {
                let region = self.reachable(s)?;
                let mut inside: HashSet<State> = HashSet::new();
                for r in &region {
                    if self.eval(a, r)? {
                        inside.insert(r.clone());
                    }
                }
                loop {
                    let drop: Vec<State> = inside
                        .iter()
                        .filter(|r| !self.successors(r).iter().any(|n| inside.contains(n)))
                        .cloned()
                        .collect();
                    if drop.is_empty() {
                        break;
                    }
                    for r in drop {
                        inside.remove(&r);
                    }
                }
                inside.contains(s)
            }
            TNode::UntilE(a, b) | TNode::UntilA(a, b) => {
                let exists = matches!(self.nodes[id], TNode::UntilE(..));
                let region = self.reachable(s)?;
                let mut win: HashSet<State> = HashSet::new();
                let mut left = Vec::new();
                for r in &region {
                    if self.eval(b, r)? {
                        win.insert(r.clone());
                    } else if self.eval(a, r)? {
                        left.push(r.clone());
                    }
                }
                loop {
                    let (add, stay): (Vec<State>, Vec<State>) = left.into_iter().partition(|r| {
                        let succ = self.successors(r);
                        if exists {
                            succ.iter().any(|n| win.contains(n))
                        } else {
                            succ.iter().all(|n| win.contains(n))
                        }
                    });
                    left = stay;
                    if add.is_empty() {
                        break;
                    }
                    win.extend(add);
                }
                win.contains(s)
            }
        };
        self.memo.insert(key, v);
        Ok(v)
    }
}

fn restrict(c: &[usize], mask: u32) -> Configuration {
    c.iter()
        .enumerate()
        .map(|(i, &p)| if mask >> i & 1 == 1 { p } else { 0 })
        .collect()
}

pub fn eval_tef(team: &Multiteam, f: &TefFormula) -> Result<bool> {
    eval_tef_with(team, f, &Limits::default())
}

pub fn eval_tef_with(team: &Multiteam, f: &TefFormula, limits: &Limits) -> Result<bool> {
    check_traces(team.traces(), team.len(), limits)?;
    if team.len() > 16 {
        return Err(Error::ResourceLimit(format!("{} entries exceed 16", team.len())));
    }
    if f.depth() > limits.max_depth {
        return Err(Error::ResourceLimit(format!(
            "formula depth {} exceeds {}",
            f.depth(),
            limits.max_depth
        )));
    }
    let graph = ConfigGraph::new(team);
    if graph.size_bound() > limits.max_configurations {
        return Err(Error::ResourceLimit(format!(
            "{} configurations exceed {}",
            graph.size_bound(),
            limits.max_configurations
        )));
    }
    let mut ev = TefEval {
        graph: &graph,
        nodes: Vec::new(),
        props: Vec::new(),
        max_configs: limits.max_configurations,
        memo: HashMap::new(),
    };
    let root = ev.add(f);
    let all = if team.is_empty() { 0 } else { u32::MAX >> (32 - team.len()) };
    ev.eval(root, &(all, graph.initial()))
}
