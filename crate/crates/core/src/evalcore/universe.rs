//! The suffix-closed set of traces reachable from a team, with LTL truth
//! tables over it.

use std::collections::HashMap;

use super::arena::{Arena, Id, Node};
use crate::team::LassoTrace;

/// Distinct traces closed under taking suffixes. Element `u` stands for one
/// trace; `succ[u]` is its one-step suffix.
#[derive(Debug, Default)]
pub(crate) struct Universe {
    pub traces: Vec<LassoTrace>,
    pub succ: Vec<usize>,
    /// `positions[u][i]` = element of `suffix(u, i)` for canonical `i`.
    pub positions: Vec<Vec<usize>>,
    index: HashMap<LassoTrace, usize>,
}

impl Universe {
    /// Builds the closure and returns the element of each seed.
    pub fn build<'a, I>(seeds: I) -> (Universe, Vec<usize>)
    where
        I: IntoIterator<Item = &'a LassoTrace>,
    {
        let mut uni = Universe::default();
        let ids = seeds.into_iter().map(|t| uni.add_closed(t)).collect();
        (uni, ids)
    }

    fn add_closed(&mut self, t: &LassoTrace) -> usize {
        if let Some(&u) = self.index.get(t) {
            return u;
        }
        let n = t.canonical_len();
        let first = self.traces.len();
        let mut chain = Vec::with_capacity(n);
        // Walk the suffix chain until it meets a known element.
        let mut cur = t.clone();
        loop {
            if let Some(&u) = self.index.get(&cur) {
                chain.push(u);
                break;
            }
            let u = self.traces.len();
            self.index.insert(cur.clone(), u);
            self.traces.push(cur.clone());
            self.succ.push(usize::MAX);
            self.positions.push(vec![]);
            chain.push(u);
            cur = cur.suffix(1);
        }
        for w in chain.windows(2) {
            self.succ[w[0]] = w[1];
        }
        for u in first..self.traces.len() {
            let len = self.traces[u].canonical_len();
            let mut pos = Vec::with_capacity(len);
            let mut v = u;
            for _ in 0..len {
                pos.push(v);
                v = self.succ_of(v);
            }
            self.positions[u] = pos;
        }
        debug_assert!(n <= self.positions[first].len());
        first
    }

    fn succ_of(&self, u: usize) -> usize {
        if self.succ[u] != usize::MAX {
            self.succ[u]
        } else {
            self.index[&self.traces[u].suffix(1)]
        }
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    /// Element of `suffix(u, i)` for any `i`.
    pub fn at(&self, u: usize, i: usize) -> usize {
        self.positions[u][self.traces[u].canonical_index(i)]
    }

    /// Bitmask of all suffixes of `u`; needs `len() <= 64`.
    pub fn suffix_mask(&self, u: usize) -> u64 {
        self.positions[u].iter().fold(0, |m, &v| m | 1 << v)
    }
}

/// Classical LTL truth values of arena nodes on every universe element.
pub(crate) struct LtlTable {
    values: Vec<Option<Vec<bool>>>,
}

impl LtlTable {
    pub fn new(arena: &Arena) -> LtlTable {
        LtlTable {
            values: vec![None; arena.nodes.len()],
        }
    }

    pub fn get(&mut self, arena: &Arena, uni: &Universe, id: Id) -> &[bool] {
        if self.values[id].is_none() {
            let v = self.compute(arena, uni, id);
            self.values[id] = Some(v);
        }
        self.values[id].as_deref().unwrap()
    }

    pub fn mask(&mut self, arena: &Arena, uni: &Universe, id: Id) -> u64 {
        self.get(arena, uni, id)
            .iter()
            .enumerate()
            .fold(0, |m, (u, &b)| if b { m | 1 << u } else { m })
    }

    fn compute(&mut self, arena: &Arena, uni: &Universe, id: Id) -> Vec<bool> {
        let n = uni.len();
        let holds = |u: usize, p: usize| uni.traces[u].at(0).contains(&arena.props[p]);
        match arena.nodes[id] {
            Node::Prop(p) => (0..n).map(|u| holds(u, p)).collect(),
            Node::NegProp(p) => (0..n).map(|u| !holds(u, p)).collect(),
            Node::Top => vec![true; n],
            Node::Bot => vec![false; n],
            Node::And(a, b) => {
                let a = self.get(arena, uni, a).to_vec();
                let b = self.get(arena, uni, b);
                a.iter().zip(b).map(|(x, y)| *x && *y).collect()
            }
            Node::Or(a, b) => {
                let a = self.get(arena, uni, a).to_vec();
                let b = self.get(arena, uni, b);
                a.iter().zip(b).map(|(x, y)| *x || *y).collect()
            }
            Node::Next(a) => {
                let a = self.get(arena, uni, a);
                (0..n).map(|u| a[uni.succ[u]]).collect()
            }
            Node::Globally(a) => {
                // Greatest fixpoint of g = a ∧ X g.
                let a = self.get(arena, uni, a).to_vec();
                let mut g = a.clone();
                loop {
                    let next: Vec<bool> = (0..n).map(|u| a[u] && g[uni.succ[u]]).collect();
                    if next == g {
                        return g;
                    }
                    g = next;
                }
            }
            Node::Until(a, b) => {
                // Least fixpoint of w = b ∨ (a ∧ X w).
                let a = self.get(arena, uni, a).to_vec();
                let b = self.get(arena, uni, b).to_vec();
                let mut w = b.clone();
                loop {
                    let next: Vec<bool> = (0..n).map(|u| b[u] || (a[u] && w[uni.succ[u]])).collect();
                    if next == w {
                        return w;
                    }
                    w = next;
                }
            }
            ref other => panic!("LTL table requested for non-LTL node {other:?}"),
        }
    }
}
