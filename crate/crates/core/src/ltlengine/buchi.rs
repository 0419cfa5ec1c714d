//! Tableau construction of Büchi automata from LTL formulas.
//!
//! A tableau state is the set of obligations for the current position.
//! Expanding it gives guards, obligations for the next position and the
//! untils that were postponed. An edge is accepting for `a U b` unless
//! it postpones that until; the generalized condition is then counted down
//! with a level index.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::ndfs::{find_accepting_lasso, BuchiGraph, LetterLasso};
use crate::error::{Error, Result};
use crate::evalcore::arena::{Arena, Id, Node};
use crate::formula::Formula;
use crate::team::{LassoTrace, PropSet};

/// Upper bound on automaton states and product nodes.
pub const MAX_STATES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    /// Propositions that must hold.
    pub pos: PropSet,
    /// Propositions that must not hold.
    pub neg: PropSet,
    pub target: usize,
}

impl Transition {
    pub fn enabled(&self, letter: &PropSet) -> bool {
        self.pos.is_subset(letter) && self.neg.is_disjoint(letter)
    }
}

#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    pub alphabet: BTreeSet<String>,
    /// Obligations of each state, rendered.
    pub states: Vec<String>,
    pub transitions: Vec<Vec<Transition>>,
    pub initial: usize,
    pub accepting: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Expansion {
    pos: BTreeSet<usize>,
    neg: BTreeSet<usize>,
    next: BTreeSet<Id>,
    postponed: BTreeSet<Id>,
}

struct Branch {
    todo: Vec<Id>,
    done: BTreeSet<Id>,
    exp: Expansion,
}

fn expand(arena: &Arena, now: &BTreeSet<Id>) -> Vec<Expansion> {
    let mut out = BTreeSet::new();
    let mut work = vec![Branch {
        todo: now.iter().rev().copied().collect(),
        done: BTreeSet::new(),
        exp: Expansion {
            pos: BTreeSet::new(),
            neg: BTreeSet::new(),
            next: BTreeSet::new(),
            postponed: BTreeSet::new(),
        },
    }];
    'branches: while let Some(mut br) = work.pop() {
        while let Some(id) = br.todo.pop() {
            if !br.done.insert(id) {
                continue;
            }
            match arena.nodes[id] {
                Node::Top => {}
                Node::Bot => continue 'branches,
                Node::Prop(p) => {
                    if br.exp.neg.contains(&p) {
                        continue 'branches;
                    }
                    br.exp.pos.insert(p);
                }
                Node::NegProp(p) => {
                    if br.exp.pos.contains(&p) {
                        continue 'branches;
                    }
                    br.exp.neg.insert(p);
                }
                Node::And(a, b) => {
                    br.todo.push(b);
                    br.todo.push(a);
                }
                Node::Or(a, b) => {
                    let mut right = Branch {
                        todo: br.todo.clone(),
                        done: br.done.clone(),
                        exp: br.exp.clone(),
                    };
                    right.todo.push(b);
                    work.push(right);
                    br.todo.push(a);
                }
                Node::Next(a) => {
                    br.exp.next.insert(a);
                }
                Node::Globally(a) => {
                    br.exp.next.insert(id);
                    br.todo.push(a);
                }
                Node::Until(a, b) => {
                    let mut later = Branch {
                        todo: br.todo.clone(),
                        done: br.done.clone(),
                        exp: br.exp.clone(),
                    };
                    later.todo.push(a);
                    later.exp.next.insert(id);
                    later.exp.postponed.insert(id);
                    work.push(later);
                    br.todo.push(b);
                }
                ref other => unreachable!("tableau over non-LTL node {other:?}"),
            }
        }
        out.insert(br.exp);
    }
    out.into_iter().collect()
}

fn untils(arena: &Arena) -> Vec<Id> {
    (0..arena.nodes.len())
        .filter(|&i| matches!(arena.nodes[i], Node::Until(..)))
        .collect()
}

fn render(arena: &Arena, set: &BTreeSet<Id>) -> String {
    let parts: Vec<String> = set.iter().map(|&i| arena.to_formula(i).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn ltl_to_buchi(f: &Formula) -> Result<BuchiAutomaton> {
    if !f.is_ltl() {
        return Err(Error::fragment(format!("not an LTL formula: {f}")));
    }
    let mut arena = Arena::new();
    let root = arena.add(f);
    let us = untils(&arena);
    let n = us.len();
    let names = |set: &BTreeSet<usize>| -> PropSet { set.iter().map(|&p| arena.props[p].clone()).collect() };

    let start = (BTreeSet::from([root]), 0usize);
    let mut index: HashMap<(BTreeSet<Id>, usize), usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start.clone()];
    let mut transitions: Vec<Vec<Transition>> = vec![];
    let mut queue = VecDeque::from([0usize]);
    let mut expansions: HashMap<BTreeSet<Id>, Vec<Expansion>> = HashMap::new();
    while let Some(s) = queue.pop_front() {
        let (now, level) = states[s].clone();
        let exps = expansions.entry(now.clone()).or_insert_with(|| expand(&arena, &now)).clone();
        let base = if level == n { 0 } else { level };
        let mut out = Vec::with_capacity(exps.len());
        for e in exps {
            let mut lvl = base;
            while lvl < n && !e.postponed.contains(&us[lvl]) {
                lvl += 1;
            }
            let key = (e.next.clone(), lvl);
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    if states.len() >= MAX_STATES {
                        return Err(Error::ResourceLimit(format!("automaton exceeds {MAX_STATES} states")));
                    }
                    let t = states.len();
                    states.push(key.clone());
                    index.insert(key, t);
                    queue.push_back(t);
                    t
                }
            };
            out.push(Transition {
                pos: names(&e.pos),
                neg: names(&e.neg),
                target,
            });
        }
        if transitions.len() <= s {
            transitions.resize(s + 1, vec![]);
        }
        transitions[s] = out;
    }
    transitions.resize(states.len(), vec![]);
    Ok(BuchiAutomaton {
        alphabet: arena.props.iter().cloned().collect(),
        accepting: states.iter().map(|(_, l)| *l == n).collect(),
        states: states.iter().map(|(s, l)| format!("{} @{l}", render(&arena, s))).collect(),
        transitions,
        initial: 0,
    })
}

pub(crate) fn lasso_of(l: LetterLasso<PropSet>) -> LassoTrace {
    LassoTrace::new(l.stem, l.cycle).expect("accepting cycles are nonempty")
}

struct Membership<'a> {
    a: &'a BuchiAutomaton,
    t: &'a LassoTrace,
}

impl BuchiGraph for Membership<'_> {
    type Node = (usize, usize);
    type Letter = ();
    fn initial(&self) -> Vec<(usize, usize)> {
        vec![(0, self.a.initial)]
    }
    fn successors(&self, &(i, q): &(usize, usize)) -> Vec<((), (usize, usize))> {
        let letter = self.t.at(i);
        let j = self.t.successor_index(i);
        self.a.transitions[q]
            .iter()
            .filter(|tr| tr.enabled(letter))
            .map(|tr| ((), (j, tr.target)))
            .collect()
    }
    fn accepting(&self, &(_, q): &(usize, usize)) -> bool {
        self.a.accepting[q]
    }
}

struct Language<'a>(&'a BuchiAutomaton);

impl BuchiGraph for Language<'_> {
    type Node = usize;
    type Letter = PropSet;
    fn initial(&self) -> Vec<usize> {
        vec![self.0.initial]
    }
    fn successors(&self, &q: &usize) -> Vec<(PropSet, usize)> {
        self.0.transitions[q].iter().map(|tr| (tr.pos.clone(), tr.target)).collect()
    }
    fn accepting(&self, &q: &usize) -> bool {
        self.0.accepting[q]
    }
}

impl BuchiAutomaton {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Whether the automaton has an accepting run on `t`.
    pub fn accepts(&self, t: &LassoTrace) -> Result<bool> {
        Ok(find_accepting_lasso(&Membership { a: self, t }, MAX_STATES)?.is_some())
    }

    /// Some accepted lasso, if the language is nonempty.
    pub fn find_word(&self) -> Result<Option<LassoTrace>> {
        Ok(find_accepting_lasso(&Language(self), MAX_STATES)?.map(lasso_of))
    }
}
