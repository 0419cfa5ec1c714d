//! Strict (multiset) semantics. A multiteam is the sorted list of universe
//! elements of its entries; indices never matter beyond multiplicity.

use std::collections::{HashMap, HashSet};

use super::arena::{Arena, Id, Node};
use super::universe::{LtlTable, Universe};
use super::{Budget, UntilBound};
use crate::error::Result;

pub(crate) type Bag = Vec<usize>;

/// One entry's contribution to an until: the suffix handed to the right
/// argument and the suffixes strictly before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PointChoice {
    picked: usize,
    /// Bitmask of suffixes at positions `< f(t)`; zero iff `f(t) = 0`.
    before: u64,
}

pub(crate) struct StrictEval<'a> {
    arena: &'a Arena,
    uni: &'a Universe,
    ltl: LtlTable,
    bound: UntilBound,
    budget: Budget,
    memo: HashMap<(Id, Bag), bool>,
    obligations: HashMap<(Id, Vec<u64>), bool>,
}

pub(crate) fn grouped(bag: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &u in bag {
        match out.last_mut() {
            Some((v, c)) if *v == u => *c += 1,
            _ => out.push((u, 1)),
        }
    }
    out
}

/// All ways to split a bag into two, as `(left, right)`.
pub(crate) fn splits(bag: &[usize]) -> Vec<(Bag, Bag)> {
    let groups = grouped(bag);
    let mut out = vec![(Bag::new(), Bag::new())];
    for (u, c) in groups {
        let mut next = Vec::with_capacity(out.len() * (c + 1));
        for (l, r) in &out {
            for k in 0..=c {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.extend(std::iter::repeat_n(u, k));
                r2.extend(std::iter::repeat_n(u, c - k));
                next.push((l2, r2));
            }
        }
        out = next;
    }
    out
}

/// Multisets of size `k` drawn from `options` (nondecreasing index tuples).
fn multichoose<T: Clone>(options: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(options: &[T], k: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..options.len() {
            cur.push(options[i].clone());
            go(options, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(options, k, 0, &mut Vec::new(), &mut out);
    out
}

fn sorted(mut bag: Bag) -> Bag {
    bag.sort_unstable();
    bag
}

impl<'a> StrictEval<'a> {
    pub fn new(arena: &'a Arena, uni: &'a Universe, bound: UntilBound, budget: Budget) -> Self {
        StrictEval {
            arena,
            uni,
            ltl: LtlTable::new(arena),
            bound,
            budget,
            memo: HashMap::new(),
            obligations: HashMap::new(),
        }
    }

    fn ltl_values(&mut self, id: Id) -> &[bool] {
        self.ltl.get(self.arena, self.uni, id)
    }

    pub fn eval(&mut self, id: Id, bag: &[usize]) -> Result<bool> {
        let arena = self.arena;
        match arena.nodes[id] {
            Node::Prop(_) | Node::NegProp(_) => {
                let v = self.ltl_values(id);
                return Ok(bag.iter().all(|&u| v[u]));
            }
            Node::Top => return Ok(true),
            Node::Bot => return Ok(bag.is_empty()),
            Node::Exists(b) => {
                let v = self.ltl_values(b);
                return Ok(bag.iter().any(|&u| v[u]));
            }
            _ => {}
        }
        if let Some(&v) = self.memo.get(&(id, bag.to_vec())) {
            return Ok(v);
        }
        self.budget.tick(1)?;
        let v = match arena.nodes[id] {
            Node::And(a, b) => self.eval(a, bag)? && self.eval(b, bag)?,
            Node::BOr(a, b) => self.eval(a, bag)? || self.eval(b, bag)?,
            Node::BNeg(a) => !self.eval(a, bag)?,
            Node::Next(a) => {
                let next = sorted(bag.iter().map(|&u| self.uni.succ[u]).collect());
                self.eval(a, &next)?
            }
            Node::Or(a, b) => {
                let mut found = false;
                for (l, r) in splits(bag) {
                    self.budget.tick(1)?;
                    if self.eval(a, &l)? && self.eval(b, &r)? {
                        found = true;
                        break;
                    }
                }
                found
            }
            Node::Globally(a) => self.globally(a, bag)?,
            Node::Until(a, b) => self.until(a, b, bag)?,
            Node::Dep(ref args, target) => {
                let rows = self.rows(args, bag);
                let tv = self.rows(&[target], bag);
                (0..rows.len()).all(|i| (0..rows.len()).all(|j| rows[i] != rows[j] || tv[i] == tv[j]))
            }
            Node::Inc(ref lhs, ref rhs) => {
                let l = self.rows(lhs, bag);
                let r = self.rows(rhs, bag);
                l.iter().all(|row| r.iter().any(|o| o == row))
            }
            _ => unreachable!(),
        };
        self.memo.insert((id, bag.to_vec()), v);
        Ok(v)
    }

    fn rows(&mut self, ids: &[Id], bag: &[usize]) -> Vec<Vec<bool>> {
        let cols: Vec<Vec<bool>> = ids.iter().map(|&id| self.ltl_values(id).to_vec()).collect();
        bag.iter().map(|&u| cols.iter().map(|c| c[u]).collect()).collect()
    }

    /// Every point function: each entry moves to one of its suffixes.
    fn globally(&mut self, a: Id, bag: &[usize]) -> Result<bool> {
        let mut family: Vec<Bag> = vec![vec![]];
        for (u, c) in grouped(bag) {
            let options = &self.uni.positions[u];
            let picks = multichoose(options, c);
            let mut next = Vec::with_capacity(family.len() * picks.len());
            for base in &family {
                for p in &picks {
                    let mut b = base.clone();
                    b.extend_from_slice(p);
                    next.push(b);
                }
            }
            self.budget.tick(next.len() as u64)?;
            family = next;
        }
        let family: HashSet<Bag> = family.into_iter().map(sorted).collect();
        let mut family: Vec<Bag> = family.into_iter().collect();
        family.sort();
        for b in family {
            if !self.eval(a, &b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn point_choices(&self, u: usize, bound: usize) -> Vec<PointChoice> {
        let t = &self.uni.traces[u];
        let limit = t.prefix_len() + bound * t.cycle_len();
        let mut out: Vec<PointChoice> = Vec::new();
        let mut before = 0u64;
        for i in 0..limit {
            let c = PointChoice {
                picked: self.uni.at(u, i),
                before,
            };
            if !out.contains(&c) {
                out.push(c);
            }
            before |= 1 << self.uni.at(u, i);
        }
        out
    }

    fn until(&mut self, a: Id, b: Id, bag: &[usize]) -> Result<bool> {
        let bound = match self.bound {
            UntilBound::Auto if self.arena.downward_closed[a] => 1,
            UntilBound::Auto => 2,
            UntilBound::Fixed(k) => k.max(1),
        };
        // Combine entries group by group; symmetric choices within a group
        // collapse to multisets.
        let mut combos: Vec<(Bag, Vec<u64>)> = vec![(vec![], vec![])];
        for (u, c) in grouped(bag) {
            let picks = multichoose(&self.point_choices(u, bound), c);
            let mut next = HashSet::new();
            for (s, befores) in &combos {
                for p in &picks {
                    let mut s2 = s.clone();
                    let mut b2 = befores.clone();
                    for choice in p {
                        s2.push(choice.picked);
                        if choice.before != 0 {
                            b2.push(choice.before);
                        }
                    }
                    s2.sort_unstable();
                    b2.sort_unstable();
                    next.insert((s2, b2));
                }
            }
            self.budget.tick(next.len() as u64)?;
            combos = next.into_iter().collect();
            combos.sort();
        }
        for (s, befores) in combos {
            if self.eval(b, &s)? && self.obligations_hold(a, befores)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every `f' < f` on the entries with `f ≠ 0`: each picks one earlier suffix.
    fn obligations_hold(&mut self, a: Id, befores: Vec<u64>) -> Result<bool> {
        if befores.is_empty() {
            return Ok(true);
        }
        if let Some(&v) = self.obligations.get(&(a, befores.clone())) {
            return Ok(v);
        }
        let mut family: HashSet<Bag> = HashSet::from([vec![]]);
        for &mask in &befores {
            let mut next = HashSet::new();
            for base in &family {
                for u in super::lax::bits(mask) {
                    let mut b = base.clone();
                    b.push(u);
                    b.sort_unstable();
                    next.insert(b);
                }
            }
            self.budget.tick(next.len() as u64)?;
            family = next;
        }
        let mut family: Vec<Bag> = family.into_iter().collect();
        family.sort();
        let mut v = true;
        for bag in family {
            if !self.eval(a, &bag)? {
                v = false;
                break;
            }
        }
        self.obligations.insert((a, befores), v);
        Ok(v)
    }
}
