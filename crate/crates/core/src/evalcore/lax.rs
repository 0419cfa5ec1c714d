//! Lax (set-based) semantics. Teams are bitmasks over a [`Universe`].
//!
//! Choice functions are never listed one by one: `T[f,∞]` only depends on the
//! set of suffixes each member picks, and every family of updated teams that
//! a quantifier ranges over has a closed description as "subsets of A that
//! hit each of E_1, …, E_n". The evaluators enumerate those subsets.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use super::arena::{Arena, Id, Node};
use super::universe::{LtlTable, Universe};
use super::{Budget, UntilBound};
use crate::error::{Error, Result};

/// What one member contributes for one choice of positions in an until.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct MemberChoice {
    /// Suffixes handed to the right argument.
    picked: u64,
    /// Suffixes at positions below the maximum: what `f' < f` may use.
    below_max: u64,
    /// Suffixes at positions up to the minimum (capped below the maximum):
    /// `f'` must use at least one of them.
    up_to_min: u64,
    /// `max f(t) ≠ 0`, i.e. the member belongs to `T'`.
    in_obligation: bool,
}

type Antichain = Vec<u64>;

/// Structure of a subformula's truth table over all subteams of the universe,
/// read off the computed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `X ⊨ a` iff `X ⊆ mask`.
    Flat(u64),
    /// Closed under subteams.
    DownClosed,
    General,
}

/// Tables are only built for universes up to this size.
const SHAPE_BITS: usize = 14;

pub(crate) struct LaxEval<'a> {
    arena: &'a Arena,
    uni: &'a Universe,
    ltl: LtlTable,
    bound: UntilBound,
    budget: Budget,
    memo: HashMap<(Id, u64), bool>,
    obligations: HashMap<(Id, u64, Antichain), bool>,
    choices: HashMap<(usize, usize), Rc<Vec<MemberChoice>>>,
    shapes: HashMap<Id, Shape>,
    max_enum_bits: u32,
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Adds a hitting constraint, dropping constraints implied by others.
fn antichain_insert(chain: &Antichain, e: u64) -> Antichain {
    if chain.iter().any(|&x| x & !e == 0) {
        return chain.clone();
    }
    let mut out: Antichain = chain.iter().copied().filter(|&y| e & !y != 0).collect();
    out.push(e);
    out.sort_unstable();
    out
}

impl<'a> LaxEval<'a> {
    pub fn new(arena: &'a Arena, uni: &'a Universe, bound: UntilBound, budget: Budget) -> Self {
        LaxEval {
            arena,
            uni,
            ltl: LtlTable::new(arena),
            bound,
            budget,
            memo: HashMap::new(),
            obligations: HashMap::new(),
            choices: HashMap::new(),
            shapes: HashMap::new(),
            max_enum_bits: 24,
        }
    }

    fn ltl_mask(&mut self, id: Id) -> u64 {
        self.ltl.mask(self.arena, self.uni, id)
    }

    fn check_enum(&self, population: u64) -> Result<()> {
        if population.count_ones() > self.max_enum_bits {
            return Err(Error::ResourceLimit(format!(
                "a quantifier ranges over subsets of {} suffixes",
                population.count_ones()
            )));
        }
        Ok(())
    }

    fn shape(&mut self, id: Id) -> Result<Shape> {
        let n = self.uni.len();
        match self.arena.nodes[id] {
            Node::Prop(_) | Node::NegProp(_) => return Ok(Shape::Flat(self.ltl_mask(id))),
            Node::Top => return Ok(Shape::Flat(full_mask(n))),
            Node::Bot => return Ok(Shape::Flat(0)),
            _ => {}
        }
        if n > SHAPE_BITS {
            return Ok(Shape::General);
        }
        if let Some(&s) = self.shapes.get(&id) {
            return Ok(s);
        }
        let size = 1usize << n;
        let mut table = Vec::with_capacity(size);
        for x in 0..size as u64 {
            table.push(self.eval(id, x)?);
        }
        self.budget.tick((n * size) as u64)?;
        let mask = (0..n).filter(|&u| table[1 << u]).fold(0u64, |m, u| m | 1 << u);
        let shape = if (0..size).all(|x| table[x] == (x as u64 & !mask == 0)) {
            Shape::Flat(mask)
        } else if (0..size).all(|x| !table[x] || bits(x as u64).all(|u| table[x & !(1 << u)])) {
            Shape::DownClosed
        } else {
            Shape::General
        };
        self.shapes.insert(id, shape);
        Ok(shape)
    }

    pub fn eval(&mut self, id: Id, team: u64) -> Result<bool> {
        let arena = self.arena;
        match arena.nodes[id] {
            Node::Prop(_) | Node::NegProp(_) => {
                let m = self.ltl_mask(id);
                return Ok(team & !m == 0);
            }
            Node::Top => return Ok(true),
            Node::Bot => return Ok(team == 0),
            Node::Exists(b) => {
                let m = self.ltl_mask(b);
                return Ok(team & m != 0);
            }
            _ => {}
        }
        if let Some(&v) = self.memo.get(&(id, team)) {
            return Ok(v);
        }
        self.budget.tick(1)?;
        let v = match arena.nodes[id] {
            Node::And(a, b) => self.eval(a, team)? && self.eval(b, team)?,
            Node::BOr(a, b) => self.eval(a, team)? || self.eval(b, team)?,
            Node::BNeg(a) => !self.eval(a, team)?,
            Node::Next(a) => {
                let next = bits(team).fold(0, |m, u| m | 1 << self.uni.succ[u]);
                self.eval(a, next)?
            }
            Node::Or(a, b) => self.split(a, b, team)?,
            Node::Globally(a) => self.globally(a, team)?,
            Node::Until(a, b) => self.until(a, b, team)?,
            Node::Dep(ref args, target) => self.dep(args, target, team),
            Node::Inc(ref lhs, ref rhs) => self.inc(lhs, rhs, team),
            _ => unreachable!(),
        };
        self.memo.insert((id, team), v);
        Ok(v)
    }

    /// `T1 ∪ T2 = T`: with `up[i]` = some superset of `i` satisfies `b`,
    /// look for `T1 ⊨ a` whose complement has such a superset.
    fn split(&mut self, a: Id, b: Id, team: u64) -> Result<bool> {
        self.check_enum(team)?;
        let members: Vec<usize> = bits(team).collect();
        let k = members.len();
        let expand = |i: usize| {
            members
                .iter()
                .enumerate()
                .filter(|(j, _)| i >> j & 1 == 1)
                .fold(0u64, |m, (_, &u)| m | 1 << u)
        };
        let full = (1usize << k) - 1;
        self.budget.tick(1 << k)?;
        let mut up = Vec::with_capacity(1 << k);
        for i in 0..=full {
            up.push(self.eval(b, expand(i))?);
        }
        for j in 0..k {
            for i in 0..=full {
                if i >> j & 1 == 0 && up[i | 1 << j] {
                    up[i] = true;
                }
            }
        }
        for i in 0..=full {
            if up[full ^ i] && self.eval(a, expand(i))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every `X ⊆ population` that meets all sets in `hits`.
    fn for_each_hitting<F>(&mut self, population: u64, hits: &[u64], mut f: F) -> Result<bool>
    where
        F: FnMut(&mut Self, u64) -> Result<bool>,
    {
        self.check_enum(population)?;
        let mut x = population;
        loop {
            self.budget.tick(1)?;
            if hits.iter().all(|&h| x & h != 0) && !f(self, x)? {
                return Ok(false);
            }
            if x == 0 {
                return Ok(true);
            }
            x = (x - 1) & population;
        }
    }

    fn globally(&mut self, a: Id, team: u64) -> Result<bool> {
        if self.shape(a)? != Shape::General {
            // The whole population is one of the updated teams and contains
            // all the others.
            let population = bits(team).fold(0, |m, u| m | self.uni.suffix_mask(u));
            return self.eval(a, population);
        }
        let mut population = 0;
        let mut hits = Antichain::new();
        for u in bits(team) {
            let s = self.uni.suffix_mask(u);
            population |= s;
            hits = antichain_insert(&hits, s);
        }
        self.for_each_hitting(population, &hits, |ev, x| ev.eval(a, x))
    }

    fn until(&mut self, a: Id, b: Id, team: u64) -> Result<bool> {
        let bound = match self.bound {
            UntilBound::Auto if self.arena.downward_closed[a] => 1,
            UntilBound::Auto => 2,
            UntilBound::Fixed(k) => k.max(1),
        };
        let sa = self.shape(a)?;
        if sa != Shape::General {
            let sb = self.shape(b)?;
            return self.until_closed_left(a, b, sa, sb, team, bound);
        }
        let lists: Vec<Rc<Vec<MemberChoice>>> =
            bits(team).map(|u| self.member_choices(u, bound)).collect();
        let mut seen = HashSet::new();
        self.until_search(a, b, &lists, 0, 0, 0, Antichain::new(), &mut seen)
    }

    #[allow(clippy::too_many_arguments)]
    fn until_search(
        &mut self,
        a: Id,
        b: Id,
        lists: &[Rc<Vec<MemberChoice>>],
        i: usize,
        picked: u64,
        below: u64,
        hits: Antichain,
        seen: &mut HashSet<(usize, u64, u64, Antichain)>,
    ) -> Result<bool> {
        if i == lists.len() {
            return Ok(self.eval(b, picked)? && self.obligations_hold(a, below, hits)?);
        }
        if !seen.insert((i, picked, below, hits.clone())) {
            return Ok(false);
        }
        for c in lists[i].iter() {
            self.budget.tick(1)?;
            let found = if c.in_obligation {
                let h = antichain_insert(&hits, c.up_to_min);
                self.until_search(a, b, lists, i + 1, picked | c.picked, below | c.below_max, h, seen)?
            } else {
                self.until_search(a, b, lists, i + 1, picked | c.picked, below, hits.clone(), seen)?
            };
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Until with a left argument closed under subteams. The union `B` of
    /// earlier suffixes over `T'` is itself an obligation team and contains
    /// every other one, so the obligations collapse to `B ⊨ a`, which only
    /// depends on each member's maximum. Members then pick `(P_t, B_t)` with
    /// `B_t = 0` for members outside `T'`.
    fn until_closed_left(
        &mut self,
        a: Id,
        b: Id,
        sa: Shape,
        sb: Shape,
        team: u64,
        bound: usize,
    ) -> Result<bool> {
        let mut lists: Vec<Vec<(u64, u64)>> = Vec::new();
        for u in bits(team) {
            let t = &self.uni.traces[u];
            let limit = t.prefix_len() + bound * t.cycle_len();
            let elem = |i: usize| 1u64 << self.uni.at(u, i);
            let mut opts = HashSet::new();
            for max in 0..limit {
                let below = (0..max).fold(0, |m, i| m | elem(i));
                if matches!(sa, Shape::Flat(ma) if below & !ma != 0) {
                    continue;
                }
                match sb {
                    // `P ⊨ b` iff every picked suffix is in `mb`; picking
                    // only the maximum is the best choice.
                    Shape::Flat(mb) => {
                        if elem(max) & !mb == 0 {
                            opts.insert((0, below));
                        }
                    }
                    Shape::DownClosed => {
                        opts.insert((elem(max), below));
                    }
                    Shape::General => {
                        let earlier = below;
                        let mut z = earlier;
                        loop {
                            opts.insert((elem(max) | z, below));
                            if z == 0 {
                                break;
                            }
                            z = (z - 1) & earlier;
                        }
                    }
                }
            }
            if opts.is_empty() {
                return Ok(false);
            }
            let mut opts: Vec<(u64, u64)> = opts.into_iter().collect();
            opts.sort_unstable();
            lists.push(opts);
        }
        // With flat `a`, obligations were already enforced member by member.
        let track_below = !matches!(sa, Shape::Flat(_));
        let mut reach: HashSet<(u64, u64)> = HashSet::from([(0, 0)]);
        for opts in &lists {
            let mut next = HashSet::with_capacity(reach.len() * opts.len());
            for &(p, bl) in &reach {
                for &(p2, b2) in opts {
                    next.insert((p | p2, if track_below { bl | b2 } else { 0 }));
                }
            }
            self.budget.tick(next.len() as u64)?;
            reach = next;
        }
        let mut reach: Vec<(u64, u64)> = reach.into_iter().collect();
        reach.sort_unstable();
        for (p, bl) in reach {
            let right = matches!(sb, Shape::Flat(_)) || self.eval(b, p)?;
            if right && (bl == 0 || self.eval(a, bl)?) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All teams `T'[f',∞]` with `f' < f` satisfy `a`; vacuous when `T' = ∅`.
    fn obligations_hold(&mut self, a: Id, below: u64, hits: Antichain) -> Result<bool> {
        if hits.is_empty() {
            return Ok(true);
        }
        let key = (a, below, hits);
        if let Some(&v) = self.obligations.get(&key) {
            return Ok(v);
        }
        let v = self.for_each_hitting(below, &key.2, |ev, x| ev.eval(a, x))?;
        self.obligations.insert(key, v);
        Ok(v)
    }

    /// Distinct contributions of member `u` over all finite position sets
    /// inside `[0, prefix + bound·loop)`.
    fn member_choices(&mut self, u: usize, bound: usize) -> Rc<Vec<MemberChoice>> {
        if let Some(c) = self.choices.get(&(u, bound)) {
            return c.clone();
        }
        let t = &self.uni.traces[u];
        let limit = t.prefix_len() + bound * t.cycle_len();
        let elem = |i: usize| 1u64 << self.uni.at(u, i);
        let mut out = HashSet::new();
        for max in 0..limit {
            let below_max = (0..max).fold(0, |m, i| m | elem(i));
            for min in 0..=max {
                let up_to_min = if max == 0 {
                    0
                } else {
                    (0..=min.min(max - 1)).fold(0, |m, i| m | elem(i))
                };
                let ends = elem(min) | elem(max);
                let middle = (min + 1..max).fold(0, |m, i| m | elem(i)) & !ends;
                let mut z = middle;
                loop {
                    out.insert(MemberChoice {
                        picked: ends | z,
                        below_max,
                        up_to_min,
                        in_obligation: max != 0,
                    });
                    if z == 0 {
                        break;
                    }
                    z = (z - 1) & middle;
                }
            }
        }
        let mut list: Vec<MemberChoice> = out.into_iter().collect();
        list.sort_unstable();
        let list = Rc::new(list);
        self.choices.insert((u, bound), list.clone());
        list
    }

    fn values(&mut self, ids: &[Id], team: u64) -> Vec<Vec<bool>> {
        let cols: Vec<Vec<bool>> = ids
            .iter()
            .map(|&id| self.ltl.get(self.arena, self.uni, id).to_vec())
            .collect();
        bits(team)
            .map(|u| cols.iter().map(|c| c[u]).collect())
            .collect()
    }

    fn dep(&mut self, args: &[Id], target: Id, team: u64) -> bool {
        let rows = self.values(args, team);
        let tv = self.values(&[target], team);
        (0..rows.len()).all(|i| (0..rows.len()).all(|j| rows[i] != rows[j] || tv[i] == tv[j]))
    }

    fn inc(&mut self, lhs: &[Id], rhs: &[Id], team: u64) -> bool {
        let l = self.values(lhs, team);
        let r = self.values(rhs, team);
        l.iter().all(|row| r.iter().any(|other| other == row))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_keeps_minimal_sets() {
        let c = antichain_insert(&vec![], 0b110);
        let c = antichain_insert(&c, 0b111);
        assert_eq!(c, vec![0b110]);
        let c = antichain_insert(&c, 0b010);
        assert_eq!(c, vec![0b010]);
        let c = antichain_insert(&c, 0b101);
        assert_eq!(c, vec![0b010, 0b101]);
    }
}
