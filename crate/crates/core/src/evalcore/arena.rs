//! Hash-consed formula DAG over primitive connectives.

use std::collections::HashMap;

use crate::formula::Formula;

pub(crate) type Id = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Prop(usize),
    NegProp(usize),
    Top,
    Bot,
    And(Id, Id),
    Or(Id, Id),
    BOr(Id, Id),
    BNeg(Id),
    Exists(Id),
    Next(Id),
    Globally(Id),
    Until(Id, Id),
    Dep(Vec<Id>, Id),
    Inc(Vec<Id>, Vec<Id>),
}

#[derive(Debug, Default)]
pub(crate) struct Arena {
    pub nodes: Vec<Node>,
    pub props: Vec<String>,
    prop_index: HashMap<String, usize>,
    index: HashMap<Node, Id>,
    /// No `~`, `E` or inclusion atom below: satisfaction is closed under subteams.
    pub downward_closed: Vec<bool>,
    pub ltl: Vec<bool>,
}

impl Arena {
    pub fn new() -> Arena {
        Arena::default()
    }

    pub fn prop_id(&mut self, name: &str) -> usize {
        if let Some(&i) = self.prop_index.get(name) {
            return i;
        }
        self.props.push(name.to_string());
        self.prop_index.insert(name.to_string(), self.props.len() - 1);
        self.props.len() - 1
    }

    fn intern(&mut self, node: Node) -> Id {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let kids = children(&node);
        let dc = kids.iter().all(|&k| self.downward_closed[k])
            && !matches!(node, Node::BNeg(_) | Node::Exists(_) | Node::Inc(..));
        let ltl = kids.iter().all(|&k| self.ltl[k])
            && !matches!(
                node,
                Node::BOr(..) | Node::BNeg(_) | Node::Exists(_) | Node::Dep(..) | Node::Inc(..)
            );
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.downward_closed.push(dc);
        self.ltl.push(ltl);
        self.index.insert(node, id);
        id
    }

    /// Adds a formula, desugaring derived operators on the way.
    pub fn add(&mut self, f: &Formula) -> Id {
        use Formula as F;
        let node = match f {
            F::Prop(p) => Node::Prop(self.prop_id(p)),
            F::NegProp(p) => Node::NegProp(self.prop_id(p)),
            F::Top => Node::Top,
            F::Bot => Node::Bot,
            F::And(a, b) => Node::And(self.add(a), self.add(b)),
            F::Or(a, b) => Node::Or(self.add(a), self.add(b)),
            F::BOr(a, b) => Node::BOr(self.add(a), self.add(b)),
            F::BNeg(a) => Node::BNeg(self.add(a)),
            F::Exists(a) => Node::Exists(self.add(a)),
            F::Next(a) => Node::Next(self.add(a)),
            F::Globally(a) => Node::Globally(self.add(a)),
            F::Until(a, b) => Node::Until(self.add(a), self.add(b)),
            F::DepAtom(args, target) => {
                let args = args.iter().map(|a| self.add(a)).collect();
                Node::Dep(args, self.add(target))
            }
            F::IncAtom(lhs, rhs) => {
                let lhs = lhs.iter().map(|a| self.add(a)).collect();
                Node::Inc(lhs, rhs.iter().map(|a| self.add(a)).collect())
            }
            F::Finally(_)
            | F::WeakUntil1(..)
            | F::WeakUntil2(..)
            | F::Release1(..)
            | F::Release2(..)
            | F::StrongRelease(..) => return self.add(&f.desugar()),
        };
        self.intern(node)
    }

    pub fn to_formula(&self, id: Id) -> Formula {
        let f = |i: Id| self.to_formula(i);
        match &self.nodes[id] {
            Node::Prop(p) => Formula::prop(self.props[*p].clone()),
            Node::NegProp(p) => Formula::neg_prop(self.props[*p].clone()),
            Node::Top => Formula::Top,
            Node::Bot => Formula::Bot,
            Node::And(a, b) => Formula::and(f(*a), f(*b)),
            Node::Or(a, b) => Formula::or(f(*a), f(*b)),
            Node::BOr(a, b) => Formula::bor(f(*a), f(*b)),
            Node::BNeg(a) => Formula::bneg(f(*a)),
            Node::Exists(a) => Formula::exists(f(*a)),
            Node::Next(a) => Formula::next(f(*a)),
            Node::Globally(a) => Formula::globally(f(*a)),
            Node::Until(a, b) => Formula::until(f(*a), f(*b)),
            Node::Dep(args, t) => Formula::DepAtom(args.iter().map(|&i| f(i)).collect(), Box::new(f(*t))),
            Node::Inc(l, r) => Formula::IncAtom(l.iter().map(|&i| f(i)).collect(), r.iter().map(|&i| f(i)).collect()),
        }
    }
}

pub(crate) fn children(node: &Node) -> Vec<Id> {
    match node {
        Node::Prop(_) | Node::NegProp(_) | Node::Top | Node::Bot => vec![],
        Node::BNeg(a) | Node::Exists(a) | Node::Next(a) | Node::Globally(a) => vec![*a],
        Node::And(a, b) | Node::Or(a, b) | Node::BOr(a, b) | Node::Until(a, b) => vec![*a, *b],
        Node::Dep(args, t) => args.iter().copied().chain([*t]).collect(),
        Node::Inc(l, r) => l.iter().chain(r).copied().collect(),
    }
}
