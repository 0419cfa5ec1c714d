//! Nested depth-first search for accepting lassos in a Büchi graph.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// An implicit graph whose edges read a letter.
pub(crate) trait BuchiGraph {
    type Node: Clone + Eq + Hash;
    type Letter: Clone;

    fn initial(&self) -> Vec<Self::Node>;
    /// In a fixed order, so searches are reproducible.
    fn successors(&self, n: &Self::Node) -> Vec<(Self::Letter, Self::Node)>;
    fn accepting(&self, n: &Self::Node) -> bool;
}

/// Letters along an accepting lasso: `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LetterLasso<L> {
    pub stem: Vec<L>,
    pub cycle: Vec<L>,
}

struct Frame<N, L> {
    node: N,
    succ: Vec<(L, N)>,
    next: usize,
}

/// Classic two-phase search: the inner search starts from accepting nodes in
/// post-order of the outer one and looks for a path back to its seed. The
/// lasso through the seed found this way is then rebuilt from shortest paths.
pub(crate) fn find_accepting_lasso<G: BuchiGraph>(
    g: &G,
    max_nodes: usize,
) -> Result<Option<LetterLasso<G::Letter>>> {
    let mut outer_seen: HashSet<G::Node> = HashSet::new();
    let mut inner_seen: HashSet<G::Node> = HashSet::new();
    let too_big = || Error::ResourceLimit(format!("search graph exceeds {max_nodes} nodes"));

    for root in g.initial() {
        if !outer_seen.insert(root.clone()) {
            continue;
        }
        let mut stack = vec![Frame {
            succ: g.successors(&root),
            node: root,
            next: 0,
        }];
        while let Some(top) = stack.last_mut() {
            if top.next < top.succ.len() {
                let n = top.succ[top.next].1.clone();
                top.next += 1;
                if outer_seen.insert(n.clone()) {
                    if outer_seen.len() > max_nodes {
                        return Err(too_big());
                    }
                    stack.push(Frame {
                        succ: g.successors(&n),
                        node: n,
                        next: 0,
                    });
                }
                continue;
            }
            let seed = top.node.clone();
            if g.accepting(&seed) && inner(g, &seed, &mut inner_seen) {
                let stem = shortest(g, g.initial(), &seed, false).expect("seed is reachable");
                let cycle = shortest(g, vec![seed.clone()], &seed, true).expect("seed lies on a cycle");
                return Ok(Some(LetterLasso { stem, cycle }));
            }
            stack.pop();
        }
    }
    Ok(None)
}

fn inner<G: BuchiGraph>(g: &G, seed: &G::Node, seen: &mut HashSet<G::Node>) -> bool {
    let mut stack = vec![Frame {
        succ: g.successors(seed),
        node: seed.clone(),
        next: 0,
    }];
    while let Some(top) = stack.last_mut() {
        if top.next >= top.succ.len() {
            stack.pop();
            continue;
        }
        let n = top.succ[top.next].1.clone();
        top.next += 1;
        if n == *seed {
            return true;
        }
        if seen.insert(n.clone()) {
            stack.push(Frame {
                succ: g.successors(&n),
                node: n,
                next: 0,
            });
        }
    }
    false
}

/// Letters of a shortest path from `sources` to `target`; with `nonempty`
/// the path takes at least one edge.
fn shortest<G: BuchiGraph>(g: &G, sources: Vec<G::Node>, target: &G::Node, nonempty: bool) -> Option<Vec<G::Letter>> {
    // Predecessor and the letter read from it; `None` marks a source.
    let mut parent = HashMap::<G::Node, Option<(G::Node, G::Letter)>>::new();
    let mut queue = VecDeque::new();
    for s in sources {
        if !nonempty && s == *target {
            return Some(vec![]);
        }
        if parent.insert(s.clone(), None).is_none() {
            queue.push_back(s);
        }
    }
    while let Some(n) = queue.pop_front() {
        for (letter, m) in g.successors(&n) {
            if m == *target {
                let mut out = vec![letter];
                let mut cur = n.clone();
                while let Some(Some((p, l))) = parent.get(&cur) {
                    out.push(l.clone());
                    cur = p.clone();
                }
                out.reverse();
                return Some(out);
            }
            if !parent.contains_key(&m) {
                parent.insert(m.clone(), Some((n.clone(), letter)));
                queue.push_back(m);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit graph: `edges[n]` lists `(letter, target)`.
    struct Explicit {
        edges: Vec<Vec<(char, usize)>>,
        accepting: Vec<bool>,
    }

    impl BuchiGraph for Explicit {
        type Node = usize;
        type Letter = char;
        fn initial(&self) -> Vec<usize> {
            vec![0]
        }
        fn successors(&self, n: &usize) -> Vec<(char, usize)> {
            self.edges[*n].clone()
        }
        fn accepting(&self, n: &usize) -> bool {
            self.accepting[*n]
        }
    }

    #[test]
    fn finds_a_cycle_through_an_accepting_node() {
        let g = Explicit {
            edges: vec![vec![('a', 1)], vec![('b', 2)], vec![('c', 1)]],
            accepting: vec![false, false, true],
        };
        let l = find_accepting_lasso(&g, 100).unwrap().unwrap();
        assert_eq!(l.stem, vec!['a', 'b']);
        assert_eq!(l.cycle, vec!['c', 'b']);
    }

    #[test]
    fn accepting_node_off_every_cycle() {
        let g = Explicit {
            edges: vec![vec![('a', 1)], vec![('b', 2)], vec![('c', 2)]],
            accepting: vec![false, true, false],
        };
        assert_eq!(find_accepting_lasso(&g, 100).unwrap(), None);
    }

    #[test]
    fn inner_search_shares_its_visited_set_soundly() {
        // Both seeds reach node 3, which leads back to 1.
        let g = Explicit {
            edges: vec![vec![('a', 1)], vec![('b', 2), ('x', 3)], vec![('c', 3)], vec![('d', 1)]],
            accepting: vec![false, true, true, false],
        };
        let l = find_accepting_lasso(&g, 100).unwrap().unwrap();
        assert!(!l.cycle.is_empty());
    }
}
