use proptest::prelude::*;

use super::*;
use crate::formula::parse_formula;
use crate::sample::{all_lassos, strategy};
use crate::team::props;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn lasso(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
    let steps = |v: &[&[&str]]| v.iter().map(|s| props(s.iter().copied())).collect();
    LassoTrace::new(steps(prefix), steps(cycle)).unwrap()
}

fn one_state() -> KripkeStructure {
    parse_kripke("states: s0\ninit: s0\nlabel s0 {p}\nedge s0 s0\n").unwrap()
}

fn two_state() -> KripkeStructure {
    parse_kripke("states: a b\ninit: a\nlabel a {p}\nlabel b {q}\nedge a a\nedge a b\nedge b b\n").unwrap()
}

#[test]
fn model_checking_examples() {
    assert!(mc_ltl(&one_state(), &f("G p")).unwrap().holds);
    let v = mc_ltl(&two_state(), &f("G p")).unwrap();
    assert!(!v.holds);
    let w = v.witness_trace().unwrap();
    assert!(two_state().generates(w));
    assert!(!eval_ltl(w, &f("G p")).unwrap());
    assert_eq!(w.cycle(), &[props(["q"])]);
    assert!(w.prefix().iter().all(|s| *s == props(["p"])) && !w.prefix().is_empty());
    assert!(mc_ltl(&two_state(), &f("G (p | q)")).unwrap().holds);
}

#[test]
fn satisfiability_examples() {
    let v = sat_ltl(&f("p & X !p")).unwrap();
    assert!(v.holds);
    assert!(eval_ltl(v.witness_trace().unwrap(), &f("p & X !p")).unwrap());
    assert!(!sat_ltl(&f("p & !p")).unwrap().holds);
    assert!(!sat_ltl(&f("G p & (top U !p)")).unwrap().holds);
}

#[test]
fn non_ltl_input_is_rejected() {
    assert!(matches!(mc_ltl(&one_state(), &f("E p")), Err(Error::Fragment(_))));
    assert!(matches!(sat_ltl(&f("p or q")), Err(Error::Fragment(_))));
}

#[test]
fn membership_agrees_on_longer_lassos() {
    let lassos = all_lassos(&["p"], 4);
    for s in ["G (top U p)", "top U G !p", "p U (X !p & G (p | X p))", "G (p | X X p)"] {
        let a = ltl_to_buchi(&f(s)).unwrap();
        for t in &lassos {
            assert_eq!(a.accepts(t).unwrap(), eval_ltl(t, &f(s)).unwrap(), "{s} on {t}");
        }
    }
}

#[test]
fn witnesses_are_reproducible() {
    let k = two_state();
    let a = mc_ltl(&k, &f("G p | G q")).unwrap();
    let b = mc_ltl(&k, &f("G p | G q")).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.witness_trace(), Some(&lasso(&[&["p"]], &[&["q"]])));
}

fn all_edges(n: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    proptest::collection::vec((0..n, 0..n), 1..=2 * n).prop_map(move |mut e| {
        for s in 0..n {
            e.push((s, (s + 1) % n));
        }
        e
    })
}

fn kripke() -> impl Strategy<Value = KripkeStructure> {
    (1usize..=4).prop_flat_map(|n| {
        (
            proptest::collection::vec(strategy::step(&["p", "q"]), n),
            all_edges(n),
        )
            .prop_map(move |(labels, edges)| {
                KripkeStructure::new((0..n).map(|i| format!("s{i}")).collect(), labels, edges, 0).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn automaton_membership_matches_the_evaluator(phi in strategy::ltl_formula(&["p", "q"], 4)) {
        let a = ltl_to_buchi(&phi).unwrap();
        for t in all_lassos(&["p", "q"], 3) {
            prop_assert_eq!(a.accepts(&t).unwrap(), eval_ltl(&t, &phi).unwrap(), "{} on {}", phi, t);
        }
    }

    #[test]
    fn model_checking_agrees_with_simple_lassos(k in kripke(), phi in strategy::ltl_formula(&["p", "q"], 4)) {
        let v = mc_ltl(&k, &phi).unwrap();
        let lassos = k.simple_lassos(4);
        if v.holds {
            for t in &lassos {
                prop_assert!(eval_ltl(t, &phi).unwrap(), "{} refutes {}", t, phi);
            }
        } else {
            let w = v.witness_trace().unwrap();
            prop_assert!(k.generates(w));
            prop_assert!(eval_ltl(w, &phi.dual().unwrap()).unwrap());
        }
    }

    #[test]
    fn satisfiability_witnesses_are_models(phi in strategy::ltl_formula(&["p", "q"], 4)) {
        let v = sat_ltl(&phi).unwrap();
        let any_short = all_lassos(&["p", "q"], 3).iter().any(|t| eval_ltl(t, &phi).unwrap());
        if any_short {
            prop_assert!(v.holds);
        }
        if let Some(w) = v.witness_trace() {
            prop_assert!(eval_ltl(w, &phi).unwrap());
        }
    }
}
