//! TeamLTL(~, ⊎) formulas: AST, parser, printer, desugaring, LTL duals and
//! fragment classification.

pub(crate) mod syntax;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use syntax::{BinaryOp, Syntax, SyntaxKind, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(String),
    NegProp(String),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    /// Splitting disjunction `|`.
    Or(Box<Formula>, Box<Formula>),
    /// Boolean disjunction `or`.
    BOr(Box<Formula>, Box<Formula>),
    /// Boolean negation `~`.
    BNeg(Box<Formula>),
    /// `E β`: some trace of the team satisfies the LTL formula β.
    Exists(Box<Formula>),
    Next(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    WeakUntil1(Box<Formula>, Box<Formula>),
    WeakUntil2(Box<Formula>, Box<Formula>),
    Release1(Box<Formula>, Box<Formula>),
    Release2(Box<Formula>, Box<Formula>),
    /// `ψ M φ`, i.e. `φ U (φ & ψ)`.
    StrongRelease(Box<Formula>, Box<Formula>),
    /// `dep(φ1, …, φn, ψ)`: the last argument is the dependent formula.
    DepAtom(Vec<Formula>, Box<Formula>),
    IncAtom(Vec<Formula>, Vec<Formula>),
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }
    pub fn neg_prop(name: impl Into<String>) -> Formula {
        Formula::NegProp(name.into())
    }
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(bx(l), bx(r))
    }
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(bx(l), bx(r))
    }
    pub fn bor(l: Formula, r: Formula) -> Formula {
        Formula::BOr(bx(l), bx(r))
    }
    pub fn bneg(f: Formula) -> Formula {
        Formula::BNeg(bx(f))
    }
    pub fn exists(f: Formula) -> Formula {
        Formula::Exists(bx(f))
    }
    pub fn next(f: Formula) -> Formula {
        Formula::Next(bx(f))
    }
    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(bx(f))
    }
    pub fn until(l: Formula, r: Formula) -> Formula {
        Formula::Until(bx(l), bx(r))
    }
    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(bx(f))
    }
    pub fn strong_release(l: Formula, r: Formula) -> Formula {
        Formula::StrongRelease(bx(l), bx(r))
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Prop(_) | NegProp(_) | Top | Bot => vec![],
            BNeg(a) | Exists(a) | Next(a) | Globally(a) | Finally(a) => vec![a],
            And(a, b)
            | Or(a, b)
            | BOr(a, b)
            | Until(a, b)
            | WeakUntil1(a, b)
            | WeakUntil2(a, b)
            | Release1(a, b)
            | Release2(a, b)
            | StrongRelease(a, b) => vec![a, b],
            DepAtom(args, target) => args.iter().chain(std::iter::once(&**target)).collect(),
            IncAtom(lhs, rhs) => lhs.iter().chain(rhs.iter()).collect(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Prop(p) | Formula::NegProp(p) => {
                out.insert(p.clone());
            }
            _ => self.children().into_iter().for_each(|c| c.collect_props(out)),
        }
    }

    fn any_node(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    /// No `or`, `~`, `E` or team atoms anywhere (derived operators allowed).
    pub fn is_ltl(&self) -> bool {
        !self.any_node(&|f| {
            matches!(
                f,
                Formula::BOr(..)
                    | Formula::BNeg(_)
                    | Formula::Exists(_)
                    | Formula::DepAtom(..)
                    | Formula::IncAtom(..)
                    | Formula::WeakUntil2(..)
                    | Formula::Release2(..)
            )
        })
    }

    /// Member of TeamLTL(⊎): no `~`, no `E`, no team atoms.
    pub fn is_bor_fragment(&self) -> bool {
        !self.any_node(&|f| {
            matches!(
                f,
                Formula::BNeg(_) | Formula::Exists(_) | Formula::DepAtom(..) | Formula::IncAtom(..)
            )
        })
    }

    /// Rewrites F, W1, W2, R1, R2 and M into the primitive connectives.
    pub fn desugar(&self) -> Formula {
        use Formula::*;
        let d = |f: &Formula| f.desugar();
        match self {
            Prop(_) | NegProp(_) | Top | Bot => self.clone(),
            And(a, b) => Formula::and(d(a), d(b)),
            Or(a, b) => Formula::or(d(a), d(b)),
            BOr(a, b) => Formula::bor(d(a), d(b)),
            BNeg(a) => Formula::bneg(d(a)),
            Exists(a) => Formula::exists(d(a)),
            Next(a) => Formula::next(d(a)),
            Globally(a) => Formula::globally(d(a)),
            Until(a, b) => Formula::until(d(a), d(b)),
            Finally(a) => Formula::until(Top, d(a)),
            WeakUntil1(a, b) => Formula::or(Formula::globally(d(a)), Formula::until(d(a), d(b))),
            WeakUntil2(a, b) => Formula::bor(Formula::globally(d(a)), Formula::until(d(a), d(b))),
            Release1(a, b) => Formula::until(
                d(b),
                Formula::or(Formula::and(d(b), d(a)), Formula::globally(d(b))),
            ),
            Release2(a, b) => Formula::until(
                d(b),
                Formula::bor(Formula::and(d(b), d(a)), Formula::globally(d(b))),
            ),
            StrongRelease(a, b) => Formula::until(d(b), Formula::and(d(b), d(a))),
            DepAtom(args, target) => DepAtom(args.iter().map(d).collect(), bx(d(target))),
            IncAtom(lhs, rhs) => IncAtom(lhs.iter().map(d).collect(), rhs.iter().map(d).collect()),
        }
    }

    /// Negation normal form of the classical negation of an LTL formula.
    pub fn dual(&self) -> Result<Formula> {
        if !self.is_ltl() {
            return Err(Error::fragment(format!("dual is defined for LTL formulas only: {self}")));
        }
        Ok(self.desugar().dual_nnf())
    }

    fn dual_nnf(&self) -> Formula {
        use Formula::*;
        match self {
            Prop(p) => NegProp(p.clone()),
            NegProp(p) => Prop(p.clone()),
            Top => Bot,
            Bot => Top,
            And(a, b) => Formula::or(a.dual_nnf(), b.dual_nnf()),
            Or(a, b) => Formula::and(a.dual_nnf(), b.dual_nnf()),
            Next(a) => Formula::next(a.dual_nnf()),
            Globally(a) => Formula::until(Top, a.dual_nnf()),
            Until(a, b) => {
                let (na, nb) = (a.dual_nnf(), b.dual_nnf());
                Formula::or(
                    Formula::globally(nb.clone()),
                    Formula::until(nb.clone(), Formula::and(nb, na)),
                )
            }
            other => unreachable!("dual_nnf on non-primitive LTL node {other:?}"),
        }
    }

    pub fn classify(&self) -> FragmentInfo {
        let f = self.desugar();
        let mut info = FragmentInfo {
            is_ltl: f.is_ltl(),
            is_left_flat: true,
            is_left_dc: true,
            bor_count: 0,
            has_bneg: false,
            has_atoms: false,
            size: f.size(),
            depth: f.depth(),
        };
        f.classify_into(&mut info);
        info
    }

    fn classify_into(&self, info: &mut FragmentInfo) {
        match self {
            Formula::Globally(a) | Formula::Until(a, _) => {
                info.is_left_flat &= a.is_ltl();
                info.is_left_dc &= a.is_bor_fragment();
            }
            Formula::BOr(..) => info.bor_count += 1,
            Formula::BNeg(_) | Formula::Exists(_) => info.has_bneg = true,
            Formula::DepAtom(..) | Formula::IncAtom(..) => info.has_atoms = true,
            _ => {}
        }
        self.children().into_iter().for_each(|c| c.classify_into(info));
    }

    fn precedence(&self) -> u8 {
        use Formula::*;
        match self {
            BOr(..) => 0,
            Or(..) => 1,
            And(..) => 2,
            Until(..) | WeakUntil1(..) | WeakUntil2(..) | Release1(..) | Release2(..)
            | StrongRelease(..) => 3,
            BNeg(_) | Exists(_) | Next(_) | Globally(_) | Finally(_) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        use Formula::*;
        if self.precedence() < min {
            write!(out, "(")?;
            self.write_at(out, 0)?;
            return write!(out, ")");
        }
        let binary = |out: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, l: u8, r: u8| {
            a.write_at(out, l)?;
            write!(out, " {op} ")?;
            b.write_at(out, r)
        };
        let unary = |out: &mut fmt::Formatter<'_>, op: &str, a: &Formula| {
            write!(out, "{op}")?;
            a.write_at(out, 4)
        };
        match self {
            Prop(p) => write!(out, "{p}"),
            NegProp(p) => write!(out, "!{p}"),
            Top => write!(out, "top"),
            Bot => write!(out, "bot"),
            BOr(a, b) => binary(out, a, "or", b, 0, 1),
            Or(a, b) => binary(out, a, "|", b, 1, 2),
            And(a, b) => binary(out, a, "&", b, 2, 3),
            Until(a, b) => binary(out, a, "U", b, 4, 3),
            WeakUntil1(a, b) => binary(out, a, "W1", b, 4, 3),
            WeakUntil2(a, b) => binary(out, a, "W2", b, 4, 3),
            Release1(a, b) => binary(out, a, "R1", b, 4, 3),
            Release2(a, b) => binary(out, a, "R2", b, 4, 3),
            StrongRelease(a, b) => binary(out, a, "M", b, 4, 3),
            BNeg(a) => unary(out, "~", a),
            Exists(a) => unary(out, "E ", a),
            Next(a) => unary(out, "X ", a),
            Globally(a) => unary(out, "G ", a),
            Finally(a) => unary(out, "F ", a),
            DepAtom(args, target) => {
                write!(out, "dep(")?;
                for a in args {
                    a.write_at(out, 0)?;
                    write!(out, ", ")?;
                }
                target.write_at(out, 0)?;
                write!(out, ")")
            }
            IncAtom(lhs, rhs) => {
                write!(out, "inc(")?;
                write_list(out, lhs)?;
                write!(out, " ; ")?;
                write_list(out, rhs)?;
                write!(out, ")")
            }
        }
    }
}

fn write_list(out: &mut fmt::Formatter<'_>, items: &[Formula]) -> fmt::Result {
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            write!(out, ", ")?;
        }
        a.write_at(out, 0)?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FragmentInfo {
    pub is_ltl: bool,
    pub is_left_flat: bool,
    pub is_left_dc: bool,
    pub bor_count: usize,
    pub has_bneg: bool,
    pub has_atoms: bool,
    pub size: usize,
    pub depth: usize,
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    from_syntax(&syntax::parse(text)?)
}

fn from_syntax(s: &Syntax) -> Result<Formula> {
    use BinaryOp as B;
    use UnaryOp as U;
    Ok(match &s.kind {
        SyntaxKind::Prop(p) => Formula::Prop(p.clone()),
        SyntaxKind::NegProp(p) => Formula::NegProp(p.clone()),
        SyntaxKind::Top => Formula::Top,
        SyntaxKind::Bot => Formula::Bot,
        SyntaxKind::Unary(op, a) => {
            let a = bx(from_syntax(a)?);
            match op {
                U::Next => Formula::Next(a),
                U::Globally => Formula::Globally(a),
                U::Finally => Formula::Finally(a),
                U::BNeg => Formula::BNeg(a),
                U::Exists => {
                    if !a.is_ltl() {
                        return Err(s.error("the argument of E must be an LTL formula"));
                    }
                    Formula::Exists(a)
                }
                U::NextE | U::NextA | U::GlobE | U::GlobA => {
                    return Err(s.error("path-quantified operators belong to tef formulas"))
                }
            }
        }
        SyntaxKind::Binary(op, a, b) => {
            let (a, b) = (bx(from_syntax(a)?), bx(from_syntax(b)?));
            match op {
                B::BOr => Formula::BOr(a, b),
                B::Or => Formula::Or(a, b),
                B::And => Formula::And(a, b),
                B::Until => Formula::Until(a, b),
                B::WeakUntil1 => Formula::WeakUntil1(a, b),
                B::WeakUntil2 => Formula::WeakUntil2(a, b),
                B::Release1 => Formula::Release1(a, b),
                B::Release2 => Formula::Release2(a, b),
                B::StrongRelease => Formula::StrongRelease(a, b),
                B::UntilE | B::UntilA | B::StrongReleaseE => {
                    return Err(s.error("path-quantified operators belong to tef formulas"))
                }
            }
        }
        SyntaxKind::Dep(args) => {
            let mut args = atom_args(s, args)?;
            let target = args.pop().expect("parser yields at least one argument");
            Formula::DepAtom(args, bx(target))
        }
        SyntaxKind::Inc(lhs, rhs) => Formula::IncAtom(atom_args(s, lhs)?, atom_args(s, rhs)?),
    })
}

fn atom_args(s: &Syntax, args: &[Syntax]) -> Result<Vec<Formula>> {
    let out = args.iter().map(from_syntax).collect::<Result<Vec<_>>>()?;
    if out.iter().any(|f| !f.is_ltl()) {
        return Err(s.error("team atom arguments must be LTL formulas"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalcore::eval_ltl;
    use crate::sample;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parses_boolean_disjunction_under_globally() {
        assert_eq!(
            p("G (p or q)"),
            Formula::globally(Formula::bor(Formula::prop("p"), Formula::prop("q")))
        );
    }

    #[test]
    fn parses_until_with_nested_next() {
        assert_eq!(
            p("p U (q & X !r)"),
            Formula::until(
                Formula::prop("p"),
                Formula::and(Formula::prop("q"), Formula::next(Formula::neg_prop("r")))
            )
        );
    }

    #[test]
    fn parses_inclusion_atom() {
        assert_eq!(
            p("inc(o1,c ; o1,!c)"),
            Formula::IncAtom(
                vec![Formula::prop("o1"), Formula::prop("c")],
                vec![Formula::prop("o1"), Formula::neg_prop("c")]
            )
        );
    }

    #[test]
    fn inclusion_arity_mismatch_is_rejected() {
        let err = parse_formula("inc(a, b ; c)").unwrap_err();
        assert!(err.to_string().contains("arity"), "{err}");
    }

    #[test]
    fn dependence_atom_keeps_last_argument_as_target() {
        assert_eq!(
            p("dep(a, X b, c)"),
            Formula::DepAtom(
                vec![Formula::prop("a"), Formula::next(Formula::prop("b"))],
                bx(Formula::prop("c"))
            )
        );
    }

    #[test]
    fn precedence_levels() {
        assert_eq!(p("a or b | c & d U e"), {
            let u = Formula::until(Formula::prop("d"), Formula::prop("e"));
            let and = Formula::and(Formula::prop("c"), u);
            Formula::bor(Formula::prop("a"), Formula::or(Formula::prop("b"), and))
        });
        assert_eq!(
            p("X p U q"),
            Formula::until(Formula::next(Formula::prop("p")), Formula::prop("q"))
        );
        assert_eq!(
            p("p U q U r"),
            Formula::until(Formula::prop("p"), Formula::until(Formula::prop("q"), Formula::prop("r")))
        );
    }

    #[test]
    fn rejects_non_ltl_exists_argument() {
        assert!(parse_formula("E (p or q)").is_err());
        assert!(parse_formula("dep(~p, q)").is_err());
        assert!(parse_formula("p UE q").is_err());
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(p("F p").desugar(), Formula::until(Formula::Top, Formula::prop("p")));
        assert_eq!(
            p("p W1 q").desugar(),
            Formula::or(
                Formula::globally(Formula::prop("p")),
                Formula::until(Formula::prop("p"), Formula::prop("q"))
            )
        );
        assert_eq!(
            p("q M p").desugar(),
            Formula::until(
                Formula::prop("p"),
                Formula::and(Formula::prop("p"), Formula::prop("q"))
            )
        );
        assert_eq!(p("p W2 q").desugar(), p("G p or p U q"));
        assert_eq!(p("p R1 q").desugar(), p("q U (q & p | G q)"));
        assert_eq!(p("p R2 q").desugar(), p("q U (q & p or G q)"));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(p("p").dual().unwrap(), p("!p"));
        assert_eq!(p("G p").dual().unwrap(), p("top U !p"));
        assert_eq!(p("p U q").dual().unwrap(), p("G !q | !q U (!q & !p)"));
        assert!(p("p or q").dual().is_err());
    }

    #[test]
    fn dual_of_until_complements_on_all_small_lassos() {
        let f = p("p U q");
        let d = f.dual().unwrap();
        let lassos = sample::all_lassos(&["p", "q"], 4);
        assert!(lassos.len() > 100);
        for t in &lassos {
            assert_ne!(eval_ltl(t, &f).unwrap(), eval_ltl(t, &d).unwrap(), "{t}");
        }
    }

    #[test]
    fn classify_examples() {
        let info = p("G(p or q)").classify();
        assert!(!info.is_left_flat && info.is_left_dc && !info.is_ltl);
        assert_eq!(info.bor_count, 1);
        assert!(p("(G p) or q").classify().is_left_flat);
        assert!(!p("G(E p1 or E p2)").classify().is_left_dc);
        let info = p("p W2 q").classify();
        assert_eq!(info.bor_count, 1);
        assert_eq!(info.size, p("G p or p U q").size());
        let info = p("dep(a, b) & ~p").classify();
        assert!(info.has_atoms && info.has_bneg && !info.is_ltl);
    }

    #[test]
    fn prints_readably() {
        assert_eq!(p("G (p or q)").to_string(), "G (p or q)");
        assert_eq!(p("(p U q) U r").to_string(), "(p U q) U r");
        assert_eq!(p("inc(a,b;c,!d)").to_string(), "inc(a, b ; c, !d)");
        assert_eq!(p("~ ~ E p").to_string(), "~~E p");
    }

    proptest! {
        #[test]
        fn parse_print_round_trip(f in sample::strategy::any_formula(4)) {
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
        }

        #[test]
        fn desugar_is_idempotent(f in sample::strategy::any_formula(4)) {
            let once = f.desugar();
            prop_assert_eq!(once.desugar(), once);
        }

        #[test]
        fn desugared_formulas_use_primitive_connectives(f in sample::strategy::any_formula(4)) {
            let d = f.desugar();
            prop_assert!(!d.any_node(&|g| matches!(g,
                Formula::Finally(_) | Formula::WeakUntil1(..) | Formula::WeakUntil2(..)
                | Formula::Release1(..) | Formula::Release2(..) | Formula::StrongRelease(..))));
        }

        #[test]
        fn dual_is_an_involution(f in sample::strategy::ltl_formula(&["p", "q"], 4)) {
            let dd = f.dual().unwrap().dual().unwrap();
            for t in sample::all_lassos(&["p", "q"], 3) {
                prop_assert_eq!(eval_ltl(&t, &dd).unwrap(), eval_ltl(&t, &f).unwrap());
            }
        }

        #[test]
        fn dual_complements(f in sample::strategy::ltl_formula(&["p", "q"], 4)) {
            let d = f.dual().unwrap();
            for t in sample::all_lassos(&["p", "q"], 3) {
                prop_assert_ne!(eval_ltl(&t, &d).unwrap(), eval_ltl(&t, &f).unwrap());
            }
        }

        #[test]
        fn classify_is_consistent(f in sample::strategy::any_formula(4)) {
            let info = f.classify();
            let d = f.desugar();
            prop_assert!(info.size >= 1);
            prop_assert_eq!(info.size, d.size());
            prop_assert!(!info.is_ltl || info.is_left_flat);
            prop_assert!(!info.is_left_flat || info.is_left_dc);
            if info.has_bneg || info.has_atoms {
                prop_assert!(!info.is_ltl);
            }
        }
    }
}
