//! Path-quantified team logic over time evaluation functions (tefs) on
//! finite multiteams, and its translation to and from left-flat TeamLTL
//! with `or`.
//!
//! A tef gives every entry its own clock; at each global step a nonempty set
//! of entries advances by one position. Configurations record the local
//! positions, folded into the canonical range of each trace, so the tefs of
//! a multiteam are exactly the infinite paths of a finite graph.

mod eval;

use std::fmt;

pub use eval::{eval_tef, eval_tef_with, ConfigGraph, Configuration};

use crate::error::{Error, Result};
use crate::formula::syntax::{self, BinaryOp, Syntax, SyntaxKind, UnaryOp};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TefFormula {
    Prop(String),
    NegProp(String),
    Top,
    Bot,
    And(Box<TefFormula>, Box<TefFormula>),
    /// Splitting disjunction.
    Or(Box<TefFormula>, Box<TefFormula>),
    /// Boolean disjunction.
    BOr(Box<TefFormula>, Box<TefFormula>),
    /// Every entry advances by one.
    Next(Box<TefFormula>),
    NextE(Box<TefFormula>),
    NextA(Box<TefFormula>),
    GlobE(Box<TefFormula>),
    GlobA(Box<TefFormula>),
    UntilE(Box<TefFormula>, Box<TefFormula>),
    UntilA(Box<TefFormula>, Box<TefFormula>),
    /// `ψ ME φ` abbreviates `φ UE (φ & ψ)`.
    StrongReleaseE(Box<TefFormula>, Box<TefFormula>),
}

impl TefFormula {
    pub fn children(&self) -> Vec<&TefFormula> {
        use TefFormula::*;
        match self {
            Prop(_) | NegProp(_) | Top | Bot => vec![],
            Next(a) | NextE(a) | NextA(a) | GlobE(a) | GlobA(a) => vec![a],
            And(a, b) | Or(a, b) | BOr(a, b) | UntilE(a, b) | UntilA(a, b) | StrongReleaseE(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(TefFormula::depth).max().unwrap_or(0)
    }

    /// No `or` anywhere.
    pub fn is_flat(&self) -> bool {
        !matches!(self, TefFormula::BOr(..)) && self.children().into_iter().all(TefFormula::is_flat)
    }

    fn precedence(&self) -> u8 {
        use TefFormula::*;
        match self {
            BOr(..) => 0,
            Or(..) => 1,
            And(..) => 2,
            UntilE(..) | UntilA(..) | StrongReleaseE(..) => 3,
            Next(_) | NextE(_) | NextA(_) | GlobE(_) | GlobA(_) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        use TefFormula::*;
        if self.precedence() < min {
            write!(out, "(")?;
            self.write_at(out, 0)?;
            return write!(out, ")");
        }
        let binary = |out: &mut fmt::Formatter<'_>, a: &TefFormula, op: &str, b: &TefFormula, l: u8, r: u8| {
            a.write_at(out, l)?;
            write!(out, " {op} ")?;
            b.write_at(out, r)
        };
        let unary = |out: &mut fmt::Formatter<'_>, op: &str, a: &TefFormula| {
            write!(out, "{op} ")?;
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
            UntilE(a, b) => binary(out, a, "UE", b, 4, 3),
            UntilA(a, b) => binary(out, a, "UA", b, 4, 3),
            StrongReleaseE(a, b) => binary(out, a, "ME", b, 4, 3),
            Next(a) => unary(out, "X", a),
            NextE(a) => unary(out, "XE", a),
            NextA(a) => unary(out, "XA", a),
            GlobE(a) => unary(out, "GE", a),
            GlobA(a) => unary(out, "GA", a),
        }
    }
}

impl fmt::Display for TefFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for TefFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_tef(s)
    }
}

/// Parses the formula grammar extended with `XE`, `XA`, `GE`, `GA`, `UE`,
/// `UA` and `ME`.
pub fn parse_tef(text: &str) -> Result<TefFormula> {
    from_syntax(&syntax::parse(text)?)
}

fn from_syntax(s: &Syntax) -> Result<TefFormula> {
    use BinaryOp as B;
    use TefFormula as T;
    use UnaryOp as U;
    let b = Box::new;
    Ok(match &s.kind {
        SyntaxKind::Prop(p) => T::Prop(p.clone()),
        SyntaxKind::NegProp(p) => T::NegProp(p.clone()),
        SyntaxKind::Top => T::Top,
        SyntaxKind::Bot => T::Bot,
        SyntaxKind::Unary(op, a) => {
            let a = b(from_syntax(a)?);
            match op {
                U::Next => T::Next(a),
                U::NextE => T::NextE(a),
                U::NextA => T::NextA(a),
                U::GlobE => T::GlobE(a),
                U::GlobA => T::GlobA(a),
                U::Globally | U::Finally | U::BNeg | U::Exists => {
                    return Err(s.error("tef formulas take XE, XA, GE, GA, UE, UA or ME instead"))
                }
            }
        }
        SyntaxKind::Binary(op, l, r) => {
            let (l, r) = (b(from_syntax(l)?), b(from_syntax(r)?));
            match op {
                B::BOr => T::BOr(l, r),
                B::Or => T::Or(l, r),
                B::And => T::And(l, r),
                B::UntilE => T::UntilE(l, r),
                B::UntilA => T::UntilA(l, r),
                B::StrongReleaseE => T::StrongReleaseE(l, r),
                _ => return Err(s.error("tef formulas take XE, XA, GE, GA, UE, UA or ME instead")),
            }
        }
        SyntaxKind::Dep(_) | SyntaxKind::Inc(..) => {
            return Err(s.error("team atoms are not tef formulas"))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToLtl,
    ToCtl,
}

/// `GA ↦ G`, `ψ ME φ ↦ φ U (φ & ψ)`, everything else unchanged. Accepts
/// left-flat formulas built from `X`, `GA`, `ME` and `or`.
pub fn to_ltl(f: &TefFormula) -> Result<Formula> {
    use TefFormula as T;
    Ok(match f {
        T::Prop(p) => Formula::Prop(p.clone()),
        T::NegProp(p) => Formula::NegProp(p.clone()),
        T::Top => Formula::Top,
        T::Bot => Formula::Bot,
        T::And(a, b) => Formula::and(to_ltl(a)?, to_ltl(b)?),
        T::Or(a, b) => Formula::or(to_ltl(a)?, to_ltl(b)?),
        T::BOr(a, b) => Formula::bor(to_ltl(a)?, to_ltl(b)?),
        T::Next(a) => Formula::next(to_ltl(a)?),
        T::GlobA(a) => {
            flat_left(a, f)?;
            Formula::globally(to_ltl(a)?)
        }
        T::StrongReleaseE(psi, phi) => {
            flat_left(phi, f)?;
            let phi = to_ltl(phi)?;
            Formula::until(phi.clone(), Formula::and(phi, to_ltl(psi)?))
        }
        T::NextE(_) | T::NextA(_) | T::GlobE(_) | T::UntilE(..) | T::UntilA(..) => {
            return Err(Error::fragment(format!(
                "only X, GA and ME translate to TeamLTL, found {f}"
            )))
        }
    })
}

fn flat_left(arg: &TefFormula, whole: &TefFormula) -> Result<()> {
    if arg.is_flat() {
        Ok(())
    } else {
        Err(Error::fragment(format!("left argument contains `or`: {whole}")))
    }
}

/// `G ↦ GA`, `M ↦ ME`, and `φ U (φ & ψ) ↦ ψ ME φ`. Accepts left-flat
/// formulas built from `X`, `G`, `M` and `or`.
pub fn to_ctl(f: &Formula) -> Result<TefFormula> {
    use TefFormula as T;
    let b = |x: TefFormula| Box::new(x);
    Ok(match f {
        Formula::Prop(p) => T::Prop(p.clone()),
        Formula::NegProp(p) => T::NegProp(p.clone()),
        Formula::Top => T::Top,
        Formula::Bot => T::Bot,
        Formula::And(x, y) => T::And(b(to_ctl(x)?), b(to_ctl(y)?)),
        Formula::Or(x, y) => T::Or(b(to_ctl(x)?), b(to_ctl(y)?)),
        Formula::BOr(x, y) => T::BOr(b(to_ctl(x)?), b(to_ctl(y)?)),
        Formula::Next(x) => T::Next(b(to_ctl(x)?)),
        Formula::Globally(x) => {
            ltl_left(x, f)?;
            T::GlobA(b(to_ctl(x)?))
        }
        Formula::StrongRelease(psi, phi) => {
            ltl_left(phi, f)?;
            T::StrongReleaseE(b(to_ctl(psi)?), b(to_ctl(phi)?))
        }
        Formula::Until(phi, rhs) => match &**rhs {
            Formula::And(phi2, psi) if phi2 == phi => {
                ltl_left(phi, f)?;
                T::StrongReleaseE(b(to_ctl(psi)?), b(to_ctl(phi)?))
            }
            _ => {
                return Err(Error::fragment(format!(
                    "until translates only in the form `a U (a & b)` (write `b M a`): {f}"
                )))
            }
        },
        _ => {
            return Err(Error::fragment(format!(
                "only X, G, M and or translate to tef formulas, found {f}"
            )))
        }
    })
}

fn ltl_left(arg: &Formula, whole: &Formula) -> Result<()> {
    if arg.is_ltl() {
        Ok(())
    } else {
        Err(Error::fragment(format!("left argument is not LTL: {whole}")))
    }
}
