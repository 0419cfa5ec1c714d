//! Lexer and precedence parser shared by the TeamLTL and TeamCTL dialects.
//!
//! The parser builds a neutral [`Syntax`] tree; each dialect converts it into
//! its own AST and rejects operators it does not know.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UnaryOp {
    Next,
    Globally,
    Finally,
    BNeg,
    Exists,
    NextE,
    NextA,
    GlobE,
    GlobA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BinaryOp {
    BOr,
    Or,
    And,
    Until,
    WeakUntil1,
    WeakUntil2,
    Release1,
    Release2,
    StrongRelease,
    UntilE,
    UntilA,
    StrongReleaseE,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SyntaxKind {
    Prop(String),
    NegProp(String),
    Top,
    Bot,
    Unary(UnaryOp, Box<Syntax>),
    Binary(BinaryOp, Box<Syntax>, Box<Syntax>),
    Dep(Vec<Syntax>),
    Inc(Vec<Syntax>, Vec<Syntax>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Syntax {
    pub kind: SyntaxKind,
    pub pos: Pos,
}

impl Syntax {
    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::syntax(self.pos.line, self.pos.column, message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bang,
    Tilde,
    Amp,
    Pipe,
    LParen,
    RParen,
    Comma,
    Semi,
    KwOr,
    Top,
    Bot,
    Dep,
    Inc,
    Unary(UnaryOp),
    Binary(BinaryOp),
    Eof,
}

fn keyword(word: &str) -> Option<Tok> {
    use BinaryOp as B;
    use UnaryOp as U;
    Some(match word {
        "or" => Tok::KwOr,
        "top" => Tok::Top,
        "bot" => Tok::Bot,
        "dep" => Tok::Dep,
        "inc" => Tok::Inc,
        "X" => Tok::Unary(U::Next),
        "G" => Tok::Unary(U::Globally),
        "F" => Tok::Unary(U::Finally),
        "E" => Tok::Unary(U::Exists),
        "XE" => Tok::Unary(U::NextE),
        "XA" => Tok::Unary(U::NextA),
        "GE" => Tok::Unary(U::GlobE),
        "GA" => Tok::Unary(U::GlobA),
        "U" => Tok::Binary(B::Until),
        "W1" => Tok::Binary(B::WeakUntil1),
        "W2" => Tok::Binary(B::WeakUntil2),
        "R1" => Tok::Binary(B::Release1),
        "R2" => Tok::Binary(B::Release2),
        "M" => Tok::Binary(B::StrongRelease),
        "UE" => Tok::Binary(B::UntilE),
        "UA" => Tok::Binary(B::UntilA),
        "ME" => Tok::Binary(B::StrongReleaseE),
        _ => return None,
    })
}

/// True for words the lexer reserves, so printers never emit them as names.
pub(crate) fn is_keyword(word: &str) -> bool {
    keyword(word).is_some()
}

pub(crate) fn is_ident(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_keyword(word)
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            column += i - start;
            out.push((keyword(&word).unwrap_or(Tok::Ident(word)), pos));
            continue;
        }
        let tok = match c {
            '!' => Tok::Bang,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            other => {
                return Err(Error::syntax(
                    line,
                    column,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push((tok, pos));
        column += 1;
        i += 1;
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(name) => format!("identifier `{name}`"),
        Tok::Eof => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let pos = self.pos();
        Err(Error::syntax(
            pos.line,
            pos.column,
            format!("expected {expected}, found {}", describe(self.peek())),
        ))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn formula(&mut self) -> Result<Syntax> {
        self.left_assoc(0)
    }

    // Levels: 0 = `or`, 1 = `|`, 2 = `&`.
    fn left_assoc(&mut self, level: u8) -> Result<Syntax> {
        let next = |p: &mut Parser| {
            if level == 2 {
                p.binop()
            } else {
                p.left_assoc(level + 1)
            }
        };
        let (tok, op) = match level {
            0 => (Tok::KwOr, BinaryOp::BOr),
            1 => (Tok::Pipe, BinaryOp::Or),
            _ => (Tok::Amp, BinaryOp::And),
        };
        let mut lhs = next(self)?;
        while *self.peek() == tok {
            self.bump();
            let rhs = next(self)?;
            let pos = lhs.pos;
            lhs = Syntax {
                kind: SyntaxKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn binop(&mut self) -> Result<Syntax> {
        let lhs = self.unary()?;
        if let Tok::Binary(op) = *self.peek() {
            self.bump();
            let rhs = self.binop()?;
            let pos = lhs.pos;
            return Ok(Syntax {
                kind: SyntaxKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                pos,
            });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Syntax> {
        let pos = self.pos();
        let op = match *self.peek() {
            Tok::Unary(op) => op,
            Tok::Tilde => UnaryOp::BNeg,
            _ => return self.atom(),
        };
        self.bump();
        let sub = self.unary()?;
        Ok(Syntax {
            kind: SyntaxKind::Unary(op, Box::new(sub)),
            pos,
        })
    }

    fn list(&mut self, stop: &[Tok]) -> Result<Vec<Syntax>> {
        let mut items = vec![self.formula()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.formula()?);
        }
        if !stop.contains(self.peek()) {
            return self.fail("`,` or end of argument list");
        }
        Ok(items)
    }

    fn atom(&mut self) -> Result<Syntax> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                SyntaxKind::Prop(name)
            }
            Tok::Bang => {
                self.bump();
                match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.bump();
                        SyntaxKind::NegProp(name)
                    }
                    _ => return self.fail("a proposition after `!`"),
                }
            }
            Tok::Top => {
                self.bump();
                SyntaxKind::Top
            }
            Tok::Bot => {
                self.bump();
                SyntaxKind::Bot
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(inner);
            }
            Tok::Dep => {
                self.bump();
                self.expect(Tok::LParen, "`(` after dep")?;
                let args = self.list(&[Tok::RParen])?;
                self.bump();
                SyntaxKind::Dep(args)
            }
            Tok::Inc => {
                self.bump();
                self.expect(Tok::LParen, "`(` after inc")?;
                let lhs = self.list(&[Tok::Semi])?;
                self.bump();
                let rhs = self.list(&[Tok::RParen])?;
                self.bump();
                if lhs.len() != rhs.len() {
                    return Err(Error::syntax(
                        pos.line,
                        pos.column,
                        format!(
                            "inclusion atom arity mismatch: {} formulas left of `;`, {} right",
                            lhs.len(),
                            rhs.len()
                        ),
                    ));
                }
                SyntaxKind::Inc(lhs, rhs)
            }
            _ => return self.fail("a formula"),
        };
        Ok(Syntax { kind, pos })
    }
}

pub(crate) fn parse(text: &str) -> Result<Syntax> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let out = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.fail("end of input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_column_of_stray_token() {
        let err = parse("p & )").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 5, .. }), "{err}");
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("p &\n  q $").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 5, .. }), "{err}");
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert!(is_ident("p1"));
        assert!(!is_ident("or"));
        assert!(!is_ident("UE"));
        assert!(!is_ident("1p"));
    }
}
