//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' natural)?
//! atom   := rational | 'i' | identifier | '(' expr ')'
//! rational := natural ('/' natural)?
//! ```
//!
//! The parser only builds a syntax tree; [`fold`] evaluates it in any algebra
//! with ring operations (commutative polynomials or Weyl operators), so the
//! order of factors is preserved.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq)]
pub enum Leaf {
    Number(GaussianRational),
    /// Identifier and its byte offset in the source.
    Ident(String, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Leaf(Leaf),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Nat(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { offset: start, message: format!("unexpected character `{ch}`") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), message: message.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut lhs = self.term()?;
        if negate {
            lhs = Expr::Neg(Box::new(lhs));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let off = self.offset();
            match self.bump() {
                Some((Tok::Nat(n), _)) => match u32::try_from(n) {
                    Ok(e) => Ok(Expr::Pow(Box::new(base), e)),
                    Err(_) => Err(Error::Syntax { offset: off, message: "exponent too large".into() }),
                },
                _ => Err(Error::Syntax { offset: off, message: "expected a natural exponent".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                self.bump();
                let mut value = BigRational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let off = self.offset();
                    match self.bump() {
                        Some((Tok::Nat(d), _)) if !d.is_zero() => value /= BigRational::from_integer(d),
                        Some((Tok::Nat(_), _)) => {
                            return Err(Error::Syntax { offset: off, message: "zero denominator".into() })
                        }
                        _ => return Err(Error::Syntax { offset: off, message: "expected a denominator".into() }),
                    }
                }
                Ok(Expr::Leaf(Leaf::Number(GaussianRational::real(value))))
            }
            Some(Tok::Ident(name)) => {
                let off = self.offset();
                self.bump();
                if name == "i" {
                    Ok(Expr::Leaf(Leaf::Number(GaussianRational::i())))
                } else {
                    Ok(Expr::Leaf(Leaf::Ident(name, off)))
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.bump();
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            _ => self.err("expected an operand"),
        }
    }
}

/// Parses `text` into a syntax tree. Offsets in errors are byte offsets.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected token");
    }
    Ok(e)
}

/// Ring operations needed to evaluate a syntax tree.
pub trait ExprTarget: Sized {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn pow(&self, e: u32) -> Self;
}

pub fn fold<T, F>(e: &Expr, leaf: &mut F) -> Result<T>
where
    T: ExprTarget,
    F: FnMut(&Leaf) -> Result<T>,
{
    Ok(match e {
        Expr::Leaf(l) => leaf(l)?,
        Expr::Neg(a) => fold(a, leaf)?.neg(),
        Expr::Add(a, b) => fold(a, leaf)?.add(&fold(b, leaf)?),
        Expr::Sub(a, b) => fold(a, leaf)?.sub(&fold(b, leaf)?),
        Expr::Mul(a, b) => fold(a, leaf)?.mul(&fold(b, leaf)?),
        Expr::Pow(a, k) => fold(a, leaf)?.pow(*k),
    })
}

impl ExprTarget for crate::poly::Poly {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        crate::poly::Poly::pow(self, e)
    }
}
