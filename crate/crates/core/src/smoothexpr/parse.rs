use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Expr, ExprError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ExprError {
    ExprError::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b';' => Tok::Semi,
            b'x' => {
                let end = digits_from(i + 1);
                if end == i + 1 {
                    return Err(syntax(i, "expected a variable index after 'x'"));
                }
                let idx = text[i + 1..end].parse().map_err(|_| syntax(i, "variable index out of range"))?;
                i = end;
                out.push((Tok::Var(idx), start));
                continue;
            }
            b'0'..=b'9' => {
                let end = digits_from(i);
                let num: BigInt = text[i..end].parse().expect("digits");
                // `p/q` is one literal only when a digit follows the slash directly.
                if end + 1 < bytes.len() && bytes[end] == b'/' && bytes[end + 1].is_ascii_digit() {
                    let dend = digits_from(end + 1);
                    let den: BigInt = text[end + 1..dend].parse().expect("digits");
                    if den.is_zero() {
                        return Err(syntax(end + 1, "zero denominator"));
                    }
                    i = dend;
                    out.push((Tok::Num(BigRational::new(num, den)), start));
                } else {
                    i = end;
                    out.push((Tok::Num(BigRational::from_integer(num)), start));
                }
                continue;
            }
            other => return Err(syntax(i, format!("unexpected character {:?}", other as char))),
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

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                acc = Expr::Add(Box::new(acc), Box::new(Expr::Neg(Box::new(self.term()?))));
            } else {
                return Ok(acc);
            }
        }
    }

    /// Returns the factor and whether it was a bare numeric literal.
    fn signed_factor(&mut self) -> Result<(Expr, bool), ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            if let Some(Tok::Num(n)) = self.peek_at(1) {
                if self.peek_at(2) != Some(&Tok::Caret) {
                    let n = n.clone();
                    self.pos += 2;
                    return Ok((Expr::Const(-n), true));
                }
            }
            self.pos += 1;
            let (f, _) = self.signed_factor()?;
            return Ok((Expr::Neg(Box::new(f)), false));
        }
        let bare = matches!(self.peek(), Some(Tok::Num(_))) && self.peek_at(1) != Some(&Tok::Caret);
        Ok((self.factor()?, bare))
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let (mut acc, mut bare) = self.signed_factor()?;
        loop {
            if self.eat(&Tok::Star) {
                let (rhs, _) = self.signed_factor()?;
                acc = match acc {
                    Expr::Const(c) if bare => Expr::ScalarMul(c, Box::new(rhs)),
                    other => Expr::Mul(Box::new(other), Box::new(rhs)),
                };
            } else if self.eat(&Tok::Slash) {
                let (rhs, _) = self.signed_factor()?;
                let inv = Expr::Inv(Box::new(rhs));
                acc = match acc {
                    Expr::Const(c) if c.is_one() => inv,
                    other => Expr::Mul(Box::new(other), Box::new(inv)),
                };
            } else {
                return Ok(acc);
            }
            bare = false;
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.base()?;
        if self.eat(&Tok::Caret) {
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n.to_integer().try_into().map_err(|_| syntax(at, "exponent out of range"))?;
                    return Ok(Expr::IntPow(Box::new(base), e));
                }
                _ => return Err(syntax(at, "expected a natural-number exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Const(n))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Expr::Var(i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(self.offset(), "expected ')'"));
                }
                Ok(e)
            }
            Some(t) => Err(syntax(at, format!("unexpected token {t:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `;`-separated output expressions.
pub(super) fn parse_outputs(text: &str) -> Result<Vec<Expr>, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let mut outs = vec![p.expr()?];
    while p.eat(&Tok::Semi) {
        outs.push(p.expr()?);
    }
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(outs)
}
