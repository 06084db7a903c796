//! Text syntax for coefficients and torus elements.
//!
//! ```text
//! element  := ['+'|'-'] product (('+'|'-') product)*
//! product  := power ('*' power)*
//! power    := atom ['^' exponent]
//! atom     := INT | 'q' | 'h[' INT ',' INT ']' | 'X(' INT (',' INT)* ')' | 'X' INT
//!           | '(' element ')'
//! exponent := ['-'] INT | '(' ['-'] INT ['/' '2'] ')'
//! ```
//!
//! `X(c)` is a basis element of the torus, `Xk` the 1-based generator `X(e_k)`.
//! Only `q` accepts a half-integer exponent. Whitespace is ignored.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::coeff::{HSymbol, QCoefficient};
use crate::error::{Error, Result};
use crate::torus::{TorusContext, TorusElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementExpr {
    Integer(BigInt),
    /// `q^{k/2}`.
    QPower(i64),
    Symbol(HSymbol),
    Basis(Vec<i64>),
    /// 1-based generator index.
    Generator(usize),
    /// Terms with a negation flag.
    Sum(Vec<(bool, ElementExpr)>),
    Product(Vec<ElementExpr>),
    Power {
        base: Box<ElementExpr>,
        exponent: i64,
        pos: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Q,
    H,
    X,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'q' => Tok::Q,
            b'h' => Tok::H,
            b'X' => Tok::X,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::syntax(i, format!("unexpected character {ch:?}")));
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                i64::try_from(n).map_err(|_| Error::syntax(at, "integer out of range"))
            }
            _ => Err(Error::syntax(at, "expected integer")),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        let n = self.small_int()?;
        Ok(if neg { -n } else { n })
    }

    fn sum(&mut self) -> Result<ElementExpr> {
        let mut terms = Vec::new();
        let mut neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        loop {
            terms.push((neg, self.product()?));
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(ElementExpr::Sum(terms))
    }

    fn product(&mut self) -> Result<ElementExpr> {
        let mut factors = vec![self.power()?];
        while self.eat(&Tok::Star) {
            factors.push(self.power()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(ElementExpr::Product(factors))
    }

    /// Returns `(numerator, denominator)` with denominator 1 or 2.
    fn exponent(&mut self) -> Result<(i64, i64)> {
        if self.eat(&Tok::LParen) {
            let num = self.signed_int()?;
            let mut den = 1;
            if self.eat(&Tok::Slash) {
                let at = self.offset();
                den = self.small_int()?;
                if den != 1 && den != 2 {
                    return Err(Error::syntax(at, "only half-integer exponents are allowed"));
                }
            }
            self.expect(Tok::RParen, "')'")?;
            Ok((num, den))
        } else {
            Ok((self.signed_int()?, 1))
        }
    }

    fn power(&mut self) -> Result<ElementExpr> {
        let at = self.offset();
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let exp_at = self.offset();
        let (num, den) = self.exponent()?;
        match base {
            ElementExpr::QPower(k) if (k * num) % den == 0 => {
                Ok(ElementExpr::QPower(k * num / den))
            }
            ElementExpr::QPower(_) => Err(Error::syntax(
                exp_at,
                "only half-integer powers of q are allowed",
            )),
            _ if den != 1 => Err(Error::syntax(
                exp_at,
                "fractional exponent on a non-q factor",
            )),
            base => Ok(ElementExpr::Power {
                base: Box::new(base),
                exponent: num,
                pos: at,
            }),
        }
    }

    fn atom(&mut self) -> Result<ElementExpr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(ElementExpr::Integer(n)),
            Some(Tok::Q) => Ok(ElementExpr::QPower(2)),
            Some(Tok::H) => {
                self.expect(Tok::LBracket, "'['")?;
                let k = self.small_int()?;
                self.expect(Tok::Comma, "','")?;
                let r = self.small_int()?;
                self.expect(Tok::RBracket, "']'")?;
                let k =
                    u32::try_from(k).map_err(|_| Error::syntax(at, "symbol index out of range"))?;
                let r =
                    u32::try_from(r).map_err(|_| Error::syntax(at, "symbol index out of range"))?;
                Ok(ElementExpr::Symbol(HSymbol::new(k, r)))
            }
            Some(Tok::X) => {
                if self.eat(&Tok::LParen) {
                    let mut c = vec![self.signed_int()?];
                    while self.eat(&Tok::Comma) {
                        c.push(self.signed_int()?);
                    }
                    self.expect(Tok::RParen, "')'")?;
                    Ok(ElementExpr::Basis(c))
                } else {
                    let k = self.small_int()?;
                    if k < 1 {
                        return Err(Error::syntax(at, "generator indices start at 1"));
                    }
                    Ok(ElementExpr::Generator(k as usize))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(Error::syntax(at, "expected a term")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<ElementExpr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(Error::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

impl ElementExpr {
    pub fn to_element(&self, ctx: &Arc<TorusContext>) -> Result<TorusElement> {
        Ok(match self {
            ElementExpr::Basis(c) => {
                if c.len() != ctx.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: ctx.dim(),
                        found: c.len(),
                    });
                }
                TorusElement::basis(ctx, c.clone())
            }
            ElementExpr::Generator(k) => {
                if *k > ctx.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: ctx.dim(),
                        found: *k,
                    });
                }
                TorusElement::generator(ctx, k - 1)
            }
            ElementExpr::Sum(terms) => {
                let mut acc = TorusElement::zero(ctx);
                for (neg, t) in terms {
                    let v = t.to_element(ctx)?;
                    acc = if *neg { &acc - &v } else { &acc + &v };
                }
                acc
            }
            ElementExpr::Product(factors) => {
                let mut acc = TorusElement::one(ctx);
                for f in factors {
                    acc = &acc * &f.to_element(ctx)?;
                }
                acc
            }
            ElementExpr::Power {
                base,
                exponent,
                pos,
            } => {
                let b = base.to_element(ctx)?;
                if *exponent >= 0 {
                    b.pow(*exponent as u32)
                } else {
                    b.monomial_inverse()
                        .ok_or_else(|| {
                            Error::syntax(*pos, "negative power of a non-invertible factor")
                        })?
                        .pow(exponent.unsigned_abs() as u32)
                }
            }
            scalar => TorusElement::constant(ctx, scalar.to_coefficient()?),
        })
    }

    pub fn to_coefficient(&self) -> Result<QCoefficient> {
        Ok(match self {
            ElementExpr::Integer(n) => QCoefficient::from_int(n.clone()),
            ElementExpr::QPower(k) => QCoefficient::q_half(*k),
            ElementExpr::Symbol(s) => QCoefficient::symbol(*s),
            ElementExpr::Basis(_) | ElementExpr::Generator(_) => {
                return Err(Error::syntax(
                    0,
                    "torus basis element where a coefficient was expected",
                ))
            }
            ElementExpr::Sum(terms) => {
                let mut acc = QCoefficient::zero();
                for (neg, t) in terms {
                    let v = t.to_coefficient()?;
                    if *neg {
                        acc -= &v;
                    } else {
                        acc += &v;
                    }
                }
                acc
            }
            ElementExpr::Product(factors) => {
                let mut acc = QCoefficient::one();
                for f in factors {
                    acc = &acc * &f.to_coefficient()?;
                }
                acc
            }
            ElementExpr::Power {
                base,
                exponent,
                pos,
            } => {
                let b = base.to_coefficient()?;
                if *exponent >= 0 {
                    b.pow(*exponent as u32)
                } else {
                    b.unit_inverse()
                        .ok_or_else(|| {
                            Error::syntax(*pos, "negative power of a non-unit coefficient")
                        })?
                        .pow(exponent.unsigned_abs() as u32)
                }
            }
        })
    }
}

pub fn parse_element(text: &str, ctx: &Arc<TorusContext>) -> Result<TorusElement> {
    parse_expr(text)?.to_element(ctx)
}

pub fn parse_coefficient(text: &str) -> Result<QCoefficient> {
    parse_expr(text)?.to_coefficient()
}

impl std::str::FromStr for QCoefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_coefficient(s)
    }
}
