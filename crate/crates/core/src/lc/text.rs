//! Text syntax for [`LcNumber`]s.
//!
//! Values print as a sum of terms in increasing exponent order, e.g.
//! `-eps^-1 + 3/2 + 5*eps^2`; rational exponents print in parentheses,
//! `eps^(1/2)`. The same syntax is accepted by [`parse_expr`], which also
//! takes products, quotients, integer powers and parentheses, so every
//! printed value parses back to itself.

use alloc::boxed::Box;
use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{LcNumber, DEFAULT_ORDER};
use crate::scalar::Rational;
use crate::{Error, Result};

impl fmt::Display for LcNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            f.write_str("eps")?;
            if e.is_one() {
                continue;
            }
            if e.is_integer() {
                write!(f, "^{e}")?;
            } else {
                write!(f, "^({e})")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LcNumber {
    type Err = Error;

    /// Parses and evaluates with [`DEFAULT_ORDER`] for any division by a
    /// non-monomial.
    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)?.eval(DEFAULT_ORDER)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    BadNumber,
    BadExponent,
}

/// A syntax error and the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character '{c}' at position {}", self.position)
            }
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at position {}", self.position),
            ParseErrorKind::BadNumber => write!(f, "malformed number at position {}", self.position),
            ParseErrorKind::BadExponent => write!(f, "malformed exponent at position {}", self.position),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(Rational),
    Eps,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

impl core::error::Error for ParseError {}

impl Expr {
    /// Evaluates exactly; divisions by non-monomials keep `order` exponent
    /// units past the valuation.
    pub fn eval(&self, order: u32) -> Result<LcNumber> {
        Ok(match self {
            Expr::Literal(c) => LcNumber::from_rational(c.clone()),
            Expr::Eps => LcNumber::eps(),
            Expr::Neg(a) => -a.eval(order)?,
            Expr::Add(a, b) => a.eval(order)? + b.eval(order)?,
            Expr::Sub(a, b) => a.eval(order)? - b.eval(order)?,
            Expr::Mul(a, b) => a.eval(order)? * b.eval(order)?,
            Expr::Div(a, b) => a.eval(order)? * b.eval(order)?.inv_with_order(order)?,
            Expr::Pow(a, e) => {
                let base = a.eval(order)?;
                if e.is_integer() {
                    let n: i32 = i32::try_from(e.to_integer()).map_err(|_| {
                        Error::Unsupported("exponent too large".to_string())
                    })?;
                    if n < 0 {
                        base.inv_with_order(order)?.powi(-n)?
                    } else {
                        base.powi(n)?
                    }
                } else {
                    rational_power(&base, e)?
                }
            }
        })
    }
}

/// `eps^v` raised to a rational power; other bases have no exact rational
/// root in general.
fn rational_power(base: &LcNumber, e: &Rational) -> Result<LcNumber> {
    match base.terms() {
        [(v, c)] if c.is_one() && base.is_exact() => Ok(LcNumber::monomial(Rational::one(), v * e)),
        _ => Err(Error::Unsupported(
            "rational powers are only defined for exact eps monomials".to_string(),
        )),
    }
}

/// Parses an expression over rational literals, `eps`, `+ - * /`, `^` with
/// an integer or parenthesised rational exponent, and parentheses.
pub fn parse_expr(input: &str) -> core::result::Result<Expr, ParseError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&b) => ParseError { position: self.pos, kind: ParseErrorKind::UnexpectedChar(b as char) },
            None => ParseError { position: self.pos, kind: ParseErrorKind::UnexpectedEnd },
        }
    }

    fn expect(&mut self, b: u8) -> core::result::Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> core::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> core::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> core::result::Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> core::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> core::result::Result<Rational, ParseError> {
        let start = self.pos;
        let bad = || ParseError { position: start, kind: ParseErrorKind::BadExponent };
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let neg = self.sign();
            let num = self.integer().ok_or_else(bad)?;
            let den = if self.peek() == Some(b'/') {
                self.pos += 1;
                self.integer().ok_or_else(bad)?
            } else {
                BigInt::one()
            };
            self.expect(b')')?;
            if den.is_zero() {
                return Err(bad());
            }
            let r = Rational::new(num, den);
            return Ok(if neg { -r } else { r });
        }
        let neg = self.sign();
        let n = self.integer().ok_or_else(bad)?;
        let r = Rational::from_integer(n);
        Ok(if neg { -r } else { r })
    }

    fn sign(&mut self) -> bool {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            None
        } else {
            d.parse().ok()
        }
    }

    fn atom(&mut self) -> core::result::Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'e') => {
                if self.src[self.pos..].starts_with(b"eps") {
                    self.pos += 3;
                    Ok(Expr::Eps)
                } else {
                    Err(self.unexpected())
                }
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            _ => Err(self.unexpected()),
        }
    }

    fn number(&mut self) -> core::result::Result<Expr, ParseError> {
        let start = self.pos;
        let whole = self.digits();
        let mut value: Rational = if whole.is_empty() {
            Rational::zero()
        } else {
            Rational::from_integer(whole.parse().map_err(|_| ParseError {
                position: start,
                kind: ParseErrorKind::BadNumber,
            })?)
        };
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() && whole.is_empty() {
                return Err(ParseError { position: start, kind: ParseErrorKind::BadNumber });
            }
            if !frac.is_empty() {
                let num: BigInt = frac.parse().map_err(|_| ParseError {
                    position: start,
                    kind: ParseErrorKind::BadNumber,
                })?;
                let den = num_traits::pow(BigInt::from(10u32), frac.len());
                value += Rational::new(num, den);
            }
        }
        Ok(Expr::Literal(value))
    }
}
