//! A truncated Levi-Civita field.
//!
//! An [`LcNumber`] is a finite sum `sum_i c_i * eps^(e_i)` with rational
//! coefficients and strictly increasing rational exponents, together with a
//! precision bound: every term of the true value with exponent at or below
//! the bound is present and exact, anything beyond it has been dropped.
//! Numbers built from literals carry no bound at all (they are exact); bounds
//! only appear once a non-monomial is inverted or a caller asks for a
//! truncation order.
//!
//! `eps` is a positive infinitesimal and the only generator. An infinite
//! scale such as `K` is written `eps^-1`.

mod text;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;
use crate::{Error, Result};

pub use text::{parse_expr, Expr, ParseError, ParseErrorKind};

/// Truncation order used when an exact non-monomial has to be inverted and
/// the caller gave no order.
pub const DEFAULT_ORDER: u32 = 8;

/// Least exponent carrying a nonzero coefficient; `Infinity` for zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

/// Where an element sits relative to the standard reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magnitude {
    /// Zero or valuation > 0.
    Infinitesimal,
    /// Valuation exactly 0.
    Appreciable,
    /// Valuation < 0.
    Infinite,
}

#[derive(Clone, Debug)]
pub struct LcNumber {
    /// (exponent, coefficient), exponents strictly increasing, no zero coefficients.
    terms: Vec<(Rational, Rational)>,
    /// Largest exponent known exactly; `None` when the value is exact.
    bound: Option<Rational>,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn min_bound(a: &Option<Rational>, b: &Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

impl LcNumber {
    pub fn zero() -> Self {
        LcNumber { terms: Vec::new(), bound: None }
    }

    pub fn one() -> Self {
        Self::from_rational(q(1))
    }

    /// The generating infinitesimal.
    pub fn eps() -> Self {
        Self::monomial(q(1), q(1))
    }

    /// `eps^-1`, the stand-in for an infinite natural number.
    pub fn infinite_unit() -> Self {
        Self::monomial(q(1), q(-1))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::monomial(c, q(0))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    /// `coefficient * eps^exponent`, exact.
    pub fn monomial(coefficient: Rational, exponent: Rational) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        LcNumber { terms: alloc::vec![(exponent, coefficient)], bound: None }
    }

    /// Builds an exact number from `(exponent, coefficient)` pairs in any
    /// order; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(acc, None)
    }

    fn from_map(acc: BTreeMap<Rational, Rational>, bound: Option<Rational>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && bound.as_ref().map_or(true, |b| e <= b))
            .collect();
        LcNumber { terms, bound }
    }

    /// Truncates so that at most `order` exponent units past the valuation
    /// are retained. Never increases the existing precision.
    pub fn with_order(mut self, order: u32) -> Self {
        let base = self.leading_exponent().cloned().unwrap_or_else(Rational::zero);
        let requested = base + q(order.into());
        let bound = min_bound(&self.bound, &Some(requested)).expect("requested bound present");
        self.terms.retain(|(e, _)| *e <= bound);
        self.bound = Some(bound);
        self
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    /// Largest exponent known exactly, `None` for exact values.
    pub fn precision_bound(&self) -> Option<&Rational> {
        self.bound.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_none()
    }

    /// Exponent units retained past the valuation; `None` when exact.
    pub fn order(&self) -> Option<Rational> {
        let b = self.bound.as_ref()?;
        Some(match self.leading_exponent() {
            Some(v) => b - v,
            None => b.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading_exponent(&self) -> Option<&Rational> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn valuation(&self) -> Valuation {
        match self.leading_exponent() {
            Some(v) => Valuation::Finite(v.clone()),
            None => Valuation::Infinity,
        }
    }

    /// Coefficient of `eps^exponent`.
    pub fn coefficient(&self, exponent: &Rational) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e == exponent)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.leading_coefficient() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn magnitude(&self) -> Magnitude {
        match self.leading_exponent() {
            None => Magnitude::Infinitesimal,
            Some(v) if v.is_positive() => Magnitude::Infinitesimal,
            Some(v) if v.is_zero() => Magnitude::Appreciable,
            Some(_) => Magnitude::Infinite,
        }
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.magnitude() == Magnitude::Infinitesimal
    }

    pub fn is_near_standard(&self) -> bool {
        self.magnitude() != Magnitude::Infinite
    }

    pub fn is_infinite(&self) -> bool {
        self.magnitude() == Magnitude::Infinite
    }

    /// The standard part: the coefficient of `eps^0`.
    pub fn st(&self) -> Result<Rational> {
        if self.is_infinite() {
            return Err(Error::NotNearStandard);
        }
        Ok(self.coefficient(&Rational::zero()))
    }

    /// `a ≈ b`: the difference is zero or infinitesimal.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match leading_difference(self, other) {
            None => true,
            Some((e, _)) => e.is_positive(),
        }
    }

    /// `a ⪅ b`: `a <= b` or `a ≈ b`.
    pub fn leq_approx(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    /// `self ≫ other`: `γ·self > other` for every standard `γ > 0`.
    ///
    /// Holds iff `self > 0` and either `other <= 0` or `other/self` is
    /// infinitesimal.
    pub fn much_greater(&self, other: &Self) -> bool {
        if self.signum() <= 0 {
            return false;
        }
        if other.signum() <= 0 {
            return true;
        }
        other.valuation() > self.valuation()
    }

    /// For positive `self` and `other` with `self ≫ other` false, a standard
    /// rational `γ > 0` with `γ·self <= other`. `None` whenever no such
    /// witness is needed or possible.
    pub fn much_greater_witness(&self, other: &Self) -> Option<Rational> {
        if self.signum() <= 0 || other.signum() <= 0 || self.much_greater(other) {
            return None;
        }
        if other.valuation() < self.valuation() {
            return Some(q(1));
        }
        // equal valuations: halve the ratio of leading coefficients
        let cx = self.leading_coefficient()?;
        let cy = other.leading_coefficient()?;
        Some(cy / (cx * q(2)))
    }

    /// Multiplicative inverse keeping the input's relative precision. Exact
    /// non-monomials are expanded to [`DEFAULT_ORDER`].
    pub fn inv(&self) -> Result<Self> {
        self.inv_impl(None)
    }

    /// Multiplicative inverse retaining at most `order` exponent units past
    /// the valuation.
    pub fn inv_with_order(&self, order: u32) -> Result<Self> {
        self.inv_impl(Some(order))
    }

    fn inv_impl(&self, order: Option<u32>) -> Result<Self> {
        let (v, c) = match self.terms.first() {
            Some(t) => t.clone(),
            None => return Err(Error::ZeroDivision),
        };
        let own = self.bound.as_ref().map(|b| b - &v);
        let requested = order.map(|n| q(n.into()));
        let rel = match (own, requested) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => (self.terms.len() > 1).then_some(b),
            (None, None) => (self.terms.len() > 1).then(|| q(DEFAULT_ORDER.into())),
        };
        let c_inv = c.recip();
        // self = c eps^v (1 + u), u of positive valuation
        let u_terms: Vec<(Rational, Rational)> =
            self.terms[1..].iter().map(|(e, k)| (e - &v, k * &c_inv)).collect();
        let neg_u = LcNumber { terms: u_terms.into_iter().map(|(e, k)| (e, -k)).collect(), bound: None };
        let mut series = LcNumber::one();
        if let Some(n) = &rel {
            if let Some(w) = neg_u.leading_exponent().cloned() {
                let mut power = LcNumber::one();
                let mut k = q(1);
                while &(&k * &w) <= n {
                    power = (power * neg_u.clone()).truncated(n);
                    series = series + power.clone();
                    k += q(1);
                }
            }
            series = series.truncated(n);
        }
        let shift = LcNumber::monomial(c_inv, -v.clone());
        let mut out = shift * series;
        out.bound = rel.map(|n| n - v);
        Ok(out)
    }

    fn truncated(mut self, bound: &Rational) -> Self {
        self.terms.retain(|(e, _)| e <= bound);
        self.bound = min_bound(&self.bound, &Some(bound.clone()));
        self
    }

    /// Integer power; negative exponents go through [`LcNumber::inv`].
    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = LcNumber::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * sq.clone();
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.clone() * sq;
            }
        }
        Ok(acc)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.inv()?)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Equality on the terms both operands know exactly.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let common = min_bound(&self.bound, &other.bound);
        let keep = |t: &&(Rational, Rational)| common.as_ref().map_or(true, |b| &t.0 <= b);
        self.terms.iter().filter(keep).eq(other.terms.iter().filter(keep))
    }
}

/// Leading nonzero term of `a - b` over the retained terms, without
/// truncation.
fn leading_difference(a: &LcNumber, b: &LcNumber) -> Option<(Rational, Rational)> {
    let (mut i, mut j) = (0, 0);
    loop {
        let next = match (a.terms.get(i), b.terms.get(j)) {
            (None, None) => return None,
            (Some((e, c)), None) => {
                i += 1;
                (e.clone(), c.clone())
            }
            (None, Some((e, c))) => {
                j += 1;
                (e.clone(), -c.clone())
            }
            (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                Ordering::Less => {
                    i += 1;
                    (ea.clone(), ca.clone())
                }
                Ordering::Greater => {
                    j += 1;
                    (eb.clone(), -cb.clone())
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (ea.clone(), ca - cb)
                }
            },
        };
        if !next.1.is_zero() {
            return Some(next);
        }
    }
}

impl PartialEq for LcNumber {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for LcNumber {}

impl PartialOrd for LcNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LcNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match leading_difference(self, other) {
            None => Ordering::Equal,
            Some((_, c)) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}

impl From<Rational> for LcNumber {
    fn from(c: Rational) -> Self {
        LcNumber::from_rational(c)
    }
}

impl From<i64> for LcNumber {
    fn from(n: i64) -> Self {
        LcNumber::from_int(n)
    }
}

fn add_impl(a: &LcNumber, b: &LcNumber) -> LcNumber {
    let bound = min_bound(&a.bound, &b.bound);
    let mut acc: BTreeMap<Rational, Rational> = a.terms.iter().cloned().collect();
    for (e, c) in &b.terms {
        *acc.entry(e.clone()).or_insert_with(Rational::zero) += c;
    }
    LcNumber::from_map(acc, bound)
}

fn mul_impl(a: &LcNumber, b: &LcNumber) -> LcNumber {
    // error terms: A*err_b beyond va + Bb, err_a*B beyond vb + Ba, err_a*err_b beyond Ba + Bb
    let bound = match (&a.bound, &b.bound) {
        (None, None) => None,
        _ => {
            let mut candidates: Vec<Rational> = Vec::new();
            if let (Some(va), Some(bb)) = (a.leading_exponent(), &b.bound) {
                candidates.push(va + bb);
            }
            if let (Some(vb), Some(ba)) = (b.leading_exponent(), &a.bound) {
                candidates.push(vb + ba);
            }
            if a.is_zero() && b.is_zero() {
                if let (Some(ba), Some(bb)) = (&a.bound, &b.bound) {
                    candidates.push(ba + bb);
                }
            }
            match candidates.into_iter().min() {
                Some(m) => Some(m),
                // an exact zero times an inexact value
                None => return LcNumber::zero(),
            }
        }
    };
    let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e = ea + eb;
            if bound.as_ref().is_some_and(|bd| &e > bd) {
                continue;
            }
            *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    LcNumber::from_map(acc, bound)
}

fn neg_impl(a: &LcNumber) -> LcNumber {
    LcNumber {
        terms: a.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        bound: a.bound.clone(),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:path) => {
        impl $tr<LcNumber> for LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: LcNumber) -> LcNumber {
                $imp(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a LcNumber> for LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: &'a LcNumber) -> LcNumber {
                $imp(&self, rhs)
            }
        }
        impl<'a> $tr<LcNumber> for &'a LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: LcNumber) -> LcNumber {
                $imp(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b LcNumber> for &'a LcNumber {
            type Output = LcNumber;
            fn $method(self, rhs: &'b LcNumber) -> LcNumber {
                $imp(self, rhs)
            }
        }
    };
}

fn sub_impl(a: &LcNumber, b: &LcNumber) -> LcNumber {
    add_impl(a, &neg_impl(b))
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        neg_impl(&self)
    }
}

impl Neg for &LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        neg_impl(self)
    }
}

impl Zero for LcNumber {
    fn zero() -> Self {
        LcNumber::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LcNumber {
    fn one() -> Self {
        LcNumber::one()
    }
}
