//! The ordered-field contract shared by exact rationals and [`LcNumber`].

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::lc::LcNumber;

pub type Rational = num_rational::BigRational;

/// An ordered field in which every risk computation is carried out.
///
/// Rationals evaluate ordinary decision problems; [`LcNumber`] evaluates the
/// same formulas with infinitesimal inputs.
pub trait Scalar:
    Clone
    + Ord
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(q: Rational) -> Self;
    /// `None` for zero.
    fn try_inv(&self) -> Option<Self>;
    /// The standard part, if the element is finite.
    fn standard_part(&self) -> Option<Rational>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    fn lt_zero(&self) -> bool {
        *self < Self::zero()
    }

    fn gt_zero(&self) -> bool {
        *self > Self::zero()
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.try_inv().map(|inv| self.clone() * inv)
    }
}

impl Scalar for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn standard_part(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn lt_zero(&self) -> bool {
        self.is_negative()
    }

    fn gt_zero(&self) -> bool {
        self.is_positive()
    }
}

impl Scalar for LcNumber {
    fn from_rational(q: Rational) -> Self {
        LcNumber::from_rational(q)
    }

    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }

    fn standard_part(&self) -> Option<Rational> {
        self.st().ok()
    }
}

/// Shorthand for `p/q` used throughout the tests and the examples.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
