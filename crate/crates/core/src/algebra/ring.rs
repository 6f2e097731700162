//! The coefficient-ring abstraction.
//!
//! Every coefficient domain used by the kernel (rationals, u-polynomials,
//! q-series over Laurent polynomials, rational functions in s, epsilon-Laurent
//! series, and their nestings) implements [`Ring`]. Rings are small context
//! objects carrying the parameters an element alone cannot know (truncation
//! order, window, variable name); elements are plain data.
//!
//! All rings here are commutative Q-algebras with exact arithmetic.

use std::fmt::Debug;

use crate::algebra::rational::{rat_int, Rational};
use crate::error::{Error, Result};

#[allow(clippy::wrong_self_convention)] // rings are element factories
pub trait Ring: Clone + Debug {
    type Elem: Clone + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Semantic equality. Precision-carrying rings compare on the jointly
    /// known range, so this is not always structural equality.
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn from_rational(&self, r: &Rational) -> Self::Elem;
    /// Partial inversion; `Err(NonUnit)` (or a window error) when `a` has no
    /// inverse in this ring.
    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn scale(&self, a: &Self::Elem, r: &Rational) -> Self::Elem {
        self.mul(a, &self.from_rational(r))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&rat_int(n))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.one())
    }

    /// a^n for any integer n; negative powers go through `try_inv`.
    fn pow(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem> {
        let base = if n < 0 { self.try_inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }
}

/// The rationals as a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatRing;

impl Ring for RatRing {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        num::Zero::zero()
    }
    fn one(&self) -> Rational {
        num::One::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        num::Zero::is_zero(a)
    }
    fn eq(&self, a: &Rational, b: &Rational) -> bool {
        a == b
    }
    fn from_rational(&self, r: &Rational) -> Rational {
        r.clone()
    }
    fn try_inv(&self, a: &Rational) -> Result<Rational> {
        if num::Zero::is_zero(a) {
            Err(Error::NonUnit)
        } else {
            Ok(self.one() / a)
        }
    }
}
