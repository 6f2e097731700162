//! Laurent polynomials in one variable over an arbitrary coefficient ring.
//!
//! The main instance is Laurent polynomials in s, the formal square root of y
//! (y = s^2), which carry the half-integer y-powers of theta expansions as
//! integer s-exponents.

use std::collections::BTreeMap;

use crate::algebra::rational::Rational;
use crate::algebra::ring::{RatRing, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LaurentPoly<R: Ring> {
    /// exponent -> coefficient, no zero coefficients stored
    pub terms: BTreeMap<i64, R::Elem>,
}

#[derive(Clone, Debug)]
pub struct LaurentRing<R: Ring> {
    pub base: R,
    pub var: &'static str,
}

impl<R: Ring> LaurentRing<R> {
    pub fn new(base: R, var: &'static str) -> Self {
        LaurentRing { base, var }
    }

    pub fn monomial(&self, e: i64, c: R::Elem) -> LaurentPoly<R> {
        let mut terms = BTreeMap::new();
        if !self.base.is_zero(&c) {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    pub fn gen_pow(&self, e: i64) -> LaurentPoly<R> {
        self.monomial(e, self.base.one())
    }

    pub fn from_terms(&self, it: impl IntoIterator<Item = (i64, R::Elem)>) -> LaurentPoly<R> {
        let mut out = self.zero();
        for (e, c) in it {
            self.accumulate(&mut out, e, &c);
        }
        out
    }

    pub fn accumulate(&self, p: &mut LaurentPoly<R>, e: i64, c: &R::Elem) {
        if self.base.is_zero(c) {
            return;
        }
        let entry = p.terms.entry(e).or_insert_with(|| self.base.zero());
        *entry = self.base.add(entry, c);
        if self.base.is_zero(entry) {
            p.terms.remove(&e);
        }
    }

    /// Substitute var -> -var: the coefficient at exponent e picks up (-1)^e.
    pub fn negate_variable(&self, p: &LaurentPoly<R>) -> LaurentPoly<R> {
        LaurentPoly {
            terms: p
                .terms
                .iter()
                .map(|(&e, c)| {
                    let c = if e.rem_euclid(2) == 1 {
                        self.base.neg(c)
                    } else {
                        c.clone()
                    };
                    (e, c)
                })
                .collect(),
        }
    }

    /// Evaluate at var = 1 (sum of coefficients).
    pub fn eval_at_one(&self, p: &LaurentPoly<R>) -> R::Elem {
        p.terms
            .values()
            .fold(self.base.zero(), |acc, c| self.base.add(&acc, c))
    }

    pub fn map_coeffs<S: Ring>(
        &self,
        target: &LaurentRing<S>,
        p: &LaurentPoly<R>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> LaurentPoly<S> {
        target.from_terms(p.terms.iter().map(|(&e, c)| (e, f(c))))
    }
}

impl<R: Ring> Ring for LaurentRing<R> {
    type Elem = LaurentPoly<R>;

    fn zero(&self) -> LaurentPoly<R> {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> LaurentPoly<R> {
        self.monomial(0, self.base.one())
    }

    fn add(&self, a: &LaurentPoly<R>, b: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = a.clone();
        for (&e, c) in &b.terms {
            self.accumulate(&mut out, e, c);
        }
        out
    }

    fn neg(&self, a: &LaurentPoly<R>) -> LaurentPoly<R> {
        LaurentPoly {
            terms: a
                .terms
                .iter()
                .map(|(&e, c)| (e, self.base.neg(c)))
                .collect(),
        }
    }

    fn mul(&self, a: &LaurentPoly<R>, b: &LaurentPoly<R>) -> LaurentPoly<R> {
        let mut out = self.zero();
        for (&e1, c1) in &a.terms {
            for (&e2, c2) in &b.terms {
                self.accumulate(&mut out, e1 + e2, &self.base.mul(c1, c2));
            }
        }
        out
    }

    fn is_zero(&self, a: &LaurentPoly<R>) -> bool {
        a.terms.is_empty()
    }

    fn eq(&self, a: &LaurentPoly<R>, b: &LaurentPoly<R>) -> bool {
        // missing keys read as zero; coefficients over precision-carrying
        // base rings may store semantic zeros
        let z = self.base.zero();
        let mut keys: Vec<i64> = a.terms.keys().chain(b.terms.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().all(|e| {
            self.base
                .eq(a.terms.get(e).unwrap_or(&z), b.terms.get(e).unwrap_or(&z))
        })
    }

    fn from_rational(&self, r: &Rational) -> LaurentPoly<R> {
        self.monomial(0, self.base.from_rational(r))
    }

    fn try_inv(&self, a: &LaurentPoly<R>) -> Result<LaurentPoly<R>> {
        // Units are single terms with an invertible coefficient.
        if a.terms.len() != 1 {
            return Err(Error::NonUnit);
        }
        let (&e, c) = a.terms.iter().next().unwrap();
        Ok(self.monomial(-e, self.base.try_inv(c)?))
    }
}

pub type SLaurent = LaurentPoly<RatRing>;
pub type SLaurentRing = LaurentRing<RatRing>;

pub fn s_ring() -> SLaurentRing {
    LaurentRing::new(RatRing, "s")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat_int;

    #[test]
    fn laurent_inverse_of_monomial() {
        let r = s_ring();
        let m = r.monomial(-3, rat_int(2));
        let inv = r.try_inv(&m).unwrap();
        assert!(r.eq(&r.mul(&m, &inv), &r.one()));
        // s - 1/s is not a unit here
        let p = r.from_terms(vec![(1, rat_int(1)), (-1, rat_int(-1))]);
        assert_eq!(r.try_inv(&p).unwrap_err(), Error::NonUnit);
    }

    #[test]
    fn negate_variable_flips_odd_exponents() {
        let r = s_ring();
        let p = r.from_terms(vec![(-1, rat_int(1)), (0, rat_int(5)), (2, rat_int(3))]);
        let q = r.negate_variable(&p);
        assert!(r.eq(
            &q,
            &r.from_terms(vec![(-1, rat_int(-1)), (0, rat_int(5)), (2, rat_int(3))])
        ));
    }
}
