//! Rational functions in s over the rationals.
//!
//! The elliptic-genus assembly works per q-order in this field: intermediate
//! divisions (inverse theta factors) leave the Laurent ring, and clearing back
//! to Laurent polynomials is a checked post-condition, not an assumption.

use crate::algebra::laurent::{s_ring, SLaurent};
use crate::algebra::poly::{qpoly_divrem, qpoly_gcd, PolyRing, QPoly, QPolyRing};
use crate::algebra::rational::Rational;
use crate::algebra::ring::{RatRing, Ring};
use crate::error::{Error, Result};

/// num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, Debug)]
pub struct RatFun {
    pub num: QPoly,
    pub den: QPoly,
}

#[derive(Clone, Debug)]
pub struct RatFunRing {
    poly: QPolyRing,
}

impl Default for RatFunRing {
    fn default() -> Self {
        Self::new()
    }
}

impl RatFunRing {
    pub fn new() -> Self {
        RatFunRing {
            poly: PolyRing::new(RatRing, "s"),
        }
    }

    pub fn poly_ring(&self) -> &QPolyRing {
        &self.poly
    }

    fn reduce(&self, num: QPoly, den: QPoly) -> RatFun {
        assert!(
            !self.poly.is_zero(&den),
            "rational function with zero denominator"
        );
        if self.poly.is_zero(&num) {
            return RatFun {
                num,
                den: self.poly.one(),
            };
        }
        let g = qpoly_gcd(&self.poly, &num, &den);
        let (num, r1) = qpoly_divrem(&self.poly, &num, &g);
        debug_assert!(self.poly.is_zero(&r1));
        let (den, r2) = qpoly_divrem(&self.poly, &den, &g);
        debug_assert!(self.poly.is_zero(&r2));
        // make the denominator monic
        let d = den.degree().unwrap();
        let lead = den.coeffs[d].clone();
        let den = self
            .poly
            .from_coeffs(den.coeffs.iter().map(|c| c / &lead).collect());
        let num = self
            .poly
            .from_coeffs(num.coeffs.iter().map(|c| c / &lead).collect());
        RatFun { num, den }
    }

    pub fn from_poly(&self, p: QPoly) -> RatFun {
        RatFun {
            num: p,
            den: self.poly.one(),
        }
    }

    pub fn fraction(&self, num: QPoly, den: QPoly) -> RatFun {
        self.reduce(num, den)
    }

    /// Embed a Laurent polynomial: multiply up by the smallest power of s.
    pub fn from_laurent(&self, p: &SLaurent) -> RatFun {
        match p.terms.keys().next() {
            None => self.zero(),
            Some(&min) => {
                let shift = min.min(0);
                let mut coeffs = vec![
                    Rational::from_integer(0.into());
                    (p.terms.keys().last().unwrap() - shift) as usize + 1
                ];
                for (&e, c) in &p.terms {
                    coeffs[(e - shift) as usize] = c.clone();
                }
                self.reduce(
                    self.poly.from_coeffs(coeffs),
                    self.poly
                        .monomial((-shift) as usize, crate::algebra::rational::rat_one()),
                )
            }
        }
    }

    /// A reduced fraction is a Laurent polynomial exactly when its monic
    /// denominator is a power of s.
    pub fn to_laurent(&self, f: &RatFun) -> Result<SLaurent> {
        let d = f.den.degree().unwrap();
        let is_power_of_s = f
            .den
            .coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| (k == d) == !num::Zero::is_zero(c));
        if !is_power_of_s {
            return Err(Error::NonUnit);
        }
        let sr = s_ring();
        Ok(sr.from_terms(
            f.num
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64 - d as i64, c.clone())),
        ))
    }
}

impl Ring for RatFunRing {
    type Elem = RatFun;

    fn zero(&self) -> RatFun {
        self.from_poly(self.poly.zero())
    }

    fn one(&self) -> RatFun {
        self.from_poly(self.poly.one())
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        let num = self.poly.add(
            &self.poly.mul(&a.num, &b.den),
            &self.poly.mul(&b.num, &a.den),
        );
        self.reduce(num, self.poly.mul(&a.den, &b.den))
    }

    fn neg(&self, a: &RatFun) -> RatFun {
        RatFun {
            num: self.poly.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        self.reduce(self.poly.mul(&a.num, &b.num), self.poly.mul(&a.den, &b.den))
    }

    fn is_zero(&self, a: &RatFun) -> bool {
        self.poly.is_zero(&a.num)
    }

    fn eq(&self, a: &RatFun, b: &RatFun) -> bool {
        // canonical form makes structural comparison sound
        self.poly.eq(&a.num, &b.num) && self.poly.eq(&a.den, &b.den)
    }

    fn from_rational(&self, r: &Rational) -> RatFun {
        self.from_poly(self.poly.from_rational(r))
    }

    fn try_inv(&self, a: &RatFun) -> Result<RatFun> {
        if self.is_zero(a) {
            return Err(Error::NonUnit);
        }
        Ok(self.reduce(a.den.clone(), a.num.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat_int;

    #[test]
    fn invert_s_squared_minus_one_over_s() {
        // (s^2 - 1)/s inverts to s/(s^2 - 1)
        let r = RatFunRing::new();
        let sr = s_ring();
        let f = r.from_laurent(&sr.from_terms(vec![(1, rat_int(1)), (-1, rat_int(-1))]));
        let inv = r.try_inv(&f).unwrap();
        assert!(r.eq(&r.mul(&f, &inv), &r.one()));
        assert_eq!(inv.num.degree(), Some(1));
        assert_eq!(inv.den.degree(), Some(2));
        // and the inverse is genuinely not Laurent
        assert!(r.to_laurent(&inv).is_err());
    }

    #[test]
    fn laurent_round_trip() {
        let r = RatFunRing::new();
        let sr = s_ring();
        let p = sr.from_terms(vec![(-2, rat_int(3)), (0, rat_int(-1)), (5, rat_int(7))]);
        let back = r.to_laurent(&r.from_laurent(&p)).unwrap();
        assert!(sr.eq(&p, &back));
    }
}
