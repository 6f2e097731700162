//! Dense univariate polynomials over an arbitrary coefficient ring.
//!
//! Used for the u-polynomials of the chi_-y algorithm and as the raw material
//! of rational functions. Stored without trailing zeros.

use crate::algebra::rational::Rational;
use crate::algebra::ring::{RatRing, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poly<R: Ring> {
    pub coeffs: Vec<R::Elem>,
}

impl<R: Ring> Poly<R> {
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, ring: &PolyRing<R>, k: usize) -> R::Elem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| ring.base.zero())
    }
}

/// Polynomial ring over `base` in one named variable.
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    pub var: &'static str,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, var: &'static str) -> Self {
        PolyRing { base, var }
    }

    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Poly<R> {
        let mut p = Poly { coeffs };
        self.trim(&mut p);
        p
    }

    /// Monomial c * var^k.
    pub fn monomial(&self, k: usize, c: R::Elem) -> Poly<R> {
        if self.base.is_zero(&c) {
            return Poly { coeffs: vec![] };
        }
        let mut coeffs = vec![self.base.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn gen(&self) -> Poly<R> {
        self.monomial(1, self.base.one())
    }

    fn trim(&self, p: &mut Poly<R>) {
        while let Some(c) = p.coeffs.last() {
            if self.base.is_zero(c) {
                p.coeffs.pop();
            } else {
                break;
            }
        }
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R>;

    fn zero(&self) -> Poly<R> {
        Poly { coeffs: vec![] }
    }

    fn one(&self) -> Poly<R> {
        Poly {
            coeffs: vec![self.base.one()],
        }
    }

    fn add(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let x = match (a.coeffs.get(k), b.coeffs.get(k)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(x);
        }
        self.from_coeffs(coeffs)
    }

    fn neg(&self, a: &Poly<R>) -> Poly<R> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn mul(&self, a: &Poly<R>, b: &Poly<R>) -> Poly<R> {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.zero();
        }
        let mut coeffs = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                coeffs[i + j] = self.base.add(&coeffs[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(coeffs)
    }

    fn is_zero(&self, a: &Poly<R>) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }

    fn eq(&self, a: &Poly<R>, b: &Poly<R>) -> bool {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.base.zero();
        (0..n).all(|k| {
            self.base
                .eq(a.coeffs.get(k).unwrap_or(&z), b.coeffs.get(k).unwrap_or(&z))
        })
    }

    fn from_rational(&self, r: &Rational) -> Poly<R> {
        self.from_coeffs(vec![self.base.from_rational(r)])
    }

    fn try_inv(&self, a: &Poly<R>) -> Result<Poly<R>> {
        // Only constants can be units in R[var].
        match a.degree() {
            Some(0) => Ok(Poly {
                coeffs: vec![self.base.try_inv(&a.coeffs[0])?],
            }),
            _ => Err(Error::NonUnit),
        }
    }
}

/// Polynomials over the rationals, the workhorse for rational functions.
pub type QPoly = Poly<RatRing>;
pub type QPolyRing = PolyRing<RatRing>;

/// Euclidean division over Q: returns (quotient, remainder).
pub fn qpoly_divrem(ring: &QPolyRing, a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = b.degree().expect("division by zero polynomial");
    let lead = b.coeffs[db].clone();
    let mut rem = a.clone();
    let mut quot = ring.zero();
    while let Some(dr) = rem.degree() {
        if dr < db {
            break;
        }
        let c = &rem.coeffs[dr] / &lead;
        let m = ring.monomial(dr - db, c);
        quot = ring.add(&quot, &m);
        rem = ring.sub(&rem, &ring.mul(&m, b));
    }
    (quot, rem)
}

/// Monic gcd over Q via the Euclidean algorithm.
pub fn qpoly_gcd(ring: &QPolyRing, a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !ring.is_zero(&y) {
        let (_, r) = qpoly_divrem(ring, &x, &y);
        x = y;
        y = r;
    }
    match x.degree() {
        None => x,
        Some(d) => {
            let lead = x.coeffs[d].clone();
            ring.from_coeffs(x.coeffs.iter().map(|c| c / &lead).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat_int;

    fn qring() -> QPolyRing {
        PolyRing::new(RatRing, "u")
    }

    #[test]
    fn mul_and_degree() {
        let r = qring();
        let u = r.gen();
        let p = r.add(&r.one(), &u); // 1 + u
        let sq = r.mul(&p, &p);
        assert!(r.eq(
            &sq,
            &r.from_coeffs(vec![rat_int(1), rat_int(2), rat_int(1)])
        ));
        assert_eq!(sq.degree(), Some(2));
    }

    #[test]
    fn divrem_and_gcd() {
        let r = qring();
        // (u^2 - 1) / (u - 1) = u + 1
        let num = r.from_coeffs(vec![rat_int(-1), rat_int(0), rat_int(1)]);
        let den = r.from_coeffs(vec![rat_int(-1), rat_int(1)]);
        let (q, rem) = qpoly_divrem(&r, &num, &den);
        assert!(r.is_zero(&rem));
        assert!(r.eq(&q, &r.from_coeffs(vec![rat_int(1), rat_int(1)])));

        let g = qpoly_gcd(&r, &num, &den);
        assert!(r.eq(&g, &den)); // u - 1 is already monic
    }

    #[test]
    fn inversion_is_partial() {
        let r = qring();
        assert!(r.try_inv(&r.gen()).is_err());
        let two_inv = r.try_inv(&r.from_rational(&rat_int(2))).unwrap();
        assert!(r.eq(&r.mul(&two_inv, &r.from_rational(&rat_int(2))), &r.one()));
    }
}
