//! Truncated power series over an arbitrary coefficient ring.
//!
//! One type serves three roles: q-series (elliptic genus), y-series (the
//! geometric-series oracle for chi_-y and the localized chi_-y), and the
//! per-Chern-root t-expansions fed to the genus engine. Elements are dense
//! and always carry exactly `order + 1` coefficients.

use crate::algebra::rational::{factorial, Rational};
use crate::algebra::ring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TruncSeries<R: Ring> {
    pub coeffs: Vec<R::Elem>,
}

#[derive(Clone, Debug)]
pub struct SeriesRing<R: Ring> {
    pub base: R,
    /// Truncation order: coefficients of var^0 .. var^order are kept.
    pub order: usize,
    pub var: &'static str,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(base: R, order: usize, var: &'static str) -> Self {
        SeriesRing { base, order, var }
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> TruncSeries<R> {
        coeffs.truncate(self.order + 1);
        while coeffs.len() < self.order + 1 {
            coeffs.push(self.base.zero());
        }
        TruncSeries { coeffs }
    }

    pub fn from_fn(&self, f: impl FnMut(usize) -> R::Elem) -> TruncSeries<R> {
        TruncSeries {
            coeffs: (0..=self.order).map(f).collect(),
        }
    }

    /// The series variable itself.
    pub fn gen(&self) -> TruncSeries<R> {
        self.from_fn(|k| {
            if k == 1 {
                self.base.one()
            } else {
                self.base.zero()
            }
        })
    }

    pub fn monomial(&self, k: usize, c: R::Elem) -> TruncSeries<R> {
        self.from_fn(|j| if j == k { c.clone() } else { self.base.zero() })
    }

    pub fn coeff(&self, a: &TruncSeries<R>, k: usize) -> R::Elem {
        a.coeffs.get(k).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// exp(c * var) truncated: sum c^k var^k / k!.
    pub fn exp_linear(&self, c: &R::Elem) -> TruncSeries<R> {
        let mut pow = self.base.one();
        let mut coeffs = Vec::with_capacity(self.order + 1);
        for k in 0..=self.order {
            if k > 0 {
                pow = self.base.mul(&pow, c);
            }
            coeffs.push(
                self.base
                    .scale(&pow, &(Rational::from_integer(1.into()) / factorial(k))),
            );
        }
        TruncSeries { coeffs }
    }

    /// Truncated exponential of a series with zero constant term.
    pub fn exp(&self, a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        if !self.base.is_zero(&a.coeffs[0]) {
            return Err(Error::NonNilpotentConstant);
        }
        // E' = A' E gives (n+1) E_{n+1} = sum_{i=0..n} (i+1) A_{i+1} E_{n-i}.
        let mut e = vec![self.base.one()];
        for n in 0..self.order {
            let mut acc = self.base.zero();
            for i in 0..=n {
                if i + 1 < a.coeffs.len() {
                    let term = self.base.mul(&a.coeffs[i + 1], &e[n - i]);
                    acc = self.base.add(
                        &acc,
                        &self
                            .base
                            .scale(&term, &crate::algebra::rational::rat_int((i + 1) as i64)),
                    );
                }
            }
            e.push(
                self.base
                    .scale(&acc, &crate::algebra::rational::rat(1, (n + 1) as i64)),
            );
        }
        Ok(self.from_coeffs(e))
    }

    /// Truncated logarithm of a series with constant term one.
    pub fn log(&self, a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        if !self.base.is_one(&a.coeffs[0]) {
            return Err(Error::NonUnitConstant);
        }
        // A L' = A' gives (n+1) L_{n+1} = (n+1) A_{n+1} - sum_{i=1..n} A_i (n-i+1) L_{n-i+1}.
        let mut l = vec![self.base.zero()];
        for n in 0..self.order {
            let mut acc = self.base.scale(
                &a.coeffs[n + 1],
                &crate::algebra::rational::rat_int((n + 1) as i64),
            );
            for i in 1..=n {
                let term = self.base.mul(&a.coeffs[i], &l[n - i + 1]);
                acc = self.base.sub(
                    &acc,
                    &self.base.scale(
                        &term,
                        &crate::algebra::rational::rat_int((n - i + 1) as i64),
                    ),
                );
            }
            l.push(
                self.base
                    .scale(&acc, &crate::algebra::rational::rat(1, (n + 1) as i64)),
            );
        }
        Ok(self.from_coeffs(l))
    }

    pub fn map_coeffs<S: Ring>(
        &self,
        target: &SeriesRing<S>,
        a: &TruncSeries<R>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> TruncSeries<S> {
        target.from_coeffs(a.coeffs.iter().map(f).collect())
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = TruncSeries<R>;

    fn zero(&self) -> TruncSeries<R> {
        self.from_fn(|_| self.base.zero())
    }

    fn one(&self) -> TruncSeries<R> {
        self.from_fn(|k| {
            if k == 0 {
                self.base.one()
            } else {
                self.base.zero()
            }
        })
    }

    fn add(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> TruncSeries<R> {
        debug_assert_eq!(a.coeffs.len(), b.coeffs.len());
        TruncSeries {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        }
    }

    fn neg(&self, a: &TruncSeries<R>) -> TruncSeries<R> {
        TruncSeries {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn mul(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> TruncSeries<R> {
        let mut coeffs = vec![self.base.zero(); self.order + 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if i + j > self.order {
                    break;
                }
                coeffs[i + j] = self.base.add(&coeffs[i + j], &self.base.mul(x, y));
            }
        }
        TruncSeries { coeffs }
    }

    fn is_zero(&self, a: &TruncSeries<R>) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }

    fn eq(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> bool {
        a.coeffs.len() == b.coeffs.len()
            && a.coeffs
                .iter()
                .zip(&b.coeffs)
                .all(|(x, y)| self.base.eq(x, y))
    }

    fn from_rational(&self, r: &Rational) -> TruncSeries<R> {
        self.monomial(0, self.base.from_rational(r))
    }

    fn try_inv(&self, a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        let c0_inv = self.base.try_inv(&a.coeffs[0])?;
        let mut b = vec![c0_inv.clone()];
        for n in 1..=self.order {
            let mut acc = self.base.zero();
            for k in 1..=n {
                acc = self.base.add(&acc, &self.base.mul(&a.coeffs[k], &b[n - k]));
            }
            b.push(self.base.neg(&self.base.mul(&c0_inv, &acc)));
        }
        Ok(TruncSeries { coeffs: b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rat_int};
    use crate::algebra::ring::RatRing;

    fn yring(order: usize) -> SeriesRing<RatRing> {
        SeriesRing::new(RatRing, order, "y")
    }

    #[test]
    fn geometric_inverse() {
        let r = yring(5);
        let one_minus_y = r.sub(&r.one(), &r.gen());
        let inv = r.try_inv(&one_minus_y).unwrap();
        for k in 0..=5 {
            assert_eq!(r.coeff(&inv, k), rat_int(1));
        }
        assert!(r.eq(&r.mul(&one_minus_y, &inv), &r.one()));
    }

    #[test]
    fn exp_log_inverse_pair() {
        let r = yring(6);
        let a = r.from_coeffs(vec![
            rat_int(0),
            rat_int(2),
            rat(-1, 3),
            rat_int(0),
            rat(5, 7),
            rat_int(1),
            rat_int(-4),
        ]);
        let e = r.exp(&a).unwrap();
        assert!(r.eq(&r.log(&e).unwrap(), &a));
        assert_eq!(r.coeff(&e, 0), rat_int(1));
    }

    #[test]
    fn exp_linear_matches_exp_of_monomial() {
        let r = yring(4);
        let c = rat(3, 2);
        let via_linear = r.exp_linear(&c);
        let via_exp = r.exp(&r.monomial(1, c)).unwrap();
        assert!(r.eq(&via_linear, &via_exp));
    }

    #[test]
    fn contract_errors() {
        let r = yring(3);
        assert_eq!(r.exp(&r.one()).unwrap_err(), Error::NonNilpotentConstant);
        assert_eq!(r.log(&r.gen()).unwrap_err(), Error::NonUnitConstant);
        assert_eq!(r.try_inv(&r.gen()).unwrap_err(), Error::NonUnit);
    }
}
