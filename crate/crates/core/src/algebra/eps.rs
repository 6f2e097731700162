//! Laurent series in the equivariant parameter epsilon, with precision
//! tracking.
//!
//! Localized contributions live in Q((eps)): individual fixed components have
//! genuine poles and only the sum is regular. Silent truncation of poles would
//! fake that regularity, so every element carries the exponent up to which its
//! coefficients are actually known (`prec`); inverting a series of valuation v
//! costs 2v of precision, exactly as in any series field. The ring's window
//! floor `lo` is a hard bound on pole order: inversions that would need lower
//! exponents fail with `WindowTooNarrow`.

use std::collections::BTreeMap;

use crate::algebra::rational::{factorial, rat_int, Rational};
use crate::algebra::ring::Ring;
use crate::error::{Error, Result};

/// Sentinel precision for exact Laurent polynomials.
pub const PREC_EXACT: i64 = i64::MAX / 4;

/// sum of `terms` plus O(eps^prec); keys < prec, no zero coefficients.
#[derive(Clone, Debug)]
pub struct EpsLaurent {
    pub terms: BTreeMap<i64, Rational>,
    pub prec: i64,
}

impl EpsLaurent {
    /// Lowest populated exponent, if any coefficient is known nonzero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Best available lower bound for the valuation.
    fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(|| rat_int(0))
    }

    /// Known coefficients inside [lo, hi], zeros included.
    pub fn clip(&self, lo: i64, hi: i64) -> Vec<(i64, Rational)> {
        (lo..=hi.min(self.prec.saturating_sub(1)))
            .map(|e| (e, self.coeff(e)))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct EpsRing {
    /// Hard floor for pole exponents.
    pub lo: i64,
    /// Exponent up to which results are reported.
    pub hi: i64,
    /// Working precision for freshly expanded series; must exceed `hi` by
    /// enough to absorb the precision cost of the inversions the computation
    /// will perform.
    pub prec: i64,
}

impl EpsRing {
    pub fn new(lo: i64, hi: i64, pad: i64) -> Self {
        assert!(lo <= 0 && hi >= 0);
        EpsRing {
            lo,
            hi,
            prec: hi + 1 + pad.max(0),
        }
    }

    fn normalized(&self, mut terms: BTreeMap<i64, Rational>, prec: i64) -> EpsLaurent {
        terms.retain(|e, c| *e < prec && !num::Zero::is_zero(c));
        EpsLaurent { terms, prec }
    }

    /// e^{k eps} expanded to the working precision.
    pub fn exp_eps(&self, k: i64) -> EpsLaurent {
        let mut terms = BTreeMap::new();
        let mut pow = rat_int(1);
        for j in 0..self.prec.max(1) {
            if j > 0 {
                pow *= rat_int(k);
            }
            let c = &pow / factorial(j as usize);
            if !num::Zero::is_zero(&c) {
                terms.insert(j, c);
            }
        }
        EpsLaurent {
            terms,
            prec: self.prec,
        }
    }

    pub fn monomial(&self, e: i64, c: Rational) -> EpsLaurent {
        let mut terms = BTreeMap::new();
        if !num::Zero::is_zero(&c) {
            terms.insert(e, c);
        }
        EpsLaurent {
            terms,
            prec: PREC_EXACT,
        }
    }

    /// The eps^0 coefficient; errors on poles or exhausted precision.
    pub fn value_at_zero(&self, a: &EpsLaurent) -> Result<Rational> {
        if let Some((&e, _)) = a.terms.iter().next() {
            if e < 0 {
                return Err(Error::PoleAtZero { order: e });
            }
        }
        if a.prec <= 0 {
            return Err(Error::WindowTooNarrow {
                needed: 0,
                lo: a.prec,
            });
        }
        Ok(a.coeff(0))
    }
}

impl Ring for EpsRing {
    type Elem = EpsLaurent;

    fn zero(&self) -> EpsLaurent {
        EpsLaurent {
            terms: BTreeMap::new(),
            prec: PREC_EXACT,
        }
    }

    fn one(&self) -> EpsLaurent {
        self.monomial(0, rat_int(1))
    }

    fn add(&self, a: &EpsLaurent, b: &EpsLaurent) -> EpsLaurent {
        let prec = a.prec.min(b.prec);
        let mut terms = a.terms.clone();
        for (&e, c) in &b.terms {
            let entry = terms.entry(e).or_insert_with(|| rat_int(0));
            *entry += c;
        }
        self.normalized(terms, prec)
    }

    fn neg(&self, a: &EpsLaurent) -> EpsLaurent {
        EpsLaurent {
            terms: a.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
            prec: a.prec,
        }
    }

    fn mul(&self, a: &EpsLaurent, b: &EpsLaurent) -> EpsLaurent {
        // exact zero absorbs everything
        if (a.terms.is_empty() && a.prec >= PREC_EXACT)
            || (b.terms.is_empty() && b.prec >= PREC_EXACT)
        {
            return self.zero();
        }
        let prec = a
            .prec
            .saturating_add(b.val_bound())
            .min(b.prec.saturating_add(a.val_bound()))
            .min(PREC_EXACT);
        let mut terms: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&e1, c1) in &a.terms {
            for (&e2, c2) in &b.terms {
                let e = e1 + e2;
                if e >= prec {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(|| rat_int(0));
                *entry += c1 * c2;
            }
        }
        self.normalized(terms, prec)
    }

    fn is_zero(&self, a: &EpsLaurent) -> bool {
        a.terms.is_empty() && a.prec >= PREC_EXACT
    }

    fn eq(&self, a: &EpsLaurent, b: &EpsLaurent) -> bool {
        // compare on the jointly known range
        let prec = a.prec.min(b.prec);
        let mut keys: Vec<i64> = a.terms.keys().chain(b.terms.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().all(|&e| e >= prec || a.coeff(e) == b.coeff(e))
    }

    fn from_rational(&self, r: &Rational) -> EpsLaurent {
        self.monomial(0, r.clone())
    }

    fn try_inv(&self, a: &EpsLaurent) -> Result<EpsLaurent> {
        let v = match a.valuation() {
            Some(v) => v,
            None => return Err(Error::NonUnit),
        };
        if -v < self.lo {
            return Err(Error::WindowTooNarrow {
                needed: -v,
                lo: self.lo,
            });
        }
        // number of known coefficients of the unit part eps^{-v} a
        let known = if a.prec >= PREC_EXACT {
            (self.prec.saturating_add(v)).max(1)
        } else {
            a.prec - v
        };
        let lead = a.terms[&v].clone();
        let lead_inv = rat_int(1) / &lead;
        // b_j of the inverse unit part, from a-hat_k = a_{v+k}
        let mut b: Vec<Rational> = vec![lead_inv.clone()];
        for n in 1..known {
            let mut acc = rat_int(0);
            for k in 1..=n {
                let ak = a.coeff(v + k);
                if !num::Zero::is_zero(&ak) {
                    acc += &ak * &b[(n - k) as usize];
                }
            }
            b.push(-(&lead_inv * acc));
        }
        let terms = b
            .into_iter()
            .enumerate()
            .map(|(j, c)| (-v + j as i64, c))
            .collect();
        let prec = if a.prec >= PREC_EXACT && a.terms.len() == 1 {
            PREC_EXACT // monomials invert exactly
        } else {
            -v + known
        };
        Ok(self.normalized(terms, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn ring() -> EpsRing {
        EpsRing::new(-4, 4, 6)
    }

    #[test]
    fn invert_one_minus_exp() {
        // 1/(1 - e^{-eps}) = eps^{-1} + 1/2 + eps/12 - eps^3/720 + ...
        let r = ring();
        let a = r.sub(&r.one(), &r.exp_eps(-1));
        let inv = r.try_inv(&a).unwrap();
        assert_eq!(inv.coeff(-1), rat_int(1));
        assert_eq!(inv.coeff(0), rat(1, 2));
        assert_eq!(inv.coeff(1), rat(1, 12));
        assert_eq!(inv.coeff(2), rat_int(0));
        assert_eq!(inv.coeff(3), rat(-1, 720));
        // multiply back, compare on the known range
        assert!(r.eq(&r.mul(&a, &inv), &r.one()));
    }

    #[test]
    fn opposite_weight_flips_leading_sign() {
        let r = ring();
        let a = r.sub(&r.one(), &r.exp_eps(1));
        let inv = r.try_inv(&a).unwrap();
        assert_eq!(inv.coeff(-1), rat_int(-1));
        assert_eq!(inv.coeff(0), rat(1, 2));
        assert_eq!(inv.coeff(1), rat(-1, 12));
    }

    #[test]
    fn precision_cost_of_inversion() {
        let r = ring();
        let a = r.sub(&r.one(), &r.exp_eps(-1)); // valuation 1, prec = ring.prec
        let inv = r.try_inv(&a).unwrap();
        assert_eq!(inv.prec, r.prec - 2);
        // a regular factor cannot restore what the inversion cost
        let prod = r.mul(&r.exp_eps(3), &inv);
        assert_eq!(prod.prec, r.prec - 2);
    }

    #[test]
    fn window_floor_is_enforced() {
        let r = EpsRing::new(-1, 2, 4);
        let a = r.sub(&r.one(), &r.exp_eps(-1));
        let a2 = r.mul(&a, &a); // valuation 2
        assert_eq!(
            r.try_inv(&a2).unwrap_err(),
            Error::WindowTooNarrow { needed: -2, lo: -1 }
        );
    }

    #[test]
    fn value_at_zero_contract() {
        let r = ring();
        let a = r.add(&r.from_rational(&rat_int(2)), &r.monomial(1, rat_int(3)));
        assert_eq!(r.value_at_zero(&a).unwrap(), rat_int(2));
        assert_eq!(r.value_at_zero(&r.zero()).unwrap(), rat_int(0));
        let pole = r.add(&r.monomial(-1, rat_int(1)), &r.one());
        assert_eq!(
            r.value_at_zero(&pole).unwrap_err(),
            Error::PoleAtZero { order: -1 }
        );
    }
}
