//! The truncated graded polynomial ring modelling A = A^*(X)/A^{>d}(X), and
//! the integration functional standing for the virtual fundamental class.
//!
//! The ring is free on user-declared generators: no relations are ever
//! imposed. Every identity the kernel computes is a universal polynomial
//! identity in Chern roots, so it holds in the free model; all the geometry
//! lives in the functional.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::poly::PolyRing;
use crate::algebra::rational::{factorial, rat, rat_int, Rational};
use crate::algebra::ring::{RatRing, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// Free graded model: generators plus the truncation degree d (the virtual
/// dimension of the space it describes).
#[derive(Debug, PartialEq, Eq)]
pub struct ChowModel {
    /// sorted by name; unique
    pub generators: Vec<Generator>,
    pub dim: u32,
}

impl ChowModel {
    pub fn new(mut generators: Vec<Generator>, dim: u32) -> Result<Arc<ChowModel>> {
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        for w in generators.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::InvalidData(format!(
                    "duplicate generator name `{}`",
                    w[0].name
                )));
            }
        }
        for g in &generators {
            if g.degree == 0 || g.degree > dim {
                return Err(Error::InvalidData(format!(
                    "generator `{}` has degree {}, outside 1..={}",
                    g.name, g.degree, dim
                )));
            }
        }
        Ok(Arc::new(ChowModel { generators, dim }))
    }

    /// Point model: no generators, dimension 0.
    pub fn point() -> Arc<ChowModel> {
        ChowModel::new(vec![], 0).unwrap()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial {
            degree: 0,
            exps: vec![0; self.generators.len()],
        }
    }

    pub fn monomial_from_exps(&self, exps: Vec<u32>) -> Result<Monomial> {
        assert_eq!(exps.len(), self.generators.len());
        let degree: u32 = exps
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum();
        if degree > self.dim {
            return Err(Error::DegreeOverflow {
                degree: degree as usize,
                bound: self.dim as usize,
            });
        }
        Ok(Monomial { degree, exps })
    }

    /// All monomials of exact weighted degree k.
    pub fn monomials_of_degree(&self, k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.generators.len()];
        self.enumerate(0, k, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, idx: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial {
                    degree: exps
                        .iter()
                        .zip(&self.generators)
                        .map(|(e, g)| e * g.degree)
                        .sum(),
                    exps: exps.clone(),
                });
            }
            return;
        }
        let d = self.generators[idx].degree;
        let max = remaining / d;
        for e in 0..=max {
            exps[idx] = e;
            self.enumerate(idx + 1, remaining - e * d, exps, out);
        }
        exps[idx] = 0;
    }
}

/// Exponent vector over the model's generators; ordered graded-lex on the
/// name-sorted generators, which fixes the canonical serialization order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub degree: u32,
    pub exps: Vec<u32>,
}

/// Element of the truncated graded ring, with coefficients in `R`.
#[derive(Clone, Debug)]
pub struct ChowClass<R: Ring> {
    pub ring: R,
    pub model: Arc<ChowModel>,
    /// no zero coefficients stored (for exact rings); monomials respect the
    /// degree bound by construction
    pub terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> ChowClass<R> {
    pub fn zero(ring: &R, model: &Arc<ChowModel>) -> Self {
        ChowClass {
            ring: ring.clone(),
            model: Arc::clone(model),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &R, model: &Arc<ChowModel>) -> Self {
        Self::constant(ring, model, ring.one())
    }

    pub fn constant(ring: &R, model: &Arc<ChowModel>, c: R::Elem) -> Self {
        let mut class = Self::zero(ring, model);
        class.accumulate(model.unit_monomial(), &c);
        class
    }

    /// Single generator as a class.
    pub fn generator(ring: &R, model: &Arc<ChowModel>, name: &str) -> Result<Self> {
        let idx = model
            .generator_index(name)
            .ok_or_else(|| Error::InvalidData(format!("unknown generator `{name}`")))?;
        let mut exps = vec![0; model.generators.len()];
        exps[idx] = 1;
        let mono = model.monomial_from_exps(exps)?;
        let mut class = Self::zero(ring, model);
        class.accumulate(mono, &ring.one());
        Ok(class)
    }

    fn same_model(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.model, &other.model) || *self.model == *other.model,
            "internal model mismatch"
        );
    }

    pub fn accumulate(&mut self, mono: Monomial, c: &R::Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        let new = match self.terms.get(&mono) {
            Some(old) => self.ring.add(old, c),
            None => c.clone(),
        };
        if self.ring.is_zero(&new) {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, new);
        }
    }

    pub fn coeff(&self, mono: &Monomial) -> R::Elem {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coeff(&self.model.unit_monomial())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| self.ring.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_model(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ChowClass {
            ring: self.ring.clone(),
            model: Arc::clone(&self.model),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(&self.ring, &self.model);
        for (m, v) in &self.terms {
            out.accumulate(m.clone(), &self.ring.mul(v, c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&self.ring.from_rational(r))
    }

    /// Product in A: monomials of total degree beyond d are discarded.
    pub fn mul(&self, other: &Self) -> Self {
        self.same_model(other);
        let dim = self.model.dim;
        let mut out = Self::zero(&self.ring, &self.model);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree + m2.degree > dim {
                    continue;
                }
                let exps: Vec<u32> = m1.exps.iter().zip(&m2.exps).map(|(a, b)| a + b).collect();
                let mono = Monomial {
                    degree: m1.degree + m2.degree,
                    exps,
                };
                out.accumulate(mono, &self.ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring, &self.model);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Homogeneous part of weighted degree k.
    pub fn degree_part(&self, k: u32) -> Self {
        ChowClass {
            ring: self.ring.clone(),
            model: Arc::clone(&self.model),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// True when every term has weighted degree exactly k (zero qualifies).
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| m.degree == k || self.ring.is_zero(c))
    }

    /// Truncated exponential; the constant term must vanish.
    pub fn exp_positive(&self) -> Result<Self> {
        if !self.ring.is_zero(&self.constant_term()) {
            return Err(Error::NonNilpotentConstant);
        }
        let mut acc = Self::one(&self.ring, &self.model);
        let mut pow = Self::one(&self.ring, &self.model);
        for k in 1..=self.model.dim as usize {
            pow = pow.mul(self);
            if pow.terms.is_empty() {
                break;
            }
            acc = acc.add(&pow.scale_rat(&(rat_int(1) / factorial(k))));
        }
        Ok(acc)
    }

    /// Truncated logarithm; the constant term must be one.
    pub fn log_unit(&self) -> Result<Self> {
        if !self.ring.is_one(&self.constant_term()) {
            return Err(Error::NonUnitConstant);
        }
        let b = self.sub(&Self::one(&self.ring, &self.model));
        let mut acc = Self::zero(&self.ring, &self.model);
        let mut pow = Self::one(&self.ring, &self.model);
        for k in 1..=self.model.dim as usize {
            pow = pow.mul(&b);
            if pow.terms.is_empty() {
                break;
            }
            acc = acc.add(&pow.scale_rat(&rat(if k % 2 == 1 { 1 } else { -1 }, k as i64)));
        }
        Ok(acc)
    }

    /// Two-sided inverse within truncation; the constant term must invert in
    /// the coefficient ring. Degreewise triangular recursion, so it stays
    /// honest over precision-carrying rings.
    pub fn invert_unit(&self) -> Result<Self> {
        let c_inv = self.ring.try_inv(&self.constant_term())?;
        let mut inv_parts: Vec<ChowClass<R>> =
            vec![Self::constant(&self.ring, &self.model, c_inv.clone())];
        for k in 1..=self.model.dim {
            // (b a)_k = 0  =>  b_k = -c^{-1} sum_{j<k} b_j a_{k-j}
            let mut acc = Self::zero(&self.ring, &self.model);
            for j in 0..k {
                let a_part = self.degree_part(k - j);
                if a_part.terms.is_empty() {
                    continue;
                }
                acc = acc.add(&inv_parts[j as usize].mul(&a_part));
            }
            inv_parts.push(acc.neg().scale(&c_inv));
        }
        let mut out = Self::zero(&self.ring, &self.model);
        for p in inv_parts {
            out = out.add(&p);
        }
        Ok(out)
    }

    /// Semantic equality through the coefficient ring (missing terms are
    /// zero); deliberately not `PartialEq`, which could not consult the ring.
    #[allow(clippy::should_implement_trait)]
    pub fn eq(&self, other: &Self) -> bool {
        self.same_model(other);
        let z = self.ring.zero();
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().all(|m| {
            self.ring.eq(
                self.terms.get(m).unwrap_or(&z),
                other.terms.get(m).unwrap_or(&z),
            )
        })
    }

    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> ChowClass<S> {
        let mut out = ChowClass::zero(target, &self.model);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), &f(c));
        }
        out
    }

    pub fn try_map_coeffs<S: Ring>(
        &self,
        target: &S,
        f: impl Fn(&R::Elem) -> Result<S::Elem>,
    ) -> Result<ChowClass<S>> {
        let mut out = ChowClass::zero(target, &self.model);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), &f(c)?);
        }
        Ok(out)
    }
}

/// Lift a rational-coefficient class into any coefficient ring.
pub fn embed<R: Ring>(class: &ChowClass<RatRing>, target: &R) -> ChowClass<R> {
    class.map_coeffs(target, |c| target.from_rational(c))
}

impl ChowClass<PolyRing<RatRing>> {
    /// Largest u-degree over all coefficients.
    pub fn upoly_degree(&self) -> usize {
        self.terms
            .values()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient-of-u^l as a rational class ("slice").
    pub fn upoly_slice(&self, l: usize) -> ChowClass<RatRing> {
        let mut out = ChowClass::zero(&RatRing, &self.model);
        for (m, p) in &self.terms {
            if let Some(c) = p.coeffs.get(l) {
                out.accumulate(m.clone(), c);
            }
        }
        out
    }

    /// Split into slices X^0..X^d, failing if the u-degree exceeds d.
    pub fn upoly_slices(&self) -> Result<Vec<ChowClass<RatRing>>> {
        let d = self.model.dim as usize;
        let deg = self.upoly_degree();
        if deg > d {
            return Err(Error::DegreeOverflow {
                degree: deg,
                bound: d,
            });
        }
        Ok((0..=d).map(|l| self.upoly_slice(l)).collect())
    }
}

/// Substitute u -> 1/(1-y) into slices and renormalize by (1-y)^d:
/// sum_l X^l (1-y)^{d-l}, reported as coefficients of powers of y.
pub fn assemble_y_powers(slices: &[ChowClass<RatRing>], d: usize) -> Vec<ChowClass<RatRing>> {
    let model = slices[0].model.clone();
    let mut out = vec![ChowClass::zero(&RatRing, &model); d + 1];
    for (l, slice) in slices.iter().enumerate() {
        // (1-y)^{d-l} = sum_j C(d-l, j) (-1)^j y^j
        for (j, item) in out.iter_mut().enumerate().take(d - l + 1) {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let c = crate::algebra::rational::binomial((d - l) as u32, j as u32) * rat_int(sign);
            *item = item.add(&slice.scale_rat(&c));
        }
    }
    out
}

/// The integration functional: a rational value on each degree-d monomial,
/// extended by linearity; everything of other degrees integrates to zero.
#[derive(Clone, Debug)]
pub struct IntegralFunctional {
    pub model: Arc<ChowModel>,
    pub values: BTreeMap<Monomial, Rational>,
}

impl IntegralFunctional {
    pub fn new(
        model: &Arc<ChowModel>,
        values: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (m, v) in values {
            if m.degree != model.dim {
                return Err(Error::InvalidData(format!(
                    "functional defined on degree-{} monomial; expected degree {}",
                    m.degree, model.dim
                )));
            }
            if !seen.insert(m.clone()) {
                return Err(Error::InvalidData(
                    "functional assigns a monomial twice".into(),
                ));
            }
            if !num::Zero::is_zero(&v) {
                map.insert(m, v);
            }
        }
        Ok(IntegralFunctional {
            model: Arc::clone(model),
            values: map,
        })
    }

    /// Rational-linear pairing against the degree-d part of the class.
    pub fn integrate<R: Ring>(&self, class: &ChowClass<R>) -> R::Elem {
        let ring = &class.ring;
        let mut acc = ring.zero();
        for (m, v) in &self.values {
            if let Some(c) = class.terms.get(m) {
                acc = ring.add(&acc, &ring.scale(c, v));
            }
        }
        acc
    }
}
