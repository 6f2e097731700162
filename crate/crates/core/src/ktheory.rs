//! Bundles and virtual K-classes at the Chern-character level.
//!
//! Chern roots are never materialized: every symmetric expression in the
//! roots of a bundle routes through power sums (Newton identities), which
//! keeps all arithmetic exact and degree-bounded. The genus engine
//! [`multiplicative_class`] evaluates prod_i phi(x_i) / prod_j phi(u_j) for an
//! arbitrary characteristic series phi with unit leading coefficient as
//!
//!   phi_0^{n-m} * exp( sum_k psi_k (p_k(E0) - p_k(E1)) ),  psi = log(phi/phi_0).

use std::sync::Arc;

use crate::algebra::chow::{embed, ChowClass, ChowModel};
use crate::algebra::rational::{factorial, rat, rat_int};
use crate::algebra::ring::{RatRing, Ring};
use crate::algebra::series::{SeriesRing, TruncSeries};
use crate::error::{Error, Result};

/// A vector bundle presented by rank and Chern classes c_1..c_k, k <= min(rank, d).
#[derive(Clone, Debug)]
pub struct Bundle {
    pub model: Arc<ChowModel>,
    pub rank: u32,
    chern: Vec<ChowClass<RatRing>>,
}

impl Bundle {
    pub fn new(model: &Arc<ChowModel>, rank: u32, chern: Vec<ChowClass<RatRing>>) -> Result<Self> {
        let cap = rank.min(model.dim) as usize;
        if chern.len() > cap {
            return Err(Error::InvalidData(format!(
                "bundle of rank {rank} on a dimension-{} model admits at most {cap} Chern classes, got {}",
                model.dim,
                chern.len()
            )));
        }
        for (i, c) in chern.iter().enumerate() {
            if *c.model != **model {
                return Err(Error::ModelMismatch);
            }
            if !c.is_homogeneous((i + 1) as u32) {
                return Err(Error::InvalidData(format!(
                    "c_{} is not homogeneous of degree {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(Bundle {
            model: Arc::clone(model),
            rank,
            chern,
        })
    }

    pub fn trivial(model: &Arc<ChowModel>, rank: u32) -> Self {
        Bundle {
            model: Arc::clone(model),
            rank,
            chern: vec![],
        }
    }

    /// c_k, with c_0 = 1 and c_k = 0 beyond the stored range.
    pub fn chern(&self, k: u32) -> ChowClass<RatRing> {
        if k == 0 {
            ChowClass::one(&RatRing, &self.model)
        } else {
            self.chern
                .get(k as usize - 1)
                .cloned()
                .unwrap_or_else(|| ChowClass::zero(&RatRing, &self.model))
        }
    }

    /// Total Chern class 1 + c_1 + ... in the truncated ring.
    pub fn total_chern(&self) -> ChowClass<RatRing> {
        let mut acc = ChowClass::one(&RatRing, &self.model);
        for c in &self.chern {
            acc = acc.add(c);
        }
        acc
    }

    /// Whitney sum: ranks add, total Chern classes multiply.
    pub fn direct_sum(&self, other: &Bundle) -> Result<Bundle> {
        if *self.model != *other.model {
            return Err(Error::ModelMismatch);
        }
        let total = self.total_chern().mul(&other.total_chern());
        let rank = self.rank + other.rank;
        let chern = (1..=rank.min(self.model.dim))
            .map(|k| total.degree_part(k))
            .collect();
        Bundle::new(&self.model, rank, chern)
    }
}

/// Power sums p_1..p_d of the Chern roots, from Newton's identities:
/// p_k - c_1 p_{k-1} + ... + (-1)^{k-1} k c_k = 0.
pub fn power_sums(b: &Bundle) -> Vec<ChowClass<RatRing>> {
    let d = b.model.dim;
    let mut p: Vec<ChowClass<RatRing>> = Vec::with_capacity(d as usize);
    for k in 1..=d {
        let mut acc =
            b.chern(k)
                .scale_rat(&rat_int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let term = b.chern(i).mul(&p[(k - i - 1) as usize]);
            acc = acc.add(&term.scale_rat(&rat_int(sign)));
        }
        p.push(acc);
    }
    p
}

/// Chern classes c_1..c_d back from power sums (inverse Newton):
/// c_k = (1/k) sum_{i=1..k} (-1)^{i-1} c_{k-i} p_i.
pub fn chern_from_power_sums(
    model: &Arc<ChowModel>,
    p: &[ChowClass<RatRing>],
) -> Vec<ChowClass<RatRing>> {
    let d = model.dim;
    let mut c: Vec<ChowClass<RatRing>> = vec![ChowClass::one(&RatRing, model)];
    for k in 1..=d as usize {
        let mut acc = ChowClass::zero(&RatRing, model);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&c[k - i].mul(&p[i - 1]).scale_rat(&rat_int(sign)));
        }
        c.push(acc.scale_rat(&rat(1, k as i64)));
    }
    c.remove(0);
    c
}

/// A virtual bundle, represented by rank and Chern character.
#[derive(Clone, Debug)]
pub struct KClass {
    pub rank: i64,
    pub ch: ChowClass<RatRing>,
}

impl KClass {
    pub fn trivial(model: &Arc<ChowModel>, rank: i64) -> Self {
        KClass {
            rank,
            ch: ChowClass::constant(&RatRing, model, rat_int(rank)),
        }
    }

    /// Line bundle with first Chern class `c1`: ch = exp(c1).
    pub fn line(c1: &ChowClass<RatRing>) -> Result<Self> {
        if !c1.is_homogeneous(1) {
            return Err(Error::InvalidData(
                "line bundle class must be homogeneous of degree 1".into(),
            ));
        }
        Ok(KClass {
            rank: 1,
            ch: c1.exp_positive()?,
        })
    }

    /// ch(E) = rank + sum p_k / k!.
    pub fn of_bundle(b: &Bundle) -> Self {
        let mut ch = ChowClass::constant(&RatRing, &b.model, rat_int(b.rank as i64));
        for (k, p) in power_sums(b).iter().enumerate() {
            ch = ch.add(&p.scale_rat(&(rat_int(1) / factorial(k + 1))));
        }
        KClass {
            rank: b.rank as i64,
            ch,
        }
    }

    pub fn model(&self) -> &Arc<ChowModel> {
        &self.ch.model
    }

    pub fn sum(&self, other: &KClass) -> Result<KClass> {
        if *self.model().as_ref() != *other.model().as_ref() {
            return Err(Error::ModelMismatch);
        }
        Ok(KClass {
            rank: self.rank + other.rank,
            ch: self.ch.add(&other.ch),
        })
    }

    pub fn difference(&self, other: &KClass) -> Result<KClass> {
        if *self.model().as_ref() != *other.model().as_ref() {
            return Err(Error::ModelMismatch);
        }
        Ok(KClass {
            rank: self.rank - other.rank,
            ch: self.ch.sub(&other.ch),
        })
    }

    /// Dual: ch_k picks up (-1)^k.
    pub fn dual(&self) -> KClass {
        let mut ch = ChowClass::zero(&RatRing, self.model());
        for k in 0..=self.ch.model.dim {
            let part = self.ch.degree_part(k);
            ch = ch.add(&part.scale_rat(&rat_int(if k % 2 == 0 { 1 } else { -1 })));
        }
        KClass {
            rank: self.rank,
            ch,
        }
    }

    /// Tensor product: Chern characters multiply.
    pub fn tensor(&self, other: &KClass) -> Result<KClass> {
        if *self.model().as_ref() != *other.model().as_ref() {
            return Err(Error::ModelMismatch);
        }
        Ok(KClass {
            rank: self.rank * other.rank,
            ch: self.ch.mul(&other.ch),
        })
    }

    /// c_1 of the determinant, i.e. the degree-1 part of ch.
    pub fn c1_det(&self) -> ChowClass<RatRing> {
        self.ch.degree_part(1)
    }
}

pub type GenusSeries<R> = TruncSeries<R>;

/// Evaluate prod_{roots of e0} phi(x_i) / prod_{roots of e1} phi(u_j).
///
/// `phi` lives in the t-series ring `tring` (order >= model dimension) over
/// an arbitrary coefficient ring; its leading coefficient must be a unit.
pub fn multiplicative_class<R: Ring>(
    tring: &SeriesRing<R>,
    e0: &Bundle,
    e1: &Bundle,
    phi: &GenusSeries<R>,
) -> Result<ChowClass<R>> {
    assert!(*e0.model == *e1.model, "internal model mismatch");
    let base = &tring.base;
    let model = &e0.model;
    let d = model.dim as usize;
    assert!(tring.order >= d, "series order too small for the model");

    let phi0 = tring.coeff(phi, 0);
    let phi0_inv = base
        .try_inv(&phi0)
        .map_err(|_| Error::NonUnitLeadingCoefficient)?;

    // phi/phi_0, with the constant forced to an exact one
    let mut unit = tring.mul(phi, &tring.monomial(0, phi0_inv.clone()));
    unit.coeffs[0] = base.one();
    let psi = tring.log(&unit)?;

    let p0 = power_sums(e0);
    let p1 = power_sums(e1);
    let mut arg = ChowClass::zero(base, model);
    for k in 1..=d {
        let psi_k = tring.coeff(&psi, k);
        if base.is_zero(&psi_k) {
            continue;
        }
        let pk = p0[k - 1].sub(&p1[k - 1]);
        arg = arg.add(&embed(&pk, base).scale(&psi_k));
    }

    let lead = base
        .pow(&phi0, e0.rank as i64 - e1.rank as i64)
        .map_err(|_| Error::NonUnitLeadingCoefficient)?;
    Ok(arg.exp_positive()?.scale(&lead))
}

/// The Todd series t/(1 - e^{-t}) as a rational t-series.
pub fn todd_series(order: usize) -> (SeriesRing<RatRing>, GenusSeries<RatRing>) {
    let tring = SeriesRing::new(RatRing, order, "t");
    // (1 - e^{-t})/t has t^k coefficient (-1)^k/(k+1)!
    let denom = tring.from_fn(|k| rat_int(if k % 2 == 0 { 1 } else { -1 }) / factorial(k + 1));
    let td = tring.try_inv(&denom).expect("unit constant");
    (tring, td)
}

/// Todd class of the virtual bundle [E0] - [E1].
pub fn todd_class(e0: &Bundle, e1: &Bundle) -> Result<ChowClass<RatRing>> {
    let (tring, td) = todd_series(e0.model.dim as usize);
    multiplicative_class(&tring, e0, e1, &td)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    /// Lambda_t: per-root factor 1 + t e^x
    Exterior,
    /// S_t: per-root factor 1/(1 - t e^x)
    Symmetric,
}

/// ch of Lambda_t([E0]-[E1]) or S_t([E0]-[E1]) for a parameter `t` living in
/// the coefficient ring. Virtual classes follow from Lambda_t(E-F) =
/// Lambda_t(E) S_{-t}(F) = Lambda_t(E)/Lambda_t(F), which is exactly the
/// quotient the engine computes.
pub fn lambda_class<R: Ring>(
    tring: &SeriesRing<R>,
    e0: &Bundle,
    e1: &Bundle,
    t: &R::Elem,
    mode: LambdaMode,
) -> Result<ChowClass<R>> {
    let base = &tring.base;
    let exp_root = tring.exp_linear(&base.one());
    let t_const = tring.monomial(0, t.clone());
    let phi = match mode {
        LambdaMode::Exterior => tring.add(&tring.one(), &tring.mul(&t_const, &exp_root)),
        LambdaMode::Symmetric => {
            let denom = tring.sub(&tring.one(), &tring.mul(&t_const, &exp_root));
            tring
                .try_inv(&denom)
                .map_err(|_| Error::NonUnitLeadingCoefficient)?
        }
    };
    multiplicative_class(tring, e0, e1, &phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chow::Generator;
    use crate::algebra::expr::parse_class;

    fn line_model() -> Arc<ChowModel> {
        ChowModel::new(
            vec![Generator {
                name: "x".into(),
                degree: 1,
            }],
            2,
        )
        .unwrap()
    }

    /// Model with two degree-1 roots a, b for splitting-principle oracles.
    fn two_root_model(d: u32) -> Arc<ChowModel> {
        ChowModel::new(
            vec![
                Generator {
                    name: "a".into(),
                    degree: 1,
                },
                Generator {
                    name: "b".into(),
                    degree: 1,
                },
            ],
            d,
        )
        .unwrap()
    }

    #[test]
    fn power_sums_single_root() {
        let m = line_model();
        let x = parse_class(&m, "x").unwrap();
        let b = Bundle::new(&m, 1, vec![x.clone()]).unwrap();
        let p = power_sums(&b);
        assert!(p[0].eq(&x));
        assert!(p[1].eq(&x.mul(&x)));
    }

    #[test]
    fn power_sums_match_two_root_expansion() {
        // rank 2 with c1 = a+b, c2 = ab: p_k must be a^k + b^k
        let m = two_root_model(4);
        let a = parse_class(&m, "a").unwrap();
        let b = parse_class(&m, "b").unwrap();
        let bundle = Bundle::new(&m, 2, vec![a.add(&b), a.mul(&b)]).unwrap();
        let p = power_sums(&bundle);
        for k in 1..=4u32 {
            let oracle = a.pow(k).add(&b.pow(k));
            assert!(p[(k - 1) as usize].eq(&oracle), "p_{k}");
        }
        // and inverse Newton returns the elementary symmetric functions
        let c = chern_from_power_sums(&m, &p);
        assert!(c[0].eq(&a.add(&b)));
        assert!(c[1].eq(&a.mul(&b)));
        assert!(c[2].is_zero());
        assert!(c[3].is_zero());
    }

    #[test]
    fn newton_p3() {
        // p3 = c1^3 - 3 c1 c2 + 3 c3 on a rank-3 bundle
        let m = ChowModel::new(
            vec![Generator {
                name: "h".into(),
                degree: 1,
            }],
            3,
        )
        .unwrap();
        let h = parse_class(&m, "h").unwrap();
        let c1 = h.scale_rat(&rat_int(2));
        let c2 = parse_class(&m, "3*h^2").unwrap();
        let c3 = parse_class(&m, "5*h^3").unwrap();
        let b = Bundle::new(&m, 3, vec![c1.clone(), c2.clone(), c3.clone()]).unwrap();
        let p = power_sums(&b);
        let oracle = c1
            .pow(3)
            .sub(&c1.mul(&c2).scale_rat(&rat_int(3)))
            .add(&c3.scale_rat(&rat_int(3)));
        assert!(p[2].eq(&oracle));
    }

    #[test]
    fn chern_character_rank_two() {
        let m = two_root_model(2);
        let a = parse_class(&m, "a").unwrap();
        let b = parse_class(&m, "b").unwrap();
        let bundle = Bundle::new(&m, 2, vec![a.add(&b), a.mul(&b)]).unwrap();
        let ch = KClass::of_bundle(&bundle);
        // e^a + e^b through degree 2
        let oracle = a.exp_positive().unwrap().add(&b.exp_positive().unwrap());
        assert!(ch.ch.eq(&oracle));
        assert_eq!(ch.rank, 2);
    }

    #[test]
    fn dual_and_tensor_and_det() {
        let m = line_model();
        let x = parse_class(&m, "x").unwrap();
        let oa = KClass::line(&x.scale_rat(&rat_int(3))).unwrap();
        let ob = KClass::line(&x.scale_rat(&rat_int(-1))).unwrap();
        // dual flips odd parts: ch(O(3))^dual = ch(O(-3))
        let odual = oa.dual();
        let o_minus3 = KClass::line(&x.scale_rat(&rat_int(-3))).unwrap();
        assert!(odual.ch.eq(&o_minus3.ch));
        assert!(odual.dual().ch.eq(&oa.ch));
        // tensor of lines adds c1
        let prod = oa.tensor(&ob).unwrap();
        assert!(prod.c1_det().eq(&x.scale_rat(&rat_int(2))));
        // virtual canonical data: c1_det of a difference
        let e0 = Bundle::new(&m, 1, vec![x.scale_rat(&rat_int(2))]).unwrap();
        let e1 = Bundle::new(&m, 1, vec![x.scale_rat(&rat_int(5))]).unwrap();
        let t = KClass::of_bundle(&e0)
            .difference(&KClass::of_bundle(&e1))
            .unwrap();
        assert!(t.c1_det().eq(&x.scale_rat(&rat_int(-3))));
    }

    #[test]
    fn tensor_is_commutative_and_associative() {
        let m = two_root_model(3);
        let a = parse_class(&m, "a").unwrap();
        let b = parse_class(&m, "b").unwrap();
        let e = KClass::of_bundle(&Bundle::new(&m, 2, vec![a.add(&b), a.mul(&b)]).unwrap());
        let f = KClass::line(&a.scale_rat(&rat_int(2))).unwrap();
        let g = KClass::line(&b.neg()).unwrap();
        assert!(e.tensor(&f).unwrap().ch.eq(&f.tensor(&e).unwrap().ch));
        let lhs = e.tensor(&f).unwrap().tensor(&g).unwrap();
        let rhs = e.tensor(&f.tensor(&g).unwrap()).unwrap();
        assert!(lhs.ch.eq(&rhs.ch));
        assert_eq!(lhs.rank, rhs.rank);
    }

    #[test]
    fn todd_expansion_line_bundle() {
        // td of a line with root x: 1 + x/2 + x^2/12
        let m = line_model();
        let x = parse_class(&m, "x").unwrap();
        let b = Bundle::new(&m, 1, vec![x.clone()]).unwrap();
        let td = todd_class(&b, &Bundle::trivial(&m, 0)).unwrap();
        let expected = ChowClass::one(&RatRing, &m)
            .add(&x.scale_rat(&rat(1, 2)))
            .add(&x.mul(&x).scale_rat(&rat(1, 12)));
        assert!(td.eq(&expected));
    }

    #[test]
    fn todd_is_multiplicative_on_virtual_classes() {
        let m = two_root_model(3);
        let a = parse_class(&m, "a").unwrap();
        let b = parse_class(&m, "2*b").unwrap();
        let e0 = Bundle::new(&m, 2, vec![a.add(&b), a.mul(&b)]).unwrap();
        let e1 = Bundle::new(&m, 1, vec![parse_class(&m, "a + 3*b").unwrap()]).unwrap();
        // td(E0 - E1) * td(E1) = td(E0)
        let lhs = todd_class(&e0, &e1)
            .unwrap()
            .mul(&todd_class(&e1, &Bundle::trivial(&m, 0)).unwrap());
        let rhs = todd_class(&e0, &Bundle::trivial(&m, 0)).unwrap();
        assert!(lhs.eq(&rhs));
        // E0 = E1 collapses to 1
        let id = todd_class(&e0, &e0).unwrap();
        assert!(id.eq(&ChowClass::one(&RatRing, &m)));
    }

    #[test]
    fn total_chern_via_one_plus_t() {
        // phi(t) = 1 + t gives the total Chern class
        let m = two_root_model(2);
        let a = parse_class(&m, "a").unwrap();
        let b = parse_class(&m, "b").unwrap();
        let bundle = Bundle::new(&m, 2, vec![a.add(&b), a.mul(&b)]).unwrap();
        let tring = SeriesRing::new(RatRing, 2, "t");
        let phi = tring.add(&tring.one(), &tring.gen());
        let c = multiplicative_class(&tring, &bundle, &Bundle::trivial(&m, 0), &phi).unwrap();
        assert!(c.eq(&bundle.total_chern()));
    }

    #[test]
    fn lambda_defining_identity() {
        // Lambda_t(E) * S_{-t}(E) = 1 over the y-series ring
        let m = two_root_model(3);
        let a = parse_class(&m, "a").unwrap();
        let b = parse_class(&m, "b").unwrap();
        let bundle = Bundle::new(&m, 2, vec![a.add(&b), a.mul(&b)]).unwrap();
        let yring = SeriesRing::new(RatRing, 6, "y");
        let tring = SeriesRing::new(yring.clone(), 3, "t");
        let none = Bundle::trivial(&m, 0);
        let t_param = yring.gen();
        let lam = lambda_class(&tring, &bundle, &none, &t_param, LambdaMode::Exterior).unwrap();
        let sym = lambda_class(
            &tring,
            &bundle,
            &none,
            &yring.neg(&t_param),
            LambdaMode::Symmetric,
        )
        .unwrap();
        let prod = lam.mul(&sym);
        assert!(prod.eq(&ChowClass::one(&tring.base, &m)));
        // Lambda_t of a trivial line is 1 + t
        let line = Bundle::trivial(&m, 1);
        let l = lambda_class(&tring, &line, &none, &t_param, LambdaMode::Exterior).unwrap();
        let expected = ChowClass::constant(&tring.base, &m, yring.add(&yring.one(), &t_param));
        assert!(l.eq(&expected));
    }
}
