//! Virtual Hirzebruch-Riemann-Roch, the chi_-y genus, Euler number,
//! signature, and virtual Chern numbers.
//!
//! chi_-y is computed by the terminating u-substitution algorithm: with
//! g(t,u) = ut + t e^{-t}/(1-e^{-t}) (a unit series in t with u-polynomial
//! coefficients), the class h(u) = prod g(x_i,u) / prod g(u_j,u) is a
//! polynomial in u of degree at most d, its u^l coefficient is the slice X^l,
//! and the genus assembles as sum_l (1-y)^{d-l} integral(X^l ch V). The
//! infinite geometric-series expansion in y exists only as a cross-check
//! oracle (see the verify module), never as the production path.

use std::sync::Arc;

use crate::algebra::chow::{assemble_y_powers, ChowClass, ChowModel, IntegralFunctional};
use crate::algebra::poly::PolyRing;
use crate::algebra::rational::{is_integer, rat_int, Rational};
use crate::algebra::ring::{RatRing, Ring};
use crate::algebra::series::SeriesRing;
use crate::error::{Error, Result};
use crate::ktheory::{
    chern_from_power_sums, multiplicative_class, power_sums, todd_class, Bundle, KClass,
};

/// A virtually smooth space: truncated model, obstruction-theory pair, and
/// the integration functional standing for the virtual fundamental class.
#[derive(Clone, Debug)]
pub struct VirtualSpace {
    pub model: Arc<ChowModel>,
    pub e0: Bundle,
    pub e1: Bundle,
    pub integral: IntegralFunctional,
}

impl VirtualSpace {
    pub fn new(
        model: &Arc<ChowModel>,
        e0: Bundle,
        e1: Bundle,
        integral: IntegralFunctional,
    ) -> Result<Self> {
        if *e0.model != **model || *e1.model != **model || *integral.model != **model {
            return Err(Error::ModelMismatch);
        }
        if e0.rank < e1.rank || e0.rank - e1.rank != model.dim {
            return Err(Error::InvalidData(format!(
                "rank(E0) - rank(E1) = {} does not match the declared dimension {}",
                e0.rank as i64 - e1.rank as i64,
                model.dim
            )));
        }
        Ok(VirtualSpace {
            model: Arc::clone(model),
            e0,
            e1,
            integral,
        })
    }

    pub fn dim(&self) -> u32 {
        self.model.dim
    }
}

/// [E0] - [E1] as a K-class; its rank is the virtual dimension.
pub fn virtual_tangent(x: &VirtualSpace) -> KClass {
    KClass::of_bundle(&x.e0)
        .difference(&KClass::of_bundle(&x.e1))
        .expect("same model by construction")
}

/// c_1 of the virtual canonical bundle: minus the degree-1 part of ch(T).
pub fn virtual_canonical_c1(x: &VirtualSpace) -> ChowClass<RatRing> {
    virtual_tangent(x).c1_det().neg()
}

/// The virtual canonical bundle as a line K-class.
pub fn virtual_canonical(x: &VirtualSpace) -> KClass {
    KClass::line(&virtual_canonical_c1(x)).expect("degree-1 class")
}

/// Chern classes c_1..c_d of the virtual tangent bundle, via power sums of
/// the pair and inverse Newton (exact division by k!, no root splitting).
pub fn tangent_chern_classes(x: &VirtualSpace) -> Vec<ChowClass<RatRing>> {
    let p0 = power_sums(&x.e0);
    let p1 = power_sums(&x.e1);
    let p: Vec<ChowClass<RatRing>> = p0.iter().zip(&p1).map(|(a, b)| a.sub(b)).collect();
    chern_from_power_sums(&x.model, &p)
}

/// Virtual holomorphic Euler characteristic: integral of ch(V) td(T).
pub fn chi_vir(x: &VirtualSpace, v: &KClass) -> Result<Rational> {
    if *v.model().as_ref() != *x.model {
        return Err(Error::ModelMismatch);
    }
    let td = todd_class(&x.e0, &x.e1)?;
    Ok(x.integral.integrate(&v.ch.mul(&td)))
}

/// The chi_-y class: y-free slices X^0..X^d plus the assembled polynomial in
/// y with class coefficients, sum_l (1-y)^{d-l} X^l.
#[derive(Clone, Debug)]
pub struct ChiYClass {
    pub slices: Vec<ChowClass<RatRing>>,
    /// index = power of y
    pub assembled: Vec<ChowClass<RatRing>>,
}

/// Production algorithm for the chi_-y class.
pub fn chi_y_class(x: &VirtualSpace) -> Result<ChiYClass> {
    let d = x.model.dim as usize;
    let uring = PolyRing::new(RatRing, "u");
    let tring = SeriesRing::new(uring.clone(), d, "t");

    // g(t,u) = ut + t/(e^t - 1); the second summand is the unit series
    // inverting sum t^k/(k+1)!.
    let denom = tring.from_fn(|k| {
        uring.from_rational(&(rat_int(1) / crate::algebra::rational::factorial(k + 1)))
    });
    let mut g = tring.try_inv(&denom).expect("unit constant");
    g = tring.add(&g, &tring.monomial(1, uring.gen()));

    let h = multiplicative_class(&tring, &x.e0, &x.e1, &g)?;
    let slices = h.upoly_slices()?;
    // the u^l coefficient lives in degrees >= l; anything below signals a
    // kernel bug
    for (l, s) in slices.iter().enumerate() {
        for k in 0..l as u32 {
            if !s.degree_part(k).is_zero() {
                return Err(Error::AssertionFailure(format!(
                    "slice X^{l} has a nonzero part in degree {k}"
                )));
            }
        }
    }
    let assembled = assemble_y_powers(&slices, d);
    Ok(ChiYClass { slices, assembled })
}

/// Polynomial in y with exact rational coefficients, degree <= d.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiYPolynomial {
    /// index = power of y, length d+1
    pub coeffs: Vec<Rational>,
}

impl ChiYPolynomial {
    pub fn eval(&self, y: &Rational) -> Rational {
        let mut acc = rat_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    pub fn at_zero(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(|| rat_int(0))
    }

    /// Degree after dropping trailing zeros.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !num::Zero::is_zero(c))
            .unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(is_integer)
    }
}

/// chi_-y with coefficients in V: sum_l (1-y)^{d-l} integral(X^l ch V).
pub fn chi_minus_y(x: &VirtualSpace, v: &KClass) -> Result<ChiYPolynomial> {
    if *v.model().as_ref() != *x.model {
        return Err(Error::ModelMismatch);
    }
    let d = x.model.dim as usize;
    let class = chi_y_class(x)?;
    let mut coeffs = vec![rat_int(0); d + 1];
    for (j, a) in class.assembled.iter().enumerate() {
        coeffs[j] = x.integral.integrate(&a.mul(&v.ch));
    }
    Ok(ChiYPolynomial { coeffs })
}

/// Virtual Euler number (y = 1) and signature (y = -1).
///
/// The Euler number is additionally recomputed as the integral of c_d(T); a
/// disagreement between the two routes is a kernel bug and surfaces as
/// `AssertionFailure`.
pub fn euler_signature(x: &VirtualSpace) -> Result<(Rational, Rational)> {
    let poly = chi_minus_y(x, &KClass::trivial(&x.model, 1))?;
    let e = poly.eval(&rat_int(1));
    let sigma = poly.eval(&rat_int(-1));
    let e_hopf = if x.model.dim == 0 {
        x.integral.integrate(&ChowClass::one(&RatRing, &x.model))
    } else {
        let cs = tangent_chern_classes(x);
        x.integral.integrate(&cs[x.model.dim as usize - 1])
    };
    if e != e_hopf {
        return Err(Error::AssertionFailure(format!(
            "Euler number routes disagree: chi at y=1 gives {e}, top Chern class gives {e_hopf}"
        )));
    }
    Ok((e, sigma))
}

/// Virtual Chern number for a partition I = (i_1, ..., i_r) with
/// sum k i_k = d: the integral of prod c_k(T)^{i_k}.
pub fn chern_number(x: &VirtualSpace, partition: &[u32]) -> Result<Rational> {
    let weighted: u32 = partition
        .iter()
        .enumerate()
        .map(|(k, i)| (k as u32 + 1) * i)
        .sum();
    if weighted != x.model.dim {
        return Err(Error::PartitionDegreeMismatch {
            expected: x.model.dim,
            got: weighted,
        });
    }
    let cs = tangent_chern_classes(x);
    let mut acc = ChowClass::one(&RatRing, &x.model);
    for (k, &i) in partition.iter().enumerate() {
        for _ in 0..i {
            acc = acc.mul(&cs[k]);
        }
    }
    Ok(x.integral.integrate(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::verify::instances::{point_space, proj_space, twisted_point};

    #[test]
    fn tangent_and_canonical_of_p1() {
        let p1 = proj_space(1);
        let t = virtual_tangent(&p1);
        assert_eq!(t.rank, 1);
        let h = crate::algebra::expr::parse_class(&p1.model, "2*h").unwrap();
        assert!(t.ch.degree_part(1).eq(&h));
        assert!(virtual_canonical_c1(&p1).eq(&h.neg()));
    }

    #[test]
    fn hrr_on_projective_spaces() {
        // chi(P^n, O(k)) = C(n+k, n)
        for n in 1..=3u32 {
            let x = proj_space(n);
            let h = crate::algebra::expr::parse_class(&x.model, "h").unwrap();
            for k in -5..=5i64 {
                let v = KClass::line(&h.scale_rat(&rat_int(k))).unwrap();
                let got = chi_vir(&x, &v).unwrap();
                let expected = crate::algebra::rational::binomial_gen(n as i64 + k, n);
                assert_eq!(got, expected, "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn rank_times_degree_in_dimension_zero() {
        let x = point_space(rat_int(5));
        let v = KClass::trivial(&x.model, 3);
        assert_eq!(chi_vir(&x, &v).unwrap(), rat_int(15));
    }

    #[test]
    fn chi_y_class_of_p1() {
        let p1 = proj_space(1);
        let c = chi_y_class(&p1).unwrap();
        let one = ChowClass::one(&RatRing, &p1.model);
        let h = crate::algebra::expr::parse_class(&p1.model, "h").unwrap();
        assert!(c.slices[0].eq(&one.sub(&h)));
        assert!(c.slices[1].eq(&h.scale_rat(&rat_int(2))));
        // point: the class collapses to X^0 = 1
        let pt = point_space(rat_int(1));
        let cpt = chi_y_class(&pt).unwrap();
        assert!(cpt.slices[0].eq(&ChowClass::one(&RatRing, &pt.model)));
    }

    #[test]
    fn chi_y_polynomials_of_projective_spaces() {
        let p1 = proj_space(1);
        let o = KClass::trivial(&p1.model, 1);
        assert_eq!(
            chi_minus_y(&p1, &o).unwrap().coeffs,
            vec![rat_int(1), rat_int(1)]
        );
        let p2 = proj_space(2);
        let o2 = KClass::trivial(&p2.model, 1);
        assert_eq!(
            chi_minus_y(&p2, &o2).unwrap().coeffs,
            vec![rat_int(1), rat_int(1), rat_int(1)]
        );
        // point with rank-r coefficients stays r
        let pt = point_space(rat_int(1));
        assert_eq!(
            chi_minus_y(&pt, &KClass::trivial(&pt.model, 4))
                .unwrap()
                .coeffs,
            vec![rat_int(4)]
        );
    }

    #[test]
    fn euler_and_signature() {
        let (e1, s1) = euler_signature(&proj_space(1)).unwrap();
        assert_eq!((e1, s1), (rat_int(2), rat_int(0)));
        let (e2, s2) = euler_signature(&proj_space(2)).unwrap();
        assert_eq!((e2, s2), (rat_int(3), rat_int(1)));
        // dimension-zero twist: e = deg [X]^vir
        let (e, _) = euler_signature(&twisted_point(rat(7, 2))).unwrap();
        assert_eq!(e, rat(7, 2));
    }

    #[test]
    fn chi_y_of_p3() {
        let p3 = proj_space(3);
        let o = KClass::trivial(&p3.model, 1);
        assert_eq!(
            chi_minus_y(&p3, &o).unwrap().coeffs,
            vec![rat_int(1), rat_int(1), rat_int(1), rat_int(1)]
        );
        let (e, s) = euler_signature(&p3).unwrap();
        assert_eq!((e, s), (rat_int(4), rat_int(0)));
    }

    #[test]
    fn chern_numbers() {
        assert_eq!(chern_number(&proj_space(1), &[1]).unwrap(), rat_int(2));
        // c_2(T_{P^2}) = 3 h^2 and c_1^2 = 9 h^2
        assert_eq!(chern_number(&proj_space(2), &[0, 1]).unwrap(), rat_int(3));
        assert_eq!(chern_number(&proj_space(2), &[2]).unwrap(), rat_int(9));
        assert_eq!(
            chern_number(&proj_space(2), &[1]),
            Err(Error::PartitionDegreeMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn model_mismatch_is_reported() {
        let p1 = proj_space(1);
        let p2 = proj_space(2);
        let v = KClass::trivial(&p2.model, 1);
        assert_eq!(chi_vir(&p1, &v), Err(Error::ModelMismatch));
        assert_eq!(chi_minus_y(&p1, &v), Err(Error::ModelMismatch));
    }
}
