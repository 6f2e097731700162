//! Randomized property suites and the curated instance library.
//!
//! Everything here is driven by a seeded RNG, so reports are reproducible.
//! The suites are the executable form of the kernel's invariants: ring
//! axioms, Newton round-trips, the chi_-y polynomiality and leading-term
//! facts, the global exact identities (symmetry, Serre duality, Hopf index),
//! the elliptic-genus specializations, and localization consistency.
//!
//! The geometric-series expansion of chi_-y in y lives here as the
//! independent oracle for the terminating u-substitution algorithm: it
//! computes the same genus through a finite y-order by brute truncation and
//! never touches the production path.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::chow::{ChowClass, ChowModel, Generator, IntegralFunctional};
use crate::algebra::eps::EpsRing;
use crate::algebra::laurent::s_ring;
use crate::algebra::poly::PolyRing;
use crate::algebra::ratfun::RatFunRing;
use crate::algebra::rational::{binomial, rat, rat_int, Rational};
use crate::algebra::ring::{RatRing, Ring};
use crate::algebra::series::SeriesRing;
use crate::genera::{
    chern_number, chi_minus_y, chi_vir, chi_y_class, euler_signature, tangent_chern_classes,
    VirtualSpace,
};
use crate::ktheory::{
    chern_from_power_sums, multiplicative_class, power_sums, todd_series, Bundle, KClass,
};
use crate::localization::{
    default_window, euler_additivity, localized_chi, localized_chi_y, localized_elliptic,
    EquivariantBundle, FixedComponent, MovingPart,
};

/// Curated instances: classical spaces and localization data whose exact
/// answers are known independently.
pub mod instances {
    use super::*;

    /// Dimension-zero space with deg [X]^vir = `deg`.
    pub fn point_space(deg: Rational) -> VirtualSpace {
        let model = ChowModel::point();
        let f = IntegralFunctional::new(&model, vec![(model.unit_monomial(), deg)]).unwrap();
        VirtualSpace::new(
            &model,
            Bundle::trivial(&model, 0),
            Bundle::trivial(&model, 0),
            f,
        )
        .unwrap()
    }

    /// P^n with its tangent bundle: c(T) = (1+h)^{n+1}, integral h^n -> 1.
    pub fn proj_space(n: u32) -> VirtualSpace {
        let model = ChowModel::new(
            vec![Generator {
                name: "h".into(),
                degree: 1,
            }],
            n,
        )
        .unwrap();
        let h = ChowClass::generator(&RatRing, &model, "h").unwrap();
        let chern: Vec<ChowClass<RatRing>> = (1..=n)
            .map(|k| h.pow(k).scale_rat(&binomial(n + 1, k)))
            .collect();
        let e0 = Bundle::new(&model, n, chern).unwrap();
        let top = model.monomial_from_exps(vec![n]).unwrap();
        let f = IntegralFunctional::new(&model, vec![(top, rat_int(1))]).unwrap();
        VirtualSpace::new(&model, e0, Bundle::trivial(&model, 0), f).unwrap()
    }

    /// Dimension-zero obstruction twist: rank-1 tangent against rank-1
    /// obstruction, functional 1 -> a.
    pub fn twisted_point(a: Rational) -> VirtualSpace {
        let model = ChowModel::point();
        let f = IntegralFunctional::new(&model, vec![(model.unit_monomial(), a)]).unwrap();
        VirtualSpace::new(
            &model,
            Bundle::trivial(&model, 1),
            Bundle::trivial(&model, 1),
            f,
        )
        .unwrap()
    }

    /// A curve-like pair with vanishing virtual canonical class:
    /// rank 2 over rank 1 with matching first Chern classes.
    pub fn virtual_cy_curve() -> VirtualSpace {
        let model = ChowModel::new(
            vec![Generator {
                name: "h".into(),
                degree: 1,
            }],
            1,
        )
        .unwrap();
        let h3 = ChowClass::generator(&RatRing, &model, "h")
            .unwrap()
            .scale_rat(&rat_int(3));
        let e0 = Bundle::new(&model, 2, vec![h3.clone()]).unwrap();
        let e1 = Bundle::new(&model, 1, vec![h3]).unwrap();
        let top = model.monomial_from_exps(vec![1]).unwrap();
        let f = IntegralFunctional::new(&model, vec![(top, rat_int(1))]).unwrap();
        VirtualSpace::new(&model, e0, e1, f).unwrap()
    }

    /// K3-type surface: rank-2 tangent data with c1 = 0 and c2 = 24 h^2.
    /// chi(O) = 2, e = 24, sigma = -16, and the elliptic genus is the
    /// classical weight-0 index-1 weak Jacobi form (twice the generator).
    pub fn k3_surface() -> VirtualSpace {
        let model = ChowModel::new(
            vec![Generator {
                name: "h".into(),
                degree: 1,
            }],
            2,
        )
        .unwrap();
        let h = ChowClass::generator(&RatRing, &model, "h").unwrap();
        let c2 = h.pow(2).scale_rat(&rat_int(24));
        let e0 = Bundle::new(&model, 2, vec![ChowClass::zero(&RatRing, &model), c2]).unwrap();
        let top = model.monomial_from_exps(vec![2]).unwrap();
        let f = IntegralFunctional::new(&model, vec![(top, rat_int(1))]).unwrap();
        VirtualSpace::new(&model, e0, Bundle::trivial(&model, 0), f).unwrap()
    }

    /// A space as its own single fixed component: empty normal bundle,
    /// weight-0 trivial lift of O.
    pub fn whole_space_component(x: &VirtualSpace) -> FixedComponent {
        let v = EquivariantBundle::new(vec![(0, Bundle::trivial(&x.model, 1))]).unwrap();
        FixedComponent::new(x.clone(), MovingPart::empty(), v).unwrap()
    }

    /// P^1 with the standard torus action as two fixed points, with O(k)
    /// lifted with weights k (at the +1 tangent point) and 0.
    pub fn p1_fixed_points(k: i64) -> Vec<FixedComponent> {
        p1_fixed_points_scaled(k, 1)
    }

    /// Same family under the reparametrized torus: tangent weights +-w.
    pub fn p1_fixed_points_scaled(k: i64, w: i64) -> Vec<FixedComponent> {
        assert!(w != 0);
        let mk = |tangent: i64, lift: i64| {
            let pt = point_space(rat_int(1));
            let model = pt.model.clone();
            let normal = MovingPart::new(
                EquivariantBundle::new(vec![(tangent, Bundle::trivial(&model, 1))]).unwrap(),
                EquivariantBundle::empty(),
            )
            .unwrap();
            let v = EquivariantBundle::new(vec![(lift, Bundle::trivial(&model, 1))]).unwrap();
            FixedComponent::new(pt, normal, v).unwrap()
        };
        vec![mk(w, k * w), mk(-w, 0)]
    }

    /// The twist as two fixed points: tangent weights +-1, obstruction lines
    /// of weights w0 and winf in the negative part. Localized chi must give
    /// w0 - winf.
    pub fn obstruction_twist_components(w0: i64, winf: i64) -> Vec<FixedComponent> {
        assert!(w0 != 0 && winf != 0);
        let mk = |tangent: i64, ob: i64| {
            let pt = point_space(rat_int(1));
            let model = pt.model.clone();
            let normal = MovingPart::new(
                EquivariantBundle::new(vec![(tangent, Bundle::trivial(&model, 1))]).unwrap(),
                EquivariantBundle::new(vec![(ob, Bundle::trivial(&model, 1))]).unwrap(),
            )
            .unwrap();
            let v = EquivariantBundle::new(vec![(0, Bundle::trivial(&model, 1))]).unwrap();
            FixedComponent::new(pt, normal, v).unwrap()
        };
        vec![mk(1, w0), mk(-1, winf)]
    }
}

/// Size limits for randomized instances.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_rank: u32,
    pub max_dim: u32,
    pub max_generators: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_rank: 4,
            max_dim: 4,
            max_generators: 3,
        }
    }
}

/// Seeded generators for random models, bundles and spaces.
pub mod random {
    use super::*;

    pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
        rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))
    }

    pub fn model(rng: &mut ChaCha8Rng, bounds: &Bounds) -> Arc<ChowModel> {
        let d = rng.gen_range(0..=bounds.max_dim);
        if d == 0 {
            return ChowModel::point();
        }
        let names = ["a", "b", "c", "e"];
        let count = rng.gen_range(1..=bounds.max_generators.min(names.len()));
        let gens = (0..count)
            .map(|i| Generator {
                name: names[i].into(),
                // mostly degree 1, occasionally 2
                degree: if d >= 2 && rng.gen_ratio(1, 4) { 2 } else { 1 },
            })
            .collect();
        ChowModel::new(gens, d).unwrap()
    }

    pub fn homogeneous_class(
        rng: &mut ChaCha8Rng,
        model: &Arc<ChowModel>,
        k: u32,
    ) -> ChowClass<RatRing> {
        let mut out = ChowClass::zero(&RatRing, model);
        for m in model.monomials_of_degree(k) {
            if rng.gen_ratio(3, 4) {
                out.accumulate(m, &rational(rng));
            }
        }
        out
    }

    pub fn bundle(rng: &mut ChaCha8Rng, model: &Arc<ChowModel>, rank: u32) -> Bundle {
        let chern = (1..=rank.min(model.dim))
            .map(|k| homogeneous_class(rng, model, k))
            .collect();
        Bundle::new(model, rank, chern).unwrap()
    }

    pub fn functional(rng: &mut ChaCha8Rng, model: &Arc<ChowModel>) -> IntegralFunctional {
        let values = model
            .monomials_of_degree(model.dim)
            .into_iter()
            .filter(|_| true)
            .map(|m| (m, rat_int(rng.gen_range(-4..=4))))
            .collect::<Vec<_>>();
        IntegralFunctional::new(model, values).unwrap()
    }

    pub fn space(rng: &mut ChaCha8Rng, bounds: &Bounds) -> VirtualSpace {
        let m = model(rng, bounds);
        let d = m.dim;
        let extra = rng.gen_range(0..=bounds.max_rank.saturating_sub(d));
        let e0 = bundle(rng, &m, d + extra);
        let e1 = bundle(rng, &m, extra);
        VirtualSpace::new(&m, e0, e1, functional(rng, &m)).unwrap()
    }

    /// Space with vanishing virtual canonical class: c1(E1) is forced to
    /// c1(E0) (or both to zero when E1 has rank zero).
    pub fn cy_space(rng: &mut ChaCha8Rng, bounds: &Bounds) -> VirtualSpace {
        let x = space(rng, bounds);
        let model = x.model.clone();
        let d = model.dim;
        if d == 0 {
            return x;
        }
        let c1 = x.e0.chern(1);
        if x.e1.rank == 0 {
            // erase c1(E0) instead
            let mut chern: Vec<ChowClass<RatRing>> =
                (1..=x.e0.rank.min(d)).map(|k| x.e0.chern(k)).collect();
            chern[0] = ChowClass::zero(&RatRing, &model);
            let e0 = Bundle::new(&model, x.e0.rank, chern).unwrap();
            VirtualSpace::new(&model, e0, x.e1.clone(), x.integral.clone()).unwrap()
        } else {
            let mut chern: Vec<ChowClass<RatRing>> =
                (1..=x.e1.rank.min(d)).map(|k| x.e1.chern(k)).collect();
            chern[0] = c1;
            let e1 = Bundle::new(&model, x.e1.rank, chern).unwrap();
            VirtualSpace::new(&model, x.e0.clone(), e1, x.integral.clone()).unwrap()
        }
    }

    /// A genuine bundle to use as coefficients V.
    pub fn v_bundle(rng: &mut ChaCha8Rng, x: &VirtualSpace) -> Bundle {
        let rank = rng.gen_range(1..=2);
        bundle(rng, &x.model, rank)
    }
}

/// The geometric-series oracle: chi_-y(X, V) expanded directly in powers of
/// y through `order`, from the defining per-root series
/// f(t, y) = t/(1-e^{-t}) (1 - y e^{-t}) and its inverse on the dual side.
pub fn chi_y_series_oracle(x: &VirtualSpace, v: &KClass, order: usize) -> Vec<Rational> {
    let yring = SeriesRing::new(RatRing, order, "y");
    let d = x.model.dim as usize;
    let tring = SeriesRing::new(yring.clone(), d, "t");
    let (_, td) = todd_series(d);
    let td_y = tring.from_coeffs(td.coeffs.iter().map(|c| yring.from_rational(c)).collect());
    let lambda_factor = tring.sub(
        &tring.one(),
        &tring.mul(
            &tring.monomial(0, yring.gen()),
            &tring.exp_linear(&yring.from_rational(&rat_int(-1))),
        ),
    );
    let phi = tring.mul(&td_y, &lambda_factor);
    let class = multiplicative_class(&tring, &x.e0, &x.e1, &phi).expect("1-y is a unit");
    let chv = v.ch.map_coeffs(&yring, |c| yring.from_rational(c));
    let series = x.integral.integrate(&class.mul(&chv));
    series.coeffs
}

/// Outcome of one property suite.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub property: String,
    pub detail: String,
    pub instance: Option<CounterInstance>,
}

/// Enough data to rebuild the failing check as an input document.
#[derive(Clone, Debug)]
pub struct CounterInstance {
    pub space: VirtualSpace,
    pub v: Option<Bundle>,
    pub property: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }

    pub fn first_counterexample(&self) -> Option<&CounterInstance> {
        self.suites
            .iter()
            .flat_map(|s| &s.failures)
            .find_map(|f| f.instance.as_ref())
    }
}

/// Named single-instance checks, shared between the randomized suites, the
/// acceptance gate, and the CLI's check tasks.
pub mod checks {
    use super::*;

    pub type CheckResult = std::result::Result<(), String>;

    /// Polynomiality in u plus the leading-term statement: the degree-l part
    /// of the slice X^l is c_l of the virtual tangent bundle.
    pub fn chi_y_leading(x: &VirtualSpace) -> CheckResult {
        let class = chi_y_class(x).map_err(|e| e.to_string())?;
        let cs = tangent_chern_classes(x);
        for (l, slice) in class.slices.iter().enumerate() {
            let lead = slice.degree_part(l as u32);
            let expected = if l == 0 {
                ChowClass::one(&RatRing, &x.model)
            } else {
                cs[l - 1].degree_part(l as u32)
            };
            if !lead.eq(&expected) {
                return Err(format!("slice X^{l} has leading part != c_{l}(T)"));
            }
        }
        Ok(())
    }

    /// The assembled polynomial agrees with the geometric-series oracle
    /// through y-order d+5.
    pub fn chi_y_oracle(x: &VirtualSpace, v: &KClass) -> CheckResult {
        let d = x.model.dim as usize;
        let poly = chi_minus_y(x, v).map_err(|e| e.to_string())?;
        let oracle = chi_y_series_oracle(x, v, d + 5);
        for (j, o) in oracle.iter().enumerate() {
            let p = poly.coeffs.get(j).cloned().unwrap_or_else(|| rat_int(0));
            if p != *o {
                return Err(format!("y^{j}: polynomial {p} vs series oracle {o}"));
            }
        }
        Ok(())
    }

    /// chi_-y(X, V) = y^d chi_-1/y(X, V^dual) as polynomials.
    pub fn symmetry(x: &VirtualSpace, v: &KClass) -> CheckResult {
        let d = x.model.dim as usize;
        let lhs = chi_minus_y(x, v).map_err(|e| e.to_string())?;
        let rhs = chi_minus_y(x, &v.dual()).map_err(|e| e.to_string())?;
        for j in 0..=d {
            if lhs.coeffs[j] != rhs.coeffs[d - j] {
                return Err(format!(
                    "coefficient of y^{j} is {} but reversed dual gives {}",
                    lhs.coeffs[j],
                    rhs.coeffs[d - j]
                ));
            }
        }
        Ok(())
    }

    /// chi(X, V) = (-1)^d chi(X, V^dual tensor K^vir).
    pub fn serre_duality(x: &VirtualSpace, v: &KClass) -> CheckResult {
        let d = x.model.dim;
        let k = crate::genera::virtual_canonical(x);
        let lhs = chi_vir(x, v).map_err(|e| e.to_string())?;
        let tw = v.dual().tensor(&k).map_err(|e| e.to_string())?;
        let rhs = chi_vir(x, &tw).map_err(|e| e.to_string())?;
        let sign = if d.is_multiple_of(2) {
            rhs.clone()
        } else {
            -rhs.clone()
        };
        if lhs != sign {
            return Err(format!("chi = {lhs} but (-1)^d chi(dual x K) = {sign}"));
        }
        Ok(())
    }

    /// chi_-y at y = 0 is the holomorphic Euler characteristic.
    pub fn specialization_y0(x: &VirtualSpace, v: &KClass) -> CheckResult {
        let poly = chi_minus_y(x, v).map_err(|e| e.to_string())?;
        let chi = chi_vir(x, v).map_err(|e| e.to_string())?;
        if poly.at_zero() != chi {
            return Err(format!("value at 0 is {} vs chi {}", poly.at_zero(), chi));
        }
        Ok(())
    }

    /// chi_-y at y = 1 equals rank(V) times the integral of c_d(T); for
    /// V = O this is the Hopf index route, which euler_signature asserts
    /// internally as well. Odd-dimensional signatures vanish.
    pub fn hopf_and_signature(x: &VirtualSpace, v: &KClass) -> CheckResult {
        let d = x.model.dim;
        let poly = chi_minus_y(x, v).map_err(|e| e.to_string())?;
        let cd = if d == 0 {
            ChowClass::one(&RatRing, &x.model)
        } else {
            tangent_chern_classes(x)[d as usize - 1].clone()
        };
        let top = x.integral.integrate(&cd);
        let expected = rat_int(v.rank) * &top;
        if poly.eval(&rat_int(1)) != expected {
            return Err(format!(
                "chi at y=1 is {} but rank(V) c_d integrates to {}",
                poly.eval(&rat_int(1)),
                expected
            ));
        }
        let (_, sigma) = euler_signature(x).map_err(|e| e.to_string())?;
        if d % 2 == 1 && sigma != rat_int(0) {
            return Err(format!("odd-dimensional signature {sigma} != 0"));
        }
        Ok(())
    }

    /// q^0 slice of the elliptic genus is s^{-d} chi_-y at y = s^2; setting
    /// s = 1 collapses to the Euler number with vanishing positive q-orders.
    /// Both assembly routes and denominator clearing are asserted inside
    /// ell_vir itself.
    pub fn elliptic_q0_and_s1(x: &VirtualSpace, q_order: usize) -> CheckResult {
        let r = crate::elliptic::ell_vir(x, None, None, q_order).map_err(|e| e.to_string())?;
        let d = x.model.dim as i64;
        let poly = chi_minus_y(x, &KClass::trivial(&x.model, 1)).map_err(|e| e.to_string())?;
        let sr = s_ring();
        let expected_q0 = sr.from_terms(
            poly.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| (2 * j as i64 - d, c.clone())),
        );
        if !sr.eq(&r.coeffs[0], &expected_q0) {
            return Err("q^0 slice differs from s^{-d} chi_-y".into());
        }
        let vals = r.at_s_one();
        let (e, _) = euler_signature(x).map_err(|e| e.to_string())?;
        if vals[0] != e {
            return Err(format!("value at s=1 is {} but e = {e}", vals[0]));
        }
        for (k, v) in vals.iter().enumerate().skip(1) {
            if *v != rat_int(0) {
                return Err(format!("q^{k} fails to vanish at s=1: {v}"));
            }
        }
        Ok(())
    }

    /// Shift identities for spaces with vanishing virtual canonical class.
    pub fn jacobi(x: &VirtualSpace, q_order: usize) -> CheckResult {
        let r = crate::elliptic::ell_vir(x, None, None, q_order).map_err(|e| e.to_string())?;
        crate::elliptic::jacobi_shift_check(&r).map_err(|e| e.to_string())
    }
}

fn run_case(
    suite: &mut SuiteResult,
    property: &str,
    instance: Option<CounterInstance>,
    outcome: checks::CheckResult,
) {
    suite.cases += 1;
    if let Err(detail) = outcome {
        suite.failures.push(Failure {
            property: property.into(),
            detail,
            instance,
        });
    }
}

/// Ring axioms, inversion, and exp/log round-trips per coefficient variant.
pub fn kernel_suite(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = SuiteResult {
        name: "kernel".into(),
        cases: 0,
        failures: Vec::new(),
    };

    fn axioms<R: Ring>(
        ring: &R,
        name: &str,
        gen: &mut impl FnMut() -> R::Elem,
        cases: usize,
        suite: &mut SuiteResult,
    ) {
        for _ in 0..cases {
            let (a, b, c) = (gen(), gen(), gen());
            let assoc_add = ring.eq(
                &ring.add(&ring.add(&a, &b), &c),
                &ring.add(&a, &ring.add(&b, &c)),
            );
            let comm = ring.eq(&ring.mul(&a, &b), &ring.mul(&b, &a));
            let assoc_mul = ring.eq(
                &ring.mul(&ring.mul(&a, &b), &c),
                &ring.mul(&a, &ring.mul(&b, &c)),
            );
            let distrib = ring.eq(
                &ring.mul(&a, &ring.add(&b, &c)),
                &ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)),
            );
            // precision-aware comparison: a - a over a finite-precision ring
            // is zero on its known range without being structurally exact
            let inverse_add = ring.eq(&ring.add(&a, &ring.neg(&a)), &ring.zero());
            let unit = ring.eq(&ring.mul(&ring.one(), &a), &a);
            let inv_ok = match ring.try_inv(&a) {
                Ok(inv) => ring.is_one(&ring.mul(&a, &inv)),
                Err(_) => true,
            };
            suite.cases += 1;
            if !(assoc_add && comm && assoc_mul && distrib && inverse_add && unit && inv_ok) {
                suite.failures.push(Failure {
                    property: format!("ring axioms ({name})"),
                    detail: format!("violated on {a:?}, {b:?}, {c:?}"),
                    instance: None,
                });
            }
        }
    }

    // RatScalar
    {
        let ring = RatRing;
        let mut g = || random::rational(&mut rng);
        axioms(&ring, "rational", &mut g, cases, &mut suite);
    }
    // UPoly
    {
        let ring = PolyRing::new(RatRing, "u");
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x517cc1b7);
        let mut g = || {
            let deg = rng2.gen_range(0..=3usize);
            ring.from_coeffs((0..=deg).map(|_| random::rational(&mut rng2)).collect())
        };
        axioms(&ring, "u-polynomial", &mut g, cases, &mut suite);
    }
    // QSeries over Laurent polynomials in s
    {
        let ring = SeriesRing::new(s_ring(), 3, "q");
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b9);
        let mut g = || {
            let sr = s_ring();
            ring.from_fn(|_| {
                let n = rng2.gen_range(0..3);
                let mut terms = Vec::with_capacity(n);
                for _ in 0..n {
                    terms.push((rng2.gen_range(-2..=2), random::rational(&mut rng2)));
                }
                sr.from_terms(terms)
            })
        };
        axioms(&ring, "q-series", &mut g, cases, &mut suite);
    }
    // Rational functions in s
    {
        let ring = RatFunRing::new();
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x2545f491);
        let mut g = || {
            let pr = ring.poly_ring().clone();
            let num = pr.from_coeffs(
                (0..=rng2.gen_range(0..=2usize))
                    .map(|_| random::rational(&mut rng2))
                    .collect(),
            );
            let mut den = pr.zero();
            while pr.is_zero(&den) {
                den = pr.from_coeffs(
                    (0..=rng2.gen_range(0..=2usize))
                        .map(|_| random::rational(&mut rng2))
                        .collect(),
                );
            }
            ring.fraction(num, den)
        };
        axioms(&ring, "rational-function", &mut g, cases, &mut suite);
    }
    // EpsLaurent
    {
        let ring = EpsRing::new(-3, 3, 4);
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x6a09e667);
        let mut g = || {
            let mut acc = ring.zero();
            for _ in 0..rng2.gen_range(0..3) {
                acc = ring.add(
                    &acc,
                    &ring.monomial(rng2.gen_range(-2..=2), random::rational(&mut rng2)),
                );
            }
            if rng2.gen_ratio(1, 3) {
                acc = ring.add(&acc, &ring.exp_eps(rng2.gen_range(-2..=2)));
            }
            acc
        };
        axioms(&ring, "eps-laurent", &mut g, cases, &mut suite);
    }

    // Chow-level exp/log/inverse round-trips over rational coefficients
    let bounds = Bounds::default();
    for _ in 0..cases {
        let m = random::model(&mut rng, &bounds);
        let pos = {
            let mut acc = ChowClass::zero(&RatRing, &m);
            for k in 1..=m.dim {
                acc = acc.add(&random::homogeneous_class(&mut rng, &m, k));
            }
            acc
        };
        let outcome: checks::CheckResult = (|| {
            let e = pos.exp_positive().map_err(|e| e.to_string())?;
            if !e.log_unit().map_err(|e| e.to_string())?.eq(&pos) {
                return Err("log(exp(a)) != a".into());
            }
            let unit = ChowClass::one(&RatRing, &m).add(&pos);
            let inv = unit.invert_unit().map_err(|e| e.to_string())?;
            if !unit.mul(&inv).eq(&ChowClass::one(&RatRing, &m)) {
                return Err("a * a^{-1} != 1".into());
            }
            let b = pos.mul(&pos).add(&ChowClass::one(&RatRing, &m));
            if !b.mul(&unit).eq(&unit.mul(&b)) {
                return Err("commutativity failure".into());
            }
            Ok(())
        })();
        run_case(&mut suite, "chow exp/log/invert", None, outcome);
    }

    // truncation is an ideal: products taken in a deeper truncation, then
    // cut, agree with products taken in the shallow ring
    for _ in 0..cases {
        let m = random::model(&mut rng, &bounds);
        let outcome: checks::CheckResult = (|| {
            let deep = ChowModel::new(m.generators.clone(), m.dim + 2).unwrap();
            let lift = |c: &ChowClass<RatRing>| {
                let mut out = ChowClass::zero(&RatRing, &deep);
                for (mono, v) in &c.terms {
                    out.accumulate(deep.monomial_from_exps(mono.exps.clone()).unwrap(), v);
                }
                out
            };
            let cut = |c: &ChowClass<RatRing>| {
                let mut out = ChowClass::zero(&RatRing, &m);
                for (mono, v) in &c.terms {
                    if mono.degree <= m.dim {
                        out.accumulate(m.monomial_from_exps(mono.exps.clone()).unwrap(), v);
                    }
                }
                out
            };
            let a = {
                let mut acc = ChowClass::zero(&RatRing, &m);
                for k in 0..=m.dim {
                    acc = acc.add(&random::homogeneous_class(&mut rng, &m, k));
                }
                acc
            };
            let b = {
                let mut acc = ChowClass::zero(&RatRing, &m);
                for k in 0..=m.dim {
                    acc = acc.add(&random::homogeneous_class(&mut rng, &m, k));
                }
                acc
            };
            if !cut(&lift(&a).mul(&lift(&b))).eq(&a.mul(&b)) {
                return Err("truncation is not an ideal".into());
            }
            // integrate is Rational-linear
            let f = random::functional(&mut rng, &m);
            let (alpha, beta) = (rat(3, 2), rat(-5, 7));
            let lhs: Rational = f.integrate(&a.scale_rat(&alpha).add(&b.scale_rat(&beta)));
            let rhs = alpha * f.integrate(&a) + beta * f.integrate(&b);
            if lhs != rhs {
                return Err("integration is not Rational-linear".into());
            }
            Ok(())
        })();
        run_case(
            &mut suite,
            "truncation ideal / linear integration",
            None,
            outcome,
        );
    }

    suite
}

/// Newton identities: power sums against a two-root expansion and the
/// inverse reconstruction, plus Whitney multiplicativity of the engine.
pub fn newton_suite(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = Bounds {
        max_rank: 5,
        max_dim: 4,
        max_generators: 3,
    };
    let mut suite = SuiteResult {
        name: "newton".into(),
        cases: 0,
        failures: Vec::new(),
    };
    for _ in 0..cases {
        let m = random::model(&mut rng, &bounds);
        let rank = rng.gen_range(0..=bounds.max_rank);
        let b = random::bundle(&mut rng, &m, rank);
        let outcome: checks::CheckResult = (|| {
            let p = power_sums(&b);
            let c = chern_from_power_sums(&m, &p);
            for k in 1..=m.dim {
                let expected = b.chern(k);
                if !c[k as usize - 1].eq(&expected) {
                    return Err(format!("inverse Newton fails at c_{k}"));
                }
            }
            // Whitney: class(E + F) = class(E) class(F) for the Todd series
            let extra_rank = rng.gen_range(0..=2);
            let f = random::bundle(&mut rng, &m, extra_rank);
            let sum = b.direct_sum(&f).map_err(|e| e.to_string())?;
            let none = Bundle::trivial(&m, 0);
            let lhs = crate::ktheory::todd_class(&sum, &none).map_err(|e| e.to_string())?;
            let rhs = crate::ktheory::todd_class(&b, &none)
                .map_err(|e| e.to_string())?
                .mul(&crate::ktheory::todd_class(&f, &none).map_err(|e| e.to_string())?);
            if !lhs.eq(&rhs) {
                return Err("Todd class not multiplicative on a Whitney sum".into());
            }
            Ok(())
        })();
        run_case(&mut suite, "newton round-trip", None, outcome);
    }
    suite
}

/// The chi_-y properties on random spaces.
pub fn genera_suite(seed: u64, cases: usize, bounds: &Bounds) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = SuiteResult {
        name: "genera".into(),
        cases: 0,
        failures: Vec::new(),
    };
    for _ in 0..cases {
        let x = random::space(&mut rng, bounds);
        let vb = random::v_bundle(&mut rng, &x);
        let v = KClass::of_bundle(&vb);
        let instance = |prop: &str| {
            Some(CounterInstance {
                space: x.clone(),
                v: Some(vb.clone()),
                property: prop.into(),
            })
        };
        run_case(
            &mut suite,
            "chi_y_leading",
            instance("chi_y_leading"),
            checks::chi_y_leading(&x),
        );
        run_case(
            &mut suite,
            "chi_y_oracle",
            instance("chi_y_oracle"),
            checks::chi_y_oracle(&x, &v),
        );
        run_case(
            &mut suite,
            "symmetry",
            instance("symmetry"),
            checks::symmetry(&x, &v),
        );
        run_case(
            &mut suite,
            "serre_duality",
            instance("serre_duality"),
            checks::serre_duality(&x, &v),
        );
        run_case(
            &mut suite,
            "specialization_y0",
            instance("specialization_y0"),
            checks::specialization_y0(&x, &v),
        );
        run_case(
            &mut suite,
            "hopf_signature",
            instance("hopf_signature"),
            checks::hopf_and_signature(&x, &v),
        );
        // virtual Chern numbers exist for any partition of d
        if x.model.dim >= 1 {
            let r = chern_number(&x, &{
                let mut p = vec![0u32; x.model.dim as usize];
                p[x.model.dim as usize - 1] = 1;
                p
            });
            run_case(
                &mut suite,
                "chern_number_total",
                instance("chern_number_total"),
                r.map(|_| ()).map_err(|e| e.to_string()),
            );
        }
    }
    suite
}

/// Elliptic-genus specializations on random spaces, shift identities on
/// random virtual Calabi-Yau data.
pub fn elliptic_suite(seed: u64, cases: usize, bounds: &Bounds, q_order: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = SuiteResult {
        name: "elliptic".into(),
        cases: 0,
        failures: Vec::new(),
    };
    for _ in 0..cases {
        let x = random::space(&mut rng, bounds);
        let instance = |prop: &str| {
            Some(CounterInstance {
                space: x.clone(),
                v: None,
                property: prop.into(),
            })
        };
        run_case(
            &mut suite,
            "elliptic_q0_s1",
            instance("elliptic_q0_s1"),
            checks::elliptic_q0_and_s1(&x, q_order),
        );
        // decorated variant: route agreement and denominator clearing are
        // asserted inside ell_vir for arbitrary V and homogeneous a
        let decorated: checks::CheckResult = (|| {
            let vb = random::v_bundle(&mut rng, &x);
            let v = KClass::of_bundle(&vb);
            let k = rng.gen_range(0..=x.model.dim);
            let a = random::homogeneous_class(&mut rng, &x.model, k);
            crate::elliptic::ell_vir(&x, Some(&v), Some(&a), q_order)
                .map(|_| ())
                .map_err(|e| e.to_string())
        })();
        run_case(
            &mut suite,
            "elliptic_decorated",
            instance("elliptic_decorated"),
            decorated,
        );
        let cy = random::cy_space(&mut rng, bounds);
        let cy_instance = Some(CounterInstance {
            space: cy.clone(),
            v: None,
            property: "jacobi".into(),
        });
        run_case(
            &mut suite,
            "jacobi",
            cy_instance,
            checks::jacobi(&cy, q_order),
        );
    }
    suite
}

/// Localization: curated consistency plus eps-regularity on semi-random
/// parameter draws of the curated families.
pub fn localization_suite(seed: u64, cases: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = SuiteResult {
        name: "localization".into(),
        cases: 0,
        failures: Vec::new(),
    };

    // fixed curated battery
    let curated: checks::CheckResult = (|| {
        for k in -5..=5i64 {
            let comps = instances::p1_fixed_points(k);
            let w = default_window(&comps).map_err(|e| e.to_string())?;
            let loc = localized_chi(&comps, &w).map_err(|e| e.to_string())?;
            if loc.value != rat_int(k + 1) {
                return Err(format!("P^1 twist {k}: localized chi = {}", loc.value));
            }
        }
        let comps = instances::obstruction_twist_components(5, 2);
        let w = default_window(&comps).map_err(|e| e.to_string())?;
        if localized_chi(&comps, &w).map_err(|e| e.to_string())?.value != rat_int(3) {
            return Err("obstruction twist value".into());
        }
        let p1 = instances::p1_fixed_points(0);
        let w = default_window(&p1).map_err(|e| e.to_string())?;
        let poly = localized_chi_y(&p1, &w).map_err(|e| e.to_string())?;
        if poly.coeffs != vec![rat_int(1), rat_int(1)] {
            return Err("localized chi_-y of P^1".into());
        }
        if euler_additivity(&p1).map_err(|e| e.to_string())? != rat_int(2) {
            return Err("Euler additivity on P^1".into());
        }
        let ell = localized_elliptic(&p1, &w, 5).map_err(|e| e.to_string())?;
        let direct = crate::elliptic::ell_vir(&instances::proj_space(1), None, None, 5)
            .map_err(|e| e.to_string())?;
        let sr = s_ring();
        for k in 0..=5 {
            if !sr.eq(&ell.coeffs[k], &direct.coeffs[k]) {
                return Err(format!("localized elliptic genus differs at q^{k}"));
            }
        }
        Ok(())
    })();
    run_case(&mut suite, "curated_consistency", None, curated);

    // semi-random draws of the families
    for _ in 0..cases {
        let k = rng.gen_range(-5..=5i64);
        let w = *[-3i64, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).unwrap();
        let outcome: checks::CheckResult = (|| {
            let comps = instances::p1_fixed_points_scaled(k, w);
            let win = default_window(&comps).map_err(|e| e.to_string())?;
            let loc = localized_chi(&comps, &win).map_err(|e| e.to_string())?;
            if loc.value != rat_int(k + 1) {
                return Err(format!("scaled P^1 family: {}", loc.value));
            }
            if loc.series.valuation().unwrap_or(0) < 0 {
                return Err("negative eps powers survive in the sum".into());
            }
            for c in &loc.contributions {
                if c.valuation() != Some(-1) {
                    return Err("individual contribution lost its pole".into());
                }
            }
            let mut w0 = 0;
            while w0 == 0 {
                w0 = rng.gen_range(-4..=4i64);
            }
            let mut winf = 0;
            while winf == 0 {
                winf = rng.gen_range(-4..=4i64);
            }
            let comps = instances::obstruction_twist_components(w0, winf);
            let win = default_window(&comps).map_err(|e| e.to_string())?;
            let loc = localized_chi(&comps, &win).map_err(|e| e.to_string())?;
            if loc.value != rat_int(w0 - winf) {
                return Err(format!(
                    "obstruction twist ({w0},{winf}): localized chi = {}",
                    loc.value
                ));
            }
            let poly = localized_chi_y(&comps, &win).map_err(|e| e.to_string())?;
            if poly.coeffs != vec![rat_int(w0 - winf)] {
                return Err("twist chi_-y is not the expected constant".into());
            }
            Ok(())
        })();
        run_case(&mut suite, "eps_regularity", None, outcome);
    }
    suite
}

/// Run everything with suite sizes derived from `cases`.
pub fn run_all(seed: u64, cases: usize, bounds: &Bounds, q_order: usize) -> VerifyReport {
    let c = cases.max(1);
    VerifyReport {
        seed,
        suites: vec![
            kernel_suite(seed, c),
            newton_suite(seed.wrapping_add(1), c),
            genera_suite(seed.wrapping_add(2), c, bounds),
            elliptic_suite(seed.wrapping_add(3), (c / 8).max(3), bounds, q_order),
            localization_suite(seed.wrapping_add(4), (c / 4).max(3)),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_matches_on_projective_line() {
        let p1 = instances::proj_space(1);
        let v = KClass::trivial(&p1.model, 1);
        let oracle = chi_y_series_oracle(&p1, &v, 6);
        assert_eq!(oracle[0], rat_int(1));
        assert_eq!(oracle[1], rat_int(1));
        for c in &oracle[2..] {
            assert_eq!(*c, rat_int(0));
        }
    }

    #[test]
    fn quick_run_all_is_clean() {
        let report = run_all(7, 8, &Bounds::default(), 3);
        for s in &report.suites {
            assert!(
                s.ok(),
                "suite {} failed: {:?}",
                s.name,
                s.failures.first().map(|f| (&f.property, &f.detail))
            );
        }
    }
}
