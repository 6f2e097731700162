//! Torus-equivariant localization: fixed components, equivariant Chern
//! characters in Q((eps)), and localized chi, chi_-y, elliptic genus and
//! Euler number.
//!
//! A fixed component carries its own virtually smooth space together with the
//! moving part of the restricted tangent pair (the virtual normal bundle,
//! possibly a formal difference) and a lift of the global twisting class.
//! Contribution of a component to chi:
//!
//!   integral_i( ch(V_i) * ch(1/Lambda_{-1}(N^dual)) * td(T_i) )
//!
//! Each factor 1/(1 - e^{-x - k eps}) has a simple pole in eps; only the sum
//! over components is regular, and the eps^0 value is the global answer.

use std::sync::Arc;

use crate::algebra::chow::{embed, ChowClass, ChowModel};
use crate::algebra::eps::{EpsLaurent, EpsRing};
use crate::algebra::laurent::{s_ring, LaurentRing};
use crate::algebra::rational::{rat_int, Rational};
use crate::algebra::ring::Ring;
use crate::algebra::series::SeriesRing;
use crate::elliptic::{ecal_root_series, EllResult};
use crate::error::{Error, Result};
use crate::genera::{chi_y_class, euler_signature, ChiYPolynomial, VirtualSpace};
use crate::ktheory::{multiplicative_class, todd_class, Bundle, KClass};

/// Weight-graded bundle: one genuine bundle per (distinct) weight.
#[derive(Clone, Debug)]
pub struct EquivariantBundle {
    pub blocks: Vec<(i64, Bundle)>,
}

impl EquivariantBundle {
    pub fn new(blocks: Vec<(i64, Bundle)>) -> Result<Self> {
        let mut weights: Vec<i64> = blocks.iter().map(|(w, _)| *w).collect();
        weights.sort_unstable();
        if weights.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidData(
                "duplicate weight in eigenbundle list".into(),
            ));
        }
        Ok(EquivariantBundle { blocks })
    }

    pub fn empty() -> Self {
        EquivariantBundle { blocks: vec![] }
    }

    pub fn rank(&self) -> i64 {
        self.blocks.iter().map(|(_, b)| b.rank as i64).sum()
    }
}

/// Formal difference of weight-graded bundles with all weights nonzero.
#[derive(Clone, Debug)]
pub struct MovingPart {
    pub pos: EquivariantBundle,
    pub neg: EquivariantBundle,
}

impl MovingPart {
    pub fn new(pos: EquivariantBundle, neg: EquivariantBundle) -> Result<Self> {
        for (w, _) in pos.blocks.iter().chain(&neg.blocks) {
            if *w == 0 {
                return Err(Error::MovingPartHasFixedWeight);
            }
        }
        Ok(MovingPart { pos, neg })
    }

    pub fn empty() -> Self {
        MovingPart {
            pos: EquivariantBundle::empty(),
            neg: EquivariantBundle::empty(),
        }
    }

    pub fn rank(&self) -> i64 {
        self.pos.rank() - self.neg.rank()
    }

    /// Total number of inverted line factors, which bounds pole orders.
    pub fn inversion_rank(&self) -> i64 {
        self.pos.rank()
    }
}

/// One torus-fixed locus with its induced virtually smooth structure.
#[derive(Clone, Debug)]
pub struct FixedComponent {
    pub space: VirtualSpace,
    pub normal: MovingPart,
    pub v_lift: EquivariantBundle,
}

impl FixedComponent {
    pub fn new(space: VirtualSpace, normal: MovingPart, v_lift: EquivariantBundle) -> Result<Self> {
        for (_, b) in normal
            .pos
            .blocks
            .iter()
            .chain(&normal.neg.blocks)
            .chain(&v_lift.blocks)
        {
            if *b.model != *space.model {
                return Err(Error::ModelMismatch);
            }
        }
        Ok(FixedComponent {
            space,
            normal,
            v_lift,
        })
    }

    /// d_global = d_i + rank of the virtual normal bundle.
    pub fn global_dim(&self) -> i64 {
        self.space.dim() as i64 + self.normal.rank()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsWindow {
    pub lo: i64,
    pub hi: i64,
}

/// Shared global dimension of a component list.
pub fn global_dim(components: &[FixedComponent]) -> Result<u32> {
    let mut dims = components.iter().map(FixedComponent::global_dim);
    let d = dims
        .next()
        .ok_or_else(|| Error::InvalidData("no fixed components".into()))?;
    if dims.any(|x| x != d) || d < 0 {
        return Err(Error::InvalidData(
            "components disagree on the global dimension".into(),
        ));
    }
    Ok(d as u32)
}

/// Default window: lo = -(max moving rank + d), hi = d.
pub fn default_window(components: &[FixedComponent]) -> Result<EpsWindow> {
    let d = global_dim(components)? as i64;
    let max_mov = components
        .iter()
        .map(|c| c.normal.pos.rank() + c.normal.neg.rank())
        .max()
        .unwrap_or(0);
    Ok(EpsWindow {
        lo: -(max_mov + d),
        hi: d,
    })
}

fn eps_ring_for(components: &[FixedComponent], window: &EpsWindow) -> EpsRing {
    // working precision absorbs 2 per inverted line factor, with margin
    let max_inv = components
        .iter()
        .map(|c| c.normal.inversion_rank())
        .max()
        .unwrap_or(0);
    EpsRing::new(window.lo, window.hi, 2 * max_inv + 4)
}

/// Equivariant Chern character: sum over blocks of ch(B^k) e^{k eps}.
pub fn equivariant_ch(
    ering: &EpsRing,
    model: &Arc<ChowModel>,
    b: &EquivariantBundle,
) -> ChowClass<EpsRing> {
    let mut acc = ChowClass::zero(ering, model);
    for (w, bundle) in &b.blocks {
        let ch = KClass::of_bundle(bundle).ch;
        acc = acc.add(&embed(&ch, ering).scale(&ering.exp_eps(*w)));
    }
    acc
}

/// Product over the roots of `bundle` of (1 - z e^{-x}) with z = c e^{-k eps},
/// i.e. ch of Lambda_{-c} of the dual of the weight-k block.
///
/// z need not make 1 - z invertible (z = s^2 e^{-k eps} does not), so the
/// product is computed over an auxiliary series variable w with per-root
/// factor 1 + w e^{-x}. It is a polynomial of w-degree <= rank, hence exact
/// at that truncation, and w = -z is substituted afterwards.
fn block_lambda_dual<R: Ring>(
    ring: &R,
    model: &Arc<ChowModel>,
    bundle: &Bundle,
    exp_meps: &R::Elem,
    c: &R::Elem,
) -> Result<ChowClass<R>> {
    let wring = SeriesRing::new(ring.clone(), bundle.rank as usize, "w");
    let tring = SeriesRing::new(wring.clone(), model.dim as usize, "t");
    let phi = tring.add(
        &tring.one(),
        &tring.mul(
            &tring.monomial(0, wring.gen()),
            &tring.exp_linear(&wring.neg(&wring.one())),
        ),
    );
    let class = multiplicative_class(&tring, bundle, &Bundle::trivial(model, 0), &phi)?;
    let minus_z = ring.neg(&ring.mul(c, exp_meps));
    Ok(class.map_coeffs(ring, |ws| {
        let mut acc = ring.zero();
        let mut zpow = ring.one();
        for (p, w_coeff) in ws.coeffs.iter().enumerate() {
            if p > 0 {
                zpow = ring.mul(&zpow, &minus_z);
            }
            acc = ring.add(&acc, &ring.mul(w_coeff, &zpow));
        }
        acc
    }))
}

/// Same product over all blocks of an eigenbundle list.
fn lambda_dual_product<R: Ring>(
    ring: &R,
    model: &Arc<ChowModel>,
    blocks: &[(i64, Bundle)],
    exp_meps: &impl Fn(i64) -> R::Elem,
    c: &R::Elem,
) -> Result<ChowClass<R>> {
    let mut acc = ChowClass::one(ring, model);
    for (w, b) in blocks {
        acc = acc.mul(&block_lambda_dual(ring, model, b, &exp_meps(*w), c)?);
    }
    Ok(acc)
}

/// ch of Lambda_{-c}((A - B)^dual) split into numerator and denominator
/// factors: returns (Lambda_{-c}(A^dual), Lambda_{-c}(B^dual)).
fn lambda_dual_parts<R: Ring>(
    ring: &R,
    model: &Arc<ChowModel>,
    moving: &MovingPart,
    exp_meps: &impl Fn(i64) -> R::Elem,
    c: &R::Elem,
) -> Result<(ChowClass<R>, ChowClass<R>)> {
    Ok((
        lambda_dual_product(ring, model, &moving.pos.blocks, exp_meps, c)?,
        lambda_dual_product(ring, model, &moving.neg.blocks, exp_meps, c)?,
    ))
}

/// ch of 1/Lambda_{-1}(N^dual) for a moving part N = pos - neg: the single
/// localization denominator. Each inverted rank-1 factor contributes one pole
/// order in eps.
pub fn inv_lambda_dual(
    ering: &EpsRing,
    model: &Arc<ChowModel>,
    moving: &MovingPart,
) -> Result<ChowClass<EpsRing>> {
    let exp_meps = |w: i64| ering.exp_eps(-w);
    let one = ering.one();
    let (pos, neg) = lambda_dual_parts(ering, model, moving, &exp_meps, &one)?;
    Ok(neg.mul(&pos.invert_unit()?))
}

/// Localized holomorphic Euler characteristic.
#[derive(Clone, Debug)]
pub struct LocalizedChi {
    /// per-component contributions, poles included
    pub contributions: Vec<EpsLaurent>,
    /// the regular sum
    pub series: EpsLaurent,
    /// known coefficients of the sum inside the window
    pub series_window: Vec<(i64, Rational)>,
    /// eps^0 value
    pub value: Rational,
}

/// Sum of component contributions ch(V_i / Lambda_{-1} N^dual) td(T_i),
/// integrated; asserts regularity and evaluates at eps = 0.
pub fn localized_chi(components: &[FixedComponent], window: &EpsWindow) -> Result<LocalizedChi> {
    global_dim(components)?;
    let ering = eps_ring_for(components, window);
    let mut contributions = Vec::with_capacity(components.len());
    let mut total = ering.zero();
    for comp in components {
        let model = &comp.space.model;
        let chv = equivariant_ch(&ering, model, &comp.v_lift);
        let inv = inv_lambda_dual(&ering, model, &comp.normal)?;
        let td = embed(&todd_class(&comp.space.e0, &comp.space.e1)?, &ering);
        let contribution = comp.space.integral.integrate(&chv.mul(&inv).mul(&td));
        total = ering.add(&total, &contribution);
        contributions.push(contribution);
    }
    let value = ering.value_at_zero(&total)?;
    Ok(LocalizedChi {
        contributions,
        series_window: total.clip(window.lo, window.hi),
        series: total,
        value,
    })
}

/// Localized chi_-y: per component the chi_-y machinery over eps-tensored
/// coefficients with the extra factor Lambda_{-y}(N^dual)/Lambda_{-1}(N^dual),
/// summed and evaluated at eps = 0. The result must be a polynomial of degree
/// at most d, which is asserted.
pub fn localized_chi_y(
    components: &[FixedComponent],
    window: &EpsWindow,
) -> Result<ChiYPolynomial> {
    let d = global_dim(components)? as usize;
    let ering = eps_ring_for(components, window);
    // one guard order above d to catch failures of polynomiality
    let yring = SeriesRing::new(ering.clone(), d + 1, "y");
    let mut total = yring.zero();
    for comp in components {
        let model = &comp.space.model;
        let di = comp.space.dim() as usize;
        let exp_meps = |w: i64| yring.monomial(0, ering.exp_eps(-w));
        let y = yring.gen();
        let one = yring.one();
        let (lam_y_pos, lam_y_neg) = lambda_dual_parts(&yring, model, &comp.normal, &exp_meps, &y)?;
        let (lam_1_pos, lam_1_neg) =
            lambda_dual_parts(&yring, model, &comp.normal, &exp_meps, &one)?;
        // Lambda_{-y}(N^dual)/Lambda_{-1}(N^dual) with one inversion
        let w_class = lam_y_pos
            .mul(&lam_1_neg)
            .mul(&lam_y_neg.mul(&lam_1_pos).invert_unit()?);
        let chv = equivariant_ch(&ering, model, &comp.v_lift)
            .map_coeffs(&yring, |c| yring.monomial(0, c.clone()));
        let slices = chi_y_class(&comp.space)?.slices;
        let one_minus_y = yring.sub(&yring.one(), &yring.gen());
        for (l, slice) in slices.iter().enumerate() {
            let integrand = embed(slice, &yring).mul(&w_class).mul(&chv);
            let val = comp.space.integral.integrate(&integrand);
            let weight = yring
                .pow(&one_minus_y, (di - l) as i64)
                .expect("positive power");
            total = yring.add(&total, &yring.mul(&weight, &val));
        }
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    for j in 0..=d {
        coeffs.push(ering.value_at_zero(&yring.coeff(&total, j))?);
    }
    let guard = ering.value_at_zero(&yring.coeff(&total, d + 1))?;
    if !num::Zero::is_zero(&guard) {
        return Err(Error::AssertionFailure(format!(
            "localized chi_-y has a nonzero coefficient at y^{}",
            d + 1
        )));
    }
    Ok(ChiYPolynomial { coeffs })
}

/// Localized elliptic genus per fixed component:
/// s^{-d} chi_-y-class of X_i paired with ch(ecal(T_i)) ch(ecal(N_i))
/// Lambda_{-y}(N^dual)/Lambda_{-1}(N^dual) and the lifted twisting class.
/// Supported for normal bundles without negative parts (a negative part would
/// force infinite s-expansions before the eps = 0 limit).
pub fn localized_elliptic(
    components: &[FixedComponent],
    window: &EpsWindow,
    q_order: usize,
) -> Result<EllResult> {
    let d = global_dim(components)?;
    if components.iter().any(|c| !c.normal.neg.blocks.is_empty()) {
        return Err(Error::Unsupported(
            "localized elliptic genus needs normal data without negative parts".into(),
        ));
    }
    let ering = eps_ring_for(components, window);
    let sring = LaurentRing::new(ering.clone(), "s");
    let qring = SeriesRing::new(sring.clone(), q_order, "q");

    let mut total = qring.zero();
    for comp in components {
        let model = &comp.space.model;
        let tring = SeriesRing::new(qring.clone(), model.dim as usize, "t");
        let lift_eps = |c: &EpsLaurent| qring.monomial(0, sring.monomial(0, c.clone()));
        let s_pow = |e: i64| qring.monomial(0, sring.monomial(e, ering.one()));

        // ecal of the component tangent pair
        let phi_t = ecal_root_series(
            &tring,
            &sring.gen_pow(2),
            &sring.gen_pow(-2),
            &sring.one(),
            &sring.one(),
        );
        let mut factor = multiplicative_class(&tring, &comp.space.e0, &comp.space.e1, &phi_t)?;

        // ecal of the normal blocks, roots shifted by k eps
        for (w, b) in &comp.normal.pos.blocks {
            let em = ering.exp_eps(-w);
            let ep = ering.exp_eps(*w);
            let phi_n = ecal_root_series(
                &tring,
                &sring.monomial(2, em.clone()),
                &sring.monomial(-2, ep.clone()),
                &sring.monomial(0, ep),
                &sring.monomial(0, em),
            );
            factor = factor.mul(&multiplicative_class(
                &tring,
                b,
                &Bundle::trivial(model, 0),
                &phi_n,
            )?);
        }

        // Lambda_{-s^2}(N^dual) / Lambda_{-1}(N^dual)
        let exp_meps = |w: i64| qring.monomial(0, sring.monomial(0, ering.exp_eps(-w)));
        let s2 = s_pow(2);
        let one = qring.one();
        let (lam_y, _) = lambda_dual_parts(&qring, model, &comp.normal, &exp_meps, &s2)?;
        let (lam_1, _) = lambda_dual_parts(&qring, model, &comp.normal, &exp_meps, &one)?;
        factor = factor.mul(&lam_y).mul(&lam_1.invert_unit()?);

        // lifted twisting class
        let mut chv = ChowClass::zero(&qring, model);
        for (w, b) in &comp.v_lift.blocks {
            let ch = KClass::of_bundle(b).ch;
            chv = chv.add(
                &ch.map_coeffs(&qring, |r| lift_eps(&ering.from_rational(r)))
                    .scale(&lift_eps(&ering.exp_eps(*w))),
            );
        }
        factor = factor.mul(&chv);

        // chi_-y class of the component at y = s^2
        let assembled = chi_y_class(&comp.space)?.assembled;
        let mut x_sq = ChowClass::zero(&qring, model);
        for (j, c) in assembled.iter().enumerate() {
            x_sq = x_sq.add(
                &c.map_coeffs(&qring, |r| lift_eps(&ering.from_rational(r)))
                    .scale(&s_pow(2 * j as i64)),
            );
        }

        let integrand = x_sq.mul(&factor);
        let contribution = qring.mul(
            &s_pow(-(d as i64)),
            &comp.space.integral.integrate(&integrand),
        );
        total = qring.add(&total, &contribution);
    }

    // evaluate eps = 0 coefficientwise; poles must have cancelled
    let sq = s_ring();
    let mut coeffs = Vec::with_capacity(q_order + 1);
    for k in 0..=q_order {
        let c = qring.coeff(&total, k);
        let mut out = sq.zero();
        for (&e, v) in &c.terms {
            sq.accumulate(&mut out, e, &ering.value_at_zero(v)?);
        }
        coeffs.push(out);
    }
    Ok(EllResult {
        dim: d,
        q_order,
        coeffs,
    })
}

/// Euler numbers add over fixed components, with no normal-bundle factor.
pub fn euler_additivity(components: &[FixedComponent]) -> Result<Rational> {
    let mut acc = rat_int(0);
    for comp in components {
        acc += euler_signature(&comp.space)?.0;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::genera::chi_minus_y;
    use crate::verify::instances::{
        obstruction_twist_components, p1_fixed_points, point_space, proj_space,
        whole_space_component,
    };

    #[test]
    fn equivariant_ch_examples() {
        let pt = ChowModel::point();
        let ering = EpsRing::new(-2, 2, 4);
        // weight 1 trivial line: 1 + eps + eps^2/2 + ...
        let b = EquivariantBundle::new(vec![(1, Bundle::trivial(&pt, 1))]).unwrap();
        let ch = equivariant_ch(&ering, &pt, &b);
        let c = ch.constant_term();
        assert_eq!(c.coeff(0), rat_int(1));
        assert_eq!(c.coeff(1), rat_int(1));
        assert_eq!(c.coeff(2), rat(1, 2));
        // weight 0 rank r is eps-free
        let b0 = EquivariantBundle::new(vec![(0, Bundle::trivial(&pt, 3))]).unwrap();
        let c0 = equivariant_ch(&ering, &pt, &b0).constant_term();
        assert_eq!(c0.coeff(0), rat_int(3));
        assert!(c0.terms.len() == 1);
    }

    #[test]
    fn duplicate_weights_are_rejected() {
        let pt = ChowModel::point();
        assert!(EquivariantBundle::new(vec![
            (1, Bundle::trivial(&pt, 1)),
            (1, Bundle::trivial(&pt, 2)),
        ])
        .is_err());
    }

    #[test]
    fn moving_part_rejects_weight_zero() {
        let pt = ChowModel::point();
        let z = EquivariantBundle::new(vec![(0, Bundle::trivial(&pt, 1))]).unwrap();
        assert_eq!(
            MovingPart::new(z, EquivariantBundle::empty()).err(),
            Some(Error::MovingPartHasFixedWeight)
        );
    }

    #[test]
    fn inv_lambda_is_a_genuine_inverse() {
        let pt = ChowModel::point();
        let ering = EpsRing::new(-4, 2, 8);
        let pos = EquivariantBundle::new(vec![(1, Bundle::trivial(&pt, 1))]).unwrap();
        let moving = MovingPart::new(pos, EquivariantBundle::empty()).unwrap();
        let inv = inv_lambda_dual(&ering, &pt, &moving).unwrap();
        let c = inv.constant_term();
        // (1 - e^{-eps})^{-1}
        assert_eq!(c.coeff(-1), rat_int(1));
        assert_eq!(c.coeff(0), rat(1, 2));
        assert_eq!(c.coeff(1), rat(1, 12));
        let direct = ering.sub(&ering.one(), &ering.exp_eps(-1));
        assert!(ering.eq(&ering.mul(&c, &direct), &ering.one()));
    }

    #[test]
    fn p1_from_two_fixed_points() {
        for k in -5..=5i64 {
            let comps = p1_fixed_points(k);
            let window = default_window(&comps).unwrap();
            let loc = localized_chi(&comps, &window).unwrap();
            assert_eq!(loc.value, rat_int(k + 1), "k = {k}");
            // individual contributions have genuine poles
            for c in &loc.contributions {
                assert_eq!(c.valuation(), Some(-1));
            }
            // the sum has no negative part
            assert!(loc.series.valuation().unwrap_or(0) >= 0);
        }
    }

    #[test]
    fn obstruction_twist_value() {
        let comps = obstruction_twist_components(5, 2);
        let window = default_window(&comps).unwrap();
        let loc = localized_chi(&comps, &window).unwrap();
        assert_eq!(loc.value, rat_int(3));
        // localized chi_-y collapses to the constant w0 - winf
        let poly = localized_chi_y(&comps, &window).unwrap();
        assert_eq!(poly.coeffs, vec![rat_int(3)]);
    }

    #[test]
    fn single_whole_space_component() {
        let p2 = proj_space(2);
        let comps = vec![whole_space_component(&p2)];
        let window = default_window(&comps).unwrap();
        let loc = localized_chi(&comps, &window).unwrap();
        assert_eq!(loc.value, rat_int(1)); // chi(P^2, O)
        assert!(loc.series.valuation().is_none() || loc.series.valuation() == Some(0));
        let poly = localized_chi_y(&comps, &window).unwrap();
        let direct = chi_minus_y(&p2, &KClass::trivial(&p2.model, 1)).unwrap();
        assert_eq!(poly.coeffs, direct.coeffs);
    }

    #[test]
    fn localized_chi_y_of_p1() {
        let comps = p1_fixed_points(0);
        let window = default_window(&comps).unwrap();
        let poly = localized_chi_y(&comps, &window).unwrap();
        assert_eq!(poly.coeffs, vec![rat_int(1), rat_int(1)]);
        // y = 1 gives the sum of component Euler numbers
        assert_eq!(poly.eval(&rat_int(1)), euler_additivity(&comps).unwrap());
    }

    #[test]
    fn localized_elliptic_matches_direct() {
        let comps = p1_fixed_points(0);
        let window = default_window(&comps).unwrap();
        let loc = localized_elliptic(&comps, &window, 5).unwrap();
        let direct = crate::elliptic::ell_vir(&proj_space(1), None, None, 5).unwrap();
        let sr = s_ring();
        assert_eq!(loc.dim, 1);
        for k in 0..=5 {
            assert!(sr.eq(&loc.coeffs[k], &direct.coeffs[k]), "q^{k} disagrees");
        }

        // a positive-dimensional component with empty normal data reduces to
        // the plain expansion
        let p2 = proj_space(2);
        let single = vec![whole_space_component(&p2)];
        let w = default_window(&single).unwrap();
        let loc = localized_elliptic(&single, &w, 3).unwrap();
        let direct = crate::elliptic::ell_vir(&p2, None, None, 3).unwrap();
        for k in 0..=3 {
            assert!(sr.eq(&loc.coeffs[k], &direct.coeffs[k]), "q^{k} disagrees");
        }

        // negative normal parts are out of scope for the elliptic route
        let twisted = crate::verify::instances::obstruction_twist_components(5, 2);
        let w = default_window(&twisted).unwrap();
        assert!(matches!(
            localized_elliptic(&twisted, &w, 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn euler_additivity_examples() {
        let comps = p1_fixed_points(0);
        assert_eq!(euler_additivity(&comps).unwrap(), rat_int(2));
        let single = vec![whole_space_component(&proj_space(2))];
        assert_eq!(euler_additivity(&single).unwrap(), rat_int(3));
        let pts = vec![
            whole_space_component(&point_space(rat(5, 1))),
            whole_space_component(&point_space(rat(-2, 1))),
        ];
        assert_eq!(euler_additivity(&pts).unwrap(), rat_int(3));
    }
}
