//! Acceptance gate: seven criteria, every assertion exact (no tolerances).
//! Each test prints one PASS line; a failed assertion is the FAIL line.

use vgenus::algebra::expr::parse_class;
use vgenus::algebra::rational::{binomial_gen, rat_int};
use vgenus::algebra::{s_ring, Ring};
use vgenus::genera::{chi_minus_y, chi_vir, euler_signature};
use vgenus::ktheory::KClass;
use vgenus::localization::{
    default_window, euler_additivity, localized_chi, localized_chi_y, localized_elliptic,
};
use vgenus::verify::{self, checks, instances, random, Bounds};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

/// chi(P^n, O(k)) = C(n+k, n) for n in {1,2,3}, k in [-5,5].
#[test]
fn criterion_1_hrr_exactness() {
    for n in 1..=3u32 {
        let x = instances::proj_space(n);
        let h = parse_class(&x.model, "h").unwrap();
        for k in -5..=5i64 {
            let v = KClass::line(&h.scale_rat(&rat_int(k))).unwrap();
            let got = chi_vir(&x, &v).unwrap();
            let expected = binomial_gen(n as i64 + k, n);
            assert_eq!(got, expected, "chi(P^{n}, O({k}))");
        }
    }
    println!("PASS criterion 1: chi(P^n, O(k)) = C(n+k, n) for n in 1..3, k in -5..5");
}

/// chi_-y spot values and Euler/signature numbers of P^1 and P^2.
#[test]
fn criterion_2_chi_y_spot_values() {
    let p1 = instances::proj_space(1);
    let p2 = instances::proj_space(2);
    let o1 = KClass::trivial(&p1.model, 1);
    let o2 = KClass::trivial(&p2.model, 1);
    assert_eq!(
        chi_minus_y(&p1, &o1).unwrap().coeffs,
        vec![rat_int(1), rat_int(1)]
    );
    assert_eq!(
        chi_minus_y(&p2, &o2).unwrap().coeffs,
        vec![rat_int(1), rat_int(1), rat_int(1)]
    );
    assert_eq!(euler_signature(&p1).unwrap(), (rat_int(2), rat_int(0)));
    assert_eq!(euler_signature(&p2).unwrap(), (rat_int(3), rat_int(1)));
    println!("PASS criterion 2: chi_-y(P^1) = 1+y, chi_-y(P^2) = 1+y+y^2, e = 2/3, sigma = 0/1");
}

/// On >= 200 randomized spaces: u-degree <= d with the correct leading
/// slices, and exact agreement with the y-series oracle through order d+5.
#[test]
fn criterion_3_u_substitution_algorithm() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bounds = Bounds::default();
    for case in 0..200 {
        let x = random::space(&mut rng, &bounds);
        let vb = random::v_bundle(&mut rng, &x);
        let v = KClass::of_bundle(&vb);
        checks::chi_y_leading(&x).unwrap_or_else(|e| panic!("case {case}: {e}"));
        checks::chi_y_oracle(&x, &v).unwrap_or_else(|e| panic!("case {case}: {e}"));
    }
    println!(
        "PASS criterion 3: u-polynomiality, leading slices, and the y-series oracle on 200 random spaces"
    );
}

/// Global exact identities on the same corpus; zero tolerance.
#[test]
fn criterion_4_global_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bounds = Bounds::default();
    for case in 0..200 {
        let x = random::space(&mut rng, &bounds);
        let vb = random::v_bundle(&mut rng, &x);
        let v = KClass::of_bundle(&vb);
        checks::symmetry(&x, &v).unwrap_or_else(|e| panic!("case {case} symmetry: {e}"));
        checks::serre_duality(&x, &v).unwrap_or_else(|e| panic!("case {case} serre: {e}"));
        checks::specialization_y0(&x, &v).unwrap_or_else(|e| panic!("case {case} y0: {e}"));
        checks::hopf_and_signature(&x, &v)
            .unwrap_or_else(|e| panic!("case {case} hopf/sigma: {e}"));
    }
    println!(
        "PASS criterion 4: symmetry, Serre duality, y=0 specialization, Hopf index, odd signature on 200 random spaces"
    );
}

/// Elliptic genus at q-order 6: q^0 slice, route equality, denominator
/// clearing, s=1 collapse; shift identities on virtual Calabi-Yau data.
#[test]
fn criterion_5_elliptic_genus() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bounds = Bounds::default();
    let q_order = 6;
    for case in 0..12 {
        let x = random::space(&mut rng, &bounds);
        checks::elliptic_q0_and_s1(&x, q_order).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let cy = random::cy_space(&mut rng, &bounds);
        checks::jacobi(&cy, q_order).unwrap_or_else(|e| panic!("case {case} jacobi: {e}"));
    }
    println!(
        "PASS criterion 5: elliptic q^0 slice, dual-route agreement, denominator clearing, s=1 collapse, and shift identities at q-order 6"
    );
}

/// Localization on the curated library, exact.
#[test]
fn criterion_6_localization_consistency() {
    // P^1 from two fixed points for every twist in [-5,5]
    for k in -5..=5i64 {
        let comps = instances::p1_fixed_points(k);
        let w = default_window(&comps).unwrap();
        let loc = localized_chi(&comps, &w).unwrap();
        assert_eq!(loc.value, rat_int(k + 1), "localized chi at k={k}");
        assert!(
            loc.series.valuation().unwrap_or(0) >= 0,
            "negative eps powers at k={k}"
        );
    }
    // the obstruction twist reproduces w0 - winf
    let comps = instances::obstruction_twist_components(5, 2);
    let w = default_window(&comps).unwrap();
    assert_eq!(localized_chi(&comps, &w).unwrap().value, rat_int(3));
    // localized chi_-y of P^1 is 1 + y
    let p1 = instances::p1_fixed_points(0);
    let w = default_window(&p1).unwrap();
    assert_eq!(
        localized_chi_y(&p1, &w).unwrap().coeffs,
        vec![rat_int(1), rat_int(1)]
    );
    // Euler additivity: 2 = 1 + 1
    assert_eq!(euler_additivity(&p1).unwrap(), rat_int(2));
    // localized elliptic genus matches the direct expansion through q-order 5
    let ell = localized_elliptic(&p1, &w, 5).unwrap();
    let direct = vgenus::elliptic::ell_vir(&instances::proj_space(1), None, None, 5).unwrap();
    let sr = s_ring();
    for k in 0..=5 {
        assert!(
            sr.eq(&ell.coeffs[k], &direct.coeffs[k]),
            "localized elliptic differs at q^{k}"
        );
    }
    println!(
        "PASS criterion 6: localized chi (P^1 twists, obstruction twist), chi_-y, Euler additivity, and elliptic genus through q-order 5"
    );
}

/// Kernel soundness: >= 500 randomized elements per coefficient variant.
#[test]
fn criterion_7_kernel_soundness() {
    let kernel = verify::kernel_suite(SEED, 500);
    assert!(
        kernel.ok(),
        "kernel suite: {:?}",
        kernel.failures.first().map(|f| (&f.property, &f.detail))
    );
    let newton = verify::newton_suite(SEED + 1, 500);
    assert!(
        newton.ok(),
        "newton suite: {:?}",
        newton.failures.first().map(|f| (&f.property, &f.detail))
    );
    println!(
        "PASS criterion 7: ring axioms, inversion, exp/log and Newton round-trips on 500 random elements per variant"
    );
}
