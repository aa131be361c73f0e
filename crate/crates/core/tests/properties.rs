//! Randomized invariants of the norm, the combination algebra, and the
//! quotients, driven by the deterministic corpus generators.

use morrey_core::corpus;
use morrey_core::{
    build_witnesses, centered_norm, cumulative_integral, dw_quotient, james_quotient,
    membership_failure, nj_quotient, oracle_norm, sphere_area, MorreyError, PowerPiece,
    RadialFunction, SpaceParams, SupremumRadius, Variant,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn setup(seed: u64, variant: Variant) -> (ChaCha8Rng, SpaceParams) {
    let mut r = corpus::rng(seed);
    let d = corpus::DIMS[(seed % corpus::DIMS.len() as u64) as usize];
    let sp = corpus::random_space(&mut r, d, variant);
    (r, sp)
}

fn variant_of(seed: u64) -> Variant {
    if seed & 1 == 0 {
        Variant::Classical
    } else {
        Variant::Small
    }
}

fn assert_same_pieces(a: &RadialFunction, b: &RadialFunction) {
    assert_eq!(a.pieces().len(), b.pieces().len(), "{a:?} vs {b:?}");
    for (pa, pb) in a.pieces().iter().zip(b.pieces()) {
        assert_eq!(pa.r_lo(), pb.r_lo());
        assert_eq!(pa.r_hi(), pb.r_hi());
        assert_eq!(pa.c(), pb.c());
        assert_eq!(pa.alpha(), pb.alpha());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_absolutely_homogeneous(seed in any::<u64>()) {
        let (mut r, sp) = setup(seed, variant_of(seed));
        let f = corpus::random_function(&mut r, &sp);
        let base = centered_norm(&f, &sp).unwrap().value;
        let k = r.random_range(0.1..8.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let scaled = centered_norm(&f.scale(k), &sp).unwrap().value;
        let expect = k.abs() * base;
        prop_assert!(
            (scaled - expect).abs() <= 1e-12 * expect,
            "‖{k}·f‖ = {scaled}, |k|·‖f‖ = {expect}"
        );
    }

    #[test]
    fn triangle_inequality_holds(seed in any::<u64>()) {
        let (mut r, sp) = setup(seed, variant_of(seed));
        let (a, b) = corpus::random_compatible_pair(&mut r, &sp);
        let na = centered_norm(&a, &sp).unwrap().value;
        let nb = centered_norm(&b, &sp).unwrap().value;
        let nsum = centered_norm(&a.add(&b).unwrap(), &sp).unwrap().value;
        prop_assert!(
            nsum <= na + nb + 1e-12 * (na + nb),
            "‖a+b‖ = {nsum} exceeds ‖a‖+‖b‖ = {}",
            na + nb
        );
    }

    #[test]
    fn sign_flip_preserves_norm_exactly(seed in any::<u64>()) {
        let (mut r, sp) = setup(seed, variant_of(seed));
        let f = corpus::random_function(&mut r, &sp);
        let plus = centered_norm(&f, &sp).unwrap();
        let minus = centered_norm(&f.negate(), &sp).unwrap();
        prop_assert_eq!(plus.value, minus.value);
        prop_assert_eq!(plus.r_star, minus.r_star);
    }

    #[test]
    fn small_norm_never_exceeds_classical(seed in any::<u64>()) {
        // Classical members are always Small members: the Small supremum
        // ranges over a subset of radii.
        let (mut r, sp) = setup(seed, Variant::Classical);
        let f = corpus::random_function(&mut r, &sp);
        let classical = centered_norm(&f, &sp).unwrap().value;
        let small = centered_norm(&f, &sp.with_variant(Variant::Small)).unwrap().value;
        prop_assert!(
            small <= classical * (1.0 + 1e-12),
            "small {small} > classical {classical}"
        );
    }

    #[test]
    fn add_commutes_and_acts_pointwise(seed in any::<u64>()) {
        let (mut r, sp) = setup(seed, variant_of(seed));
        let (a, b) = corpus::random_compatible_pair(&mut r, &sp);
        let ab = a.add(&b).unwrap();
        assert_same_pieces(&ab, &b.add(&a).unwrap());

        let r_max = ab.breakpoints().last().copied().unwrap_or(1.0).max(0.5) * 1.2;
        for _ in 0..100 {
            let x = r.random_range(1e-6..r_max);
            let lhs = ab.value_at(x);
            let rhs = a.value_at(x) + b.value_at(x);
            let scale = a.value_at(x).abs() + b.value_at(x).abs() + 1e-300;
            prop_assert!(
                (lhs - rhs).abs() <= 1e-12 * scale,
                "(a+b)({x}) = {lhs} but a({x})+b({x}) = {rhs}"
            );
        }

        // Associativity, with a third summand on b's breakpoint ladder.
        let c = b.scale(r.random_range(0.3..3.0));
        let left = ab.add(&c).unwrap();
        let right = a.add(&b.add(&c).unwrap()).unwrap();
        let nl = centered_norm(&left, &sp).unwrap().value;
        let nr = centered_norm(&right, &sp).unwrap().value;
        prop_assert!((nl - nr).abs() <= 1e-12 * (nl + nr + 1e-300));
        for _ in 0..50 {
            let x = r.random_range(1e-6..r_max);
            let scale = left.value_at(x).abs() + right.value_at(x).abs() + 1e-300;
            prop_assert!((left.value_at(x) - right.value_at(x)).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn quotient_ranges_symmetry_and_scaling(seed in any::<u64>()) {
        let (mut r, sp) = setup(seed, variant_of(seed));
        let (x, y) = corpus::random_compatible_pair(&mut r, &sp);
        // Norm-0 functions (empty, or Small-variant support beyond the unit
        // ball) are the zero element; quotients reject them by contract.
        prop_assume!(centered_norm(&x, &sp).unwrap().value > 0.0);
        prop_assume!(centered_norm(&y, &sp).unwrap().value > 0.0);

        let nj = nj_quotient(&x, &y, &sp).unwrap();
        prop_assert!((0.5 - 1e-12..=2.0 + 1e-12).contains(&nj), "nj = {nj}");
        prop_assert_eq!(nj, nj_quotient(&y, &x, &sp).unwrap());
        prop_assert_eq!(nj, nj_quotient(&x, &y.negate(), &sp).unwrap());

        let james = james_quotient(&x, &y, &sp).unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&james), "james = {james}");

        let a = r.random_range(0.2..5.0);
        let b = r.random_range(0.2..5.0);

        // nj is invariant under common scaling, james under independent
        // scaling of either argument (it normalizes both).
        let nj_scaled = nj_quotient(&x.scale(a), &y.scale(a), &sp).unwrap();
        prop_assert!((nj_scaled - nj).abs() <= 1e-11 * nj);
        // Proportional pairs drive james and dw to 0 exactly, where the
        // invariance comparison is pure rounding noise; hence the absolute
        // floor next to the relative term.
        let james_scaled = james_quotient(&x.scale(a), &y.scale(b), &sp).unwrap();
        prop_assert!((james_scaled - james).abs() <= 1e-11 * james + 1e-11);

        match dw_quotient(&x, &y, &sp) {
            Ok(dw) => {
                prop_assert!((0.0..=4.0 + 1e-12).contains(&dw), "dw = {dw}");
                // dw is invariant under common scaling only.
                match dw_quotient(&x.scale(a), &y.scale(a), &sp) {
                    Ok(dw_scaled) => {
                        prop_assert!((dw_scaled - dw).abs() <= 1e-11 * dw + 1e-11)
                    }
                    Err(MorreyError::IdenticalInputs) => {}
                    Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
                }
            }
            Err(MorreyError::IdenticalInputs) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }
}

/// Shrinking the oracle tolerance moves the result by at most the sum of the
/// two tolerances.
#[test]
fn oracle_tolerance_halving_is_consistent() {
    for seed in 0..8u64 {
        let variant = variant_of(seed);
        let (mut r, sp) = setup(seed.wrapping_mul(97).wrapping_add(5), variant);
        let f = corpus::random_function(&mut r, &sp);
        let coarse = oracle_norm(&f, &sp, 1e-6).unwrap().value;
        let fine = oracle_norm(&f, &sp, 5e-7).unwrap().value;
        assert!(
            (coarse - fine).abs() <= 1.5e-6 * fine.max(coarse),
            "tol halving moved the norm from {coarse} to {fine}"
        );
    }
}

/// The split family recombines algebraically: g + h = f and f − k = 2h,
/// piece by piece with no rounding.
#[test]
fn witness_family_recombines_exactly() {
    let sp = SpaceParams::new(1, 1.0, 2.0, Variant::Small).unwrap();
    let w = build_witnesses(0.3, 0.4, &sp).unwrap();
    assert_same_pieces(&w.g.add(&w.h).unwrap(), &w.f);
    assert_same_pieces(&w.f.add(&w.k.negate()).unwrap(), &w.h.scale(2.0));
}

/// A tail exponent at −d/q keeps N(R) bounded as R grows (the supremum is a
/// limit at infinity); anything shallower makes N(R) climb without bound and
/// is rejected by membership validation.
#[test]
fn tail_exponent_threshold_separates_members() {
    let sp = SpaceParams::new(2, 1.0, 2.0, Variant::Classical).unwrap();
    let n_of = |f: &RadialFunction, radius: f64| {
        let vol = sphere_area(sp.d()) / sp.d() as f64 * radius.powi(sp.d() as i32);
        let integral = cumulative_integral(f, &sp).unwrap().eval(radius);
        vol.powf(1.0 / sp.q() - 1.0 / sp.p()) * integral.powf(1.0 / sp.p())
    };

    let critical =
        RadialFunction::new(vec![PowerPiece::new(1.0, f64::INFINITY, 1.0, -1.0).unwrap()]).unwrap();
    assert!(membership_failure(&critical, &sp).is_none());
    let res = centered_norm(&critical, &sp).unwrap();
    assert_eq!(res.r_star, SupremumRadius::UpperLimit(f64::INFINITY));
    assert!(!res.attained());
    // N(R) has flattened out by R = 1e4 and the limit matches the oracle.
    assert!(n_of(&critical, 1e6) <= n_of(&critical, 1e4) * 1.01);
    let via_oracle = oracle_norm(&critical, &sp, 1e-10).unwrap().value;
    assert!((via_oracle - res.value).abs() <= 1e-8 * res.value);

    let shallow =
        RadialFunction::new(vec![PowerPiece::new(1.0, f64::INFINITY, 1.0, -0.9).unwrap()]).unwrap();
    assert!(membership_failure(&shallow, &sp).is_some());
    assert!(matches!(
        centered_norm(&shallow, &sp),
        Err(MorreyError::NotInSpace(_))
    ));
    assert!(matches!(
        oracle_norm(&shallow, &sp, 1e-8),
        Err(MorreyError::NotInSpace(_))
    ));
    // The same cumulative integral shows the unbounded climb directly.
    assert!(n_of(&shallow, 1e4) > 1.5 * n_of(&shallow, 1e2));
    assert!(n_of(&shallow, 1e6) > 1.5 * n_of(&shallow, 1e4));
}
