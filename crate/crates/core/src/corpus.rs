//! Seeded generators for the cross-check corpus.
//!
//! Everything here is deterministic in the seed, so a failing case can be
//! replayed from its index alone. The generated functions always satisfy the
//! membership rules of the space they are drawn for, and they deliberately
//! hit the engine's delicate spots: exponents exactly at −d/q (constant
//! mean), exactly at −d/p (logarithmic integrals), unbounded supports, and
//! gaps between pieces.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::space::{membership_failure, PowerPiece, RadialFunction, SpaceParams, Variant};

/// Dimensions the corpus cycles through.
pub const DIMS: [usize; 4] = [1, 2, 3, 5];

/// The corpus RNG; one fixed stream per seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random admissible parameters: 1 ≤ p < q ≤ 8 with a gap of at least 0.05,
/// so γ = d(1 − p/q) stays strictly positive.
pub fn random_space(rng: &mut ChaCha8Rng, d: usize, variant: Variant) -> SpaceParams {
    let p = rng.random_range(1.0..7.9);
    let q = rng.random_range((p + 0.05)..8.0);
    SpaceParams::new(d, p, q, variant).expect("generated parameters are admissible")
}

fn coeff(rng: &mut ChaCha8Rng) -> f64 {
    let mag = rng.random_range(0.1..3.0);
    if rng.random_bool(0.5) {
        mag
    } else {
        -mag
    }
}

/// A free interior exponent; nothing constrains pieces bounded away from
/// both 0 and ∞, except that −d/p (with probability 0.15) forces the
/// logarithmic branch of the integral.
fn interior_alpha(rng: &mut ChaCha8Rng, sp: &SpaceParams) -> f64 {
    if rng.random_bool(0.15) {
        -(sp.d() as f64) / sp.p()
    } else {
        rng.random_range(-3.0..1.5)
    }
}

/// Random member of the space: 1–6 pieces with independent exponents,
/// optional gaps, and one of four support shapes.
pub fn random_function(rng: &mut ChaCha8Rng, sp: &SpaceParams) -> RadialFunction {
    let d = sp.d() as f64;
    let dq = d / sp.q();
    let shape = rng.random_range(0..100u32);
    // 0..35 support touching 0, 35..60 bounded away, 60..85 unbounded,
    // 85..100 the full line at the critical exponent.
    let touches_zero = shape < 35 || (60..85).contains(&shape) && rng.random_bool(0.5);
    let unbounded = (60..85).contains(&shape);

    if shape >= 85 {
        let c = coeff(rng);
        let f = RadialFunction::new(vec![
            PowerPiece::new(0.0, f64::INFINITY, c, -dq).expect("valid piece")
        ])
        .expect("valid function");
        debug_assert!(membership_failure(&f, sp).is_none());
        return f;
    }

    let n_pieces = rng.random_range(1..=6usize);
    let mut pieces = Vec::with_capacity(n_pieces);
    let mut lo: f64 = if touches_zero {
        0.0
    } else {
        let start_hi = if sp.variant() == Variant::Small {
            0.8
        } else {
            1.2
        };
        rng.random_range(0.05..start_hi)
    };
    for i in 0..n_pieces {
        let last = i + 1 == n_pieces;
        let hi = lo + rng.random_range(0.05..1.5);
        let (lo_eff, hi_eff) = if last && unbounded {
            (lo, f64::INFINITY)
        } else {
            (lo, hi)
        };
        let alpha = match (lo_eff == 0.0, hi_eff.is_infinite()) {
            // Both ends constrained: only the critical exponent fits.
            (true, true) => -dq,
            // Origin piece: α ≥ −d/q keeps the mean bounded near 0.
            (true, false) => {
                if rng.random_bool(0.25) {
                    -dq
                } else {
                    rng.random_range(-dq..1.5)
                }
            }
            // Tail piece: α ≤ −d/q keeps the mean bounded at ∞; the atoms
            // land exactly on the constant-mean and logarithmic cases.
            (false, true) => {
                let roll = rng.random_range(0..10u32);
                if roll < 2 {
                    -dq
                } else if roll < 4 {
                    -d / sp.p()
                } else {
                    rng.random_range((-dq - 2.5)..-dq)
                }
            }
            (false, false) => interior_alpha(rng, sp),
        };
        pieces.push(PowerPiece::new(lo_eff, hi_eff, coeff(rng), alpha).expect("valid piece"));
        lo = hi;
        if rng.random_bool(0.3) {
            lo += rng.random_range(0.05..1.0);
        }
    }
    let f = RadialFunction::new(pieces).expect("valid function");
    debug_assert!(
        membership_failure(&f, sp).is_none(),
        "corpus produced a non-member"
    );
    f
}

/// Random member with |f| radially nonincreasing: positive coefficients,
/// nonpositive exponents, and at each junction a continuity-or-drop factor
/// τ ∈ (0.4, 1] so the profile never jumps upward.
pub fn random_nonincreasing(rng: &mut ChaCha8Rng, sp: &SpaceParams) -> RadialFunction {
    let dq = sp.d() as f64 / sp.q();
    let n_pieces = rng.random_range(1..=4usize);
    let mut pieces = Vec::with_capacity(n_pieces);
    let mut alpha = if rng.random_bool(0.3) {
        -dq
    } else {
        rng.random_range((-0.999 * dq)..0.0)
    };
    let mut c = rng.random_range(0.2..2.0);
    let mut lo = 0.0;
    for _ in 0..n_pieces {
        let hi = lo + rng.random_range(0.1..0.6);
        pieces.push(PowerPiece::new(lo, hi, c, alpha).expect("valid piece"));
        let next_alpha = if alpha >= -1e-9 {
            0.0
        } else {
            rng.random_range(alpha..0.0)
        };
        let tau = rng.random_range(0.4..1.0);
        c = tau * c * hi.powf(alpha - next_alpha);
        alpha = next_alpha;
        lo = hi;
    }
    let f = RadialFunction::new(pieces).expect("valid function");
    debug_assert!(membership_failure(&f, sp).is_none());
    f
}

/// Two members over a shared breakpoint ladder with shared per-window
/// exponents, so their sum and difference stay in the closed-form family.
/// Supports are bounded and may differ (windows can be switched off per
/// function).
pub fn random_compatible_pair(
    rng: &mut ChaCha8Rng,
    sp: &SpaceParams,
) -> (RadialFunction, RadialFunction) {
    let dq = sp.d() as f64 / sp.q();
    let n_windows = rng.random_range(1..=4usize);
    let mut cuts = vec![0.0];
    for _ in 0..n_windows {
        cuts.push(cuts.last().unwrap() + rng.random_range(0.1..0.8));
    }
    let mut fa = Vec::new();
    let mut fb = Vec::new();
    for w in 0..n_windows {
        let alpha = if w == 0 {
            if rng.random_bool(0.25) {
                -dq
            } else {
                rng.random_range(-dq..1.0)
            }
        } else {
            interior_alpha(rng, sp)
        };
        for target in [&mut fa, &mut fb] {
            if rng.random_bool(0.2) {
                continue; // window off for this function
            }
            target.push(
                PowerPiece::new(cuts[w], cuts[w + 1], coeff(rng), alpha).expect("valid piece"),
            );
        }
    }
    let a = RadialFunction::new(fa).expect("valid function");
    let b = RadialFunction::new(fb).expect("valid function");
    debug_assert!(membership_failure(&a, sp).is_none());
    debug_assert!(membership_failure(&b, sp).is_none());
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let sp = SpaceParams::new(2, 1.0, 2.0, Variant::Classical).unwrap();
        let mut r1 = rng(9);
        let mut r2 = rng(9);
        for _ in 0..20 {
            let f1 = random_function(&mut r1, &sp);
            let f2 = random_function(&mut r2, &sp);
            assert_eq!(format!("{f1:?}"), format!("{f2:?}"));
        }
    }

    #[test]
    fn generated_functions_are_members() {
        let mut r = rng(1);
        for &d in &DIMS {
            for variant in [Variant::Classical, Variant::Small] {
                for _ in 0..60 {
                    let sp = random_space(&mut r, d, variant);
                    let f = random_function(&mut r, &sp);
                    assert!(
                        membership_failure(&f, &sp).is_none(),
                        "non-member for d={d} {variant:?}: {f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonincreasing_profiles_do_not_increase() {
        let mut r = rng(2);
        for _ in 0..40 {
            let sp = random_space(&mut r, 2, Variant::Classical);
            let f = random_nonincreasing(&mut r, &sp);
            let mut prev = f64::INFINITY;
            for j in 1..200 {
                let x = j as f64 * 0.015;
                let v = f.value_at(x);
                assert!(v >= 0.0);
                assert!(
                    v <= prev * (1.0 + 1e-12) || (prev == 0.0 && v == 0.0),
                    "profile rose at r={x}: {prev} -> {v} in {f:?}"
                );
                prev = v;
            }
        }
    }

    #[test]
    fn compatible_pairs_combine() {
        let mut r = rng(3);
        for _ in 0..60 {
            let sp = random_space(&mut r, 3, Variant::Small);
            let (a, b) = random_compatible_pair(&mut r, &sp);
            a.add(&b).expect("shared ladder must combine");
            a.add(&b.scale(-1.0)).expect("difference must combine");
        }
    }
}
