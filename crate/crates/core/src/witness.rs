//! Extremal families on which the geometric quantities are evaluated.
//!
//! Everything is built from the critical profile r^{−d/q}, whose mean
//! oscillation M(R) is constant in R: truncations of it keep the full norm
//! while their differences lose an explicit (1 − ε^γ)^{1/p} factor, and that
//! mismatch is what drives every quotient here to its extreme.

use crate::error::{MorreyError, Result};
use crate::space::{PowerPiece, RadialFunction, SpaceParams, Variant};

/// The two-sided split family: f on (0,1) with its inner and outer parts.
#[derive(Debug, Clone)]
pub struct QuotientWitnesses {
    pub epsilon: f64,
    pub delta: f64,
    /// c·r^{−d/q} on (0,1).
    pub f: RadialFunction,
    /// Inner truncation f·χ_(0,ε); same norm as f.
    pub g: RadialFunction,
    /// Outer band f·χ_(ε,1).
    pub h: RadialFunction,
    /// Signed split g − h; same norm as f.
    pub k: RadialFunction,
    /// Weighted split (1+δ)g + (1−δ)h; norm (1+δ)·‖f‖.
    pub l: RadialFunction,
}

fn check_family_params(sp: &SpaceParams, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MorreyError::InvalidParams(format!(
            "witness family needs 0 < epsilon < 1, got {epsilon}"
        )));
    }
    if sp.gamma() <= 0.0 {
        return Err(MorreyError::InvalidParams(
            "witness family needs p < q; at p = q the critical profile is not in the space".into(),
        ));
    }
    Ok(())
}

/// Builds the split family at the critical exponent −d/q.
pub fn build_witnesses(epsilon: f64, delta: f64, sp: &SpaceParams) -> Result<QuotientWitnesses> {
    check_family_params(sp, epsilon)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(MorreyError::InvalidParams(format!(
            "witness family needs 0 < delta < 1, got {delta}"
        )));
    }
    let alpha = -(sp.d() as f64) / sp.q();
    let pc = |lo: f64, hi: f64, c: f64| PowerPiece::new(lo, hi, c, alpha);
    let func = |pieces: Vec<PowerPiece>| RadialFunction::new(pieces);

    Ok(QuotientWitnesses {
        epsilon,
        delta,
        f: func(vec![pc(0.0, 1.0, 1.0)?])?,
        g: func(vec![pc(0.0, epsilon, 1.0)?])?,
        h: func(vec![pc(epsilon, 1.0, 1.0)?])?,
        k: func(vec![pc(0.0, epsilon, 1.0)?, pc(epsilon, 1.0, -1.0)?])?,
        l: func(vec![
            pc(0.0, epsilon, 1.0 + delta)?,
            pc(epsilon, 1.0, 1.0 - delta)?,
        ])?,
    })
}

/// The four-band sign family on (0,∞) used for the octahedrality bound.
/// Classical variant only: the outer bands live beyond radius 1.
#[derive(Debug, Clone)]
pub struct OctahedralWitnesses {
    pub epsilon: f64,
    /// c·r^{−d/q} on all of (0,∞).
    pub f: RadialFunction,
    /// f·[χ_(0,1) − χ_(1,∞)]; same norm as f.
    pub k: RadialFunction,
    /// f·[χ_(0,ε) − χ_(ε,1) + χ_(1,1/ε) − χ_(1/ε,∞)]; same norm as f.
    pub u: RadialFunction,
    /// The four slices of f: (0,ε), (ε,1), (1,1/ε), (1/ε,∞).
    pub g: RadialFunction,
    pub h: RadialFunction,
    pub v: RadialFunction,
    pub w: RadialFunction,
}

/// Builds the sign family at the critical exponent −d/q.
pub fn build_octahedral_witnesses(epsilon: f64, sp: &SpaceParams) -> Result<OctahedralWitnesses> {
    check_family_params(sp, epsilon)?;
    if sp.variant() != Variant::Classical {
        return Err(MorreyError::InvalidParams(
            "the octahedral family needs the classical variant: its outer bands carry the mass"
                .into(),
        ));
    }
    let alpha = -(sp.d() as f64) / sp.q();
    let inv_eps = 1.0 / epsilon;
    let inf = f64::INFINITY;
    let pc = |lo: f64, hi: f64, c: f64| PowerPiece::new(lo, hi, c, alpha);
    let func = |pieces: Vec<PowerPiece>| RadialFunction::new(pieces);

    Ok(OctahedralWitnesses {
        epsilon,
        f: func(vec![pc(0.0, inf, 1.0)?])?,
        k: func(vec![pc(0.0, 1.0, 1.0)?, pc(1.0, inf, -1.0)?])?,
        u: func(vec![
            pc(0.0, epsilon, 1.0)?,
            pc(epsilon, 1.0, -1.0)?,
            pc(1.0, inv_eps, 1.0)?,
            pc(inv_eps, inf, -1.0)?,
        ])?,
        g: func(vec![pc(0.0, epsilon, 1.0)?])?,
        h: func(vec![pc(epsilon, 1.0, 1.0)?])?,
        v: func(vec![pc(1.0, inv_eps, 1.0)?])?,
        w: func(vec![pc(inv_eps, inf, 1.0)?])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::centered_norm;
    use crate::space::validate_membership;

    #[test]
    fn split_family_members_and_norm_chain() {
        let sp = SpaceParams::new(2, 1.5, 3.0, Variant::Small).unwrap();
        let w = build_witnesses(0.25, 0.5, &sp).unwrap();
        for f in [&w.f, &w.g, &w.h, &w.k, &w.l] {
            validate_membership(f, &sp).unwrap();
        }
        let nf = centered_norm(&w.f, &sp).unwrap().value;
        let ng = centered_norm(&w.g, &sp).unwrap().value;
        let nk = centered_norm(&w.k, &sp).unwrap().value;
        assert_eq!(nf, ng);
        assert_eq!(nf, nk);
        let nl = centered_norm(&w.l, &sp).unwrap().value;
        assert!((nl - 1.5 * nf).abs() <= 1e-13 * nf);
    }

    #[test]
    fn sign_family_members_and_exact_norm() {
        let sp = SpaceParams::new(1, 1.0, 2.0, Variant::Classical).unwrap();
        let ow = build_octahedral_witnesses(0.1, &sp).unwrap();
        for f in [&ow.f, &ow.k, &ow.u, &ow.g, &ow.h, &ow.v, &ow.w] {
            validate_membership(f, &sp).unwrap();
        }
        let nf = centered_norm(&ow.f, &sp).unwrap().value;
        let nk = centered_norm(&ow.k, &sp).unwrap().value;
        let nu = centered_norm(&ow.u, &sp).unwrap().value;
        assert_eq!(nf, nk);
        assert_eq!(nf, nu);
        // Slices recombine: g − h + v − w has the same profile as u.
        let rebuilt =
            ow.g.add(&ow.h.scale(-1.0))
                .unwrap()
                .add(&ow.v)
                .unwrap()
                .add(&ow.w.scale(-1.0))
                .unwrap();
        assert_eq!(centered_norm(&rebuilt, &sp).unwrap().value, nu);
    }

    #[test]
    fn parameter_domains_are_enforced() {
        let small = SpaceParams::new(1, 1.0, 2.0, Variant::Small).unwrap();
        let classical = SpaceParams::new(1, 1.0, 2.0, Variant::Classical).unwrap();
        let lebesgue = SpaceParams::new(1, 2.0, 2.0, Variant::Classical).unwrap();
        assert!(build_witnesses(0.0, 0.5, &small).is_err());
        assert!(build_witnesses(1.0, 0.5, &small).is_err());
        assert!(build_witnesses(0.5, 0.0, &small).is_err());
        assert!(build_witnesses(0.5, 1.0, &small).is_err());
        assert!(build_witnesses(0.5, 0.5, &lebesgue).is_err());
        assert!(build_octahedral_witnesses(0.5, &small).is_err());
        assert!(build_octahedral_witnesses(0.5, &classical).is_ok());
    }
}
