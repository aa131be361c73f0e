//! Geometric quantities of function pairs, and their extremal families.
//!
//! Each quotient is assembled from norms of explicit combinations, computed
//! by the closed-form engine whenever the combination stays inside the
//! shared-exponent family (it always does for the built-in witnesses) and by
//! the quadrature path otherwise. The matching closed-form bounds in
//! [`closed_form_bound`] are evaluated independently, so the `deviation`
//! field of a report is a genuine two-route consistency check.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::engine::{centered_norm, Method};
use crate::error::{MorreyError, Result};
use crate::num::xpow;
use crate::oracle::profile_norm;
use crate::space::{RadialFunction, SpaceParams, Variant};
use crate::witness::{build_octahedral_witnesses, build_witnesses};

/// Quadrature tolerance for combinations without a closed form.
const FALLBACK_TOL: f64 = 1e-10;
/// x and y count as the same vector when ‖x−y‖ falls below this fraction of
/// ‖x‖+‖y‖; the normalized difference is then pure cancellation noise.
const IDENTICAL_REL: f64 = 1e-13;

/// The quantities this crate evaluates, with their CLI tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientKind {
    VonNeumannJordan,
    James,
    DunklWilliams,
    Octahedral,
}

impl QuotientKind {
    pub const ALL: [QuotientKind; 4] = [
        QuotientKind::VonNeumannJordan,
        QuotientKind::James,
        QuotientKind::DunklWilliams,
        QuotientKind::Octahedral,
    ];

    pub fn token(self) -> &'static str {
        match self {
            QuotientKind::VonNeumannJordan => "nj",
            QuotientKind::James => "james",
            QuotientKind::DunklWilliams => "dw",
            QuotientKind::Octahedral => "octa",
        }
    }

    /// The limiting value the quotient approaches as ε → 0.
    pub fn target(self) -> f64 {
        match self {
            QuotientKind::VonNeumannJordan => 2.0,
            QuotientKind::James => 2.0,
            QuotientKind::DunklWilliams => 4.0,
            QuotientKind::Octahedral => 3.0,
        }
    }
}

impl fmt::Display for QuotientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for QuotientKind {
    type Err = MorreyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nj" => Ok(QuotientKind::VonNeumannJordan),
            "james" => Ok(QuotientKind::James),
            "dw" => Ok(QuotientKind::DunklWilliams),
            "octa" => Ok(QuotientKind::Octahedral),
            other => Err(MorreyError::InvalidParams(format!(
                "unknown quotient kind {other:?}; expected nj, james, dw, or octa"
            ))),
        }
    }
}

impl Serialize for QuotientKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.token())
    }
}

/// Norm of Σ wᵢ·fᵢ: closed form when the parts combine inside the
/// shared-exponent family, quadrature otherwise.
fn combo_norm(parts: &[(f64, &RadialFunction)], sp: &SpaceParams) -> Result<(f64, Method)> {
    let mut acc: Option<RadialFunction> = None;
    for (w, f) in parts {
        if *w == 0.0 || f.is_zero() {
            continue;
        }
        let scaled = f.scale(*w);
        acc = Some(match acc {
            None => scaled,
            Some(sum) => match sum.add(&scaled) {
                Ok(next) => next,
                Err(MorreyError::MismatchedExponents) => {
                    let n = profile_norm(parts, sp, FALLBACK_TOL)?;
                    return Ok((n.value, Method::Quadrature));
                }
                Err(e) => return Err(e),
            },
        });
    }
    let sum = acc.unwrap_or_else(RadialFunction::zero);
    Ok((centered_norm(&sum, sp)?.value, Method::ClosedForm))
}

fn worse(a: Method, b: Method) -> Method {
    if a == Method::Quadrature || b == Method::Quadrature {
        Method::Quadrature
    } else {
        Method::ClosedForm
    }
}

/// Norms of a pair, rejecting the zero element. A Small-variant function
/// supported entirely outside the unit ball has norm 0 without being the
/// empty function, so the check is on the computed norms, not the pieces.
fn norms_of(x: &RadialFunction, y: &RadialFunction, sp: &SpaceParams) -> Result<(f64, f64)> {
    let nx = centered_norm(x, sp)?.value;
    let ny = centered_norm(y, sp)?.value;
    if nx == 0.0 || ny == 0.0 {
        return Err(MorreyError::ZeroVector);
    }
    Ok((nx, ny))
}

/// Von Neumann–Jordan quotient of a pair:
/// (‖x+y‖² + ‖x−y‖²) / (2(‖x‖² + ‖y‖²)).
pub fn nj_quotient_with_method(
    x: &RadialFunction,
    y: &RadialFunction,
    sp: &SpaceParams,
) -> Result<(f64, Method)> {
    let (nx, ny) = norms_of(x, y, sp)?;
    let (nsum, m1) = combo_norm(&[(1.0, x), (1.0, y)], sp)?;
    let (ndiff, m2) = combo_norm(&[(1.0, x), (-1.0, y)], sp)?;
    let value = (nsum * nsum + ndiff * ndiff) / (2.0 * (nx * nx + ny * ny));
    Ok((value, worse(m1, m2)))
}

pub fn nj_quotient(x: &RadialFunction, y: &RadialFunction, sp: &SpaceParams) -> Result<f64> {
    Ok(nj_quotient_with_method(x, y, sp)?.0)
}

/// James quotient: min(‖x̂+ŷ‖, ‖x̂−ŷ‖) over the unit-normalized pair.
pub fn james_quotient_with_method(
    x: &RadialFunction,
    y: &RadialFunction,
    sp: &SpaceParams,
) -> Result<(f64, Method)> {
    let (nx, ny) = norms_of(x, y, sp)?;
    let (nsum, m1) = combo_norm(&[(1.0 / nx, x), (1.0 / ny, y)], sp)?;
    let (ndiff, m2) = combo_norm(&[(1.0 / nx, x), (-1.0 / ny, y)], sp)?;
    Ok((nsum.min(ndiff), worse(m1, m2)))
}

pub fn james_quotient(x: &RadialFunction, y: &RadialFunction, sp: &SpaceParams) -> Result<f64> {
    Ok(james_quotient_with_method(x, y, sp)?.0)
}

/// Dunkl–Williams quotient: (‖x‖+‖y‖)/‖x−y‖ · ‖x̂−ŷ‖.
pub fn dw_quotient_with_method(
    x: &RadialFunction,
    y: &RadialFunction,
    sp: &SpaceParams,
) -> Result<(f64, Method)> {
    let (nx, ny) = norms_of(x, y, sp)?;
    let (ndiff, m1) = combo_norm(&[(1.0, x), (-1.0, y)], sp)?;
    if ndiff < IDENTICAL_REL * (nx + ny) {
        return Err(MorreyError::IdenticalInputs);
    }
    let (nhat, m2) = combo_norm(&[(1.0 / nx, x), (-1.0 / ny, y)], sp)?;
    Ok(((nx + ny) / ndiff * nhat, worse(m1, m2)))
}

pub fn dw_quotient(x: &RadialFunction, y: &RadialFunction, sp: &SpaceParams) -> Result<f64> {
    Ok(dw_quotient_with_method(x, y, sp)?.0)
}

/// Patterns and joint method for the octahedral minimum. Inputs are
/// unit-normalized first; norm-0 inputs participate as zero, and only an
/// all-zero triple is rejected.
fn octahedral_patterns_impl(
    f: &RadialFunction,
    k: &RadialFunction,
    u: &RadialFunction,
    sp: &SpaceParams,
) -> Result<([f64; 4], Method)> {
    let mut inv = [0.0; 3];
    for (slot, g) in inv.iter_mut().zip([f, k, u]) {
        if !g.is_zero() {
            let n = centered_norm(g, sp)?.value;
            if n > 0.0 {
                *slot = 1.0 / n;
            }
        }
    }
    if inv == [0.0; 3] {
        return Err(MorreyError::ZeroVector);
    }
    let mut out = [0.0; 4];
    let mut method = Method::ClosedForm;
    for (slot, (s1, s2)) in out
        .iter_mut()
        .zip([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)])
    {
        let (n, m) = combo_norm(&[(inv[0], f), (s1 * inv[1], k), (s2 * inv[2], u)], sp)?;
        *slot = n;
        method = worse(method, m);
    }
    Ok((out, method))
}

/// Norms of f̂ + σ₁k̂ + σ₂û over the sign patterns (++, +−, −+, −−).
pub fn octahedral_pattern_norms(
    f: &RadialFunction,
    k: &RadialFunction,
    u: &RadialFunction,
    sp: &SpaceParams,
) -> Result<[f64; 4]> {
    Ok(octahedral_patterns_impl(f, k, u, sp)?.0)
}

/// Minimum over the sign patterns; on the extremal family it stays above
/// 3·(1−ε^γ)^{1/p} and tends to 3 as ε → 0, so no uniform octahedrality
/// margin exists.
pub fn octahedral_min_with_method(
    f: &RadialFunction,
    k: &RadialFunction,
    u: &RadialFunction,
    sp: &SpaceParams,
) -> Result<(f64, Method)> {
    let (norms, method) = octahedral_patterns_impl(f, k, u, sp)?;
    let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((min, method))
}

pub fn octahedral_min(
    f: &RadialFunction,
    k: &RadialFunction,
    u: &RadialFunction,
    sp: &SpaceParams,
) -> Result<f64> {
    Ok(octahedral_min_with_method(f, k, u, sp)?.0)
}

/// The analytic value of each quotient on its witness family, derived
/// independently of the norm engine. For the octahedral kind this is the
/// lower bound attained by the worst sign pattern as ε → 0, not the pattern
/// minimum itself.
pub fn closed_form_bound(
    kind: QuotientKind,
    epsilon: f64,
    delta: Option<f64>,
    sp: &SpaceParams,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MorreyError::InvalidParams(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let gamma = sp.gamma();
    if gamma <= 0.0 {
        return Err(MorreyError::InvalidParams(
            "closed-form bounds need p < q".into(),
        ));
    }
    let shrink = 1.0 - xpow(epsilon, gamma);
    let root = xpow(shrink, 1.0 / sp.p());
    match kind {
        QuotientKind::VonNeumannJordan => Ok(1.0 + xpow(shrink, 2.0 / sp.p())),
        QuotientKind::James => Ok(2.0 * root),
        QuotientKind::DunklWilliams => {
            let d = delta.unwrap_or(epsilon);
            if !(d > 0.0 && d < 1.0) {
                return Err(MorreyError::InvalidParams(format!(
                    "delta must lie in (0,1), got {d}"
                )));
            }
            Ok((4.0 + 2.0 * d) / (1.0 + d) * root)
        }
        QuotientKind::Octahedral => Ok(3.0 * root),
    }
}

/// One evaluated point: the computed quotient next to its analytic value.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub kind: QuotientKind,
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub variant: Variant,
    pub epsilon: f64,
    pub delta: Option<f64>,
    pub computed: f64,
    pub paper_value: f64,
    pub deviation: f64,
    pub method: Method,
}

pub const CSV_HEADER: &str =
    "kind,d,p,q,variant,epsilon,delta,computed,paper_value,deviation,method";

impl QuotientReport {
    pub fn csv_row(&self) -> String {
        let delta = self.delta.map(|d| d.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.d,
            self.p,
            self.q,
            self.variant.token(),
            self.epsilon,
            delta,
            self.computed,
            self.paper_value,
            self.deviation,
            self.method
        )
    }
}

/// Evaluates one quotient at one parameter point of its witness family.
pub fn quotient_report(
    kind: QuotientKind,
    sp: &SpaceParams,
    epsilon: f64,
    delta: Option<f64>,
) -> Result<QuotientReport> {
    let (computed, method, delta_used) = match kind {
        QuotientKind::VonNeumannJordan => {
            let w = build_witnesses(epsilon, 0.5, sp)?;
            let (v, m) = nj_quotient_with_method(&w.f, &w.k, sp)?;
            (v, m, None)
        }
        QuotientKind::James => {
            let w = build_witnesses(epsilon, 0.5, sp)?;
            let (v, m) = james_quotient_with_method(&w.f, &w.k, sp)?;
            (v, m, None)
        }
        QuotientKind::DunklWilliams => {
            let dl = delta.unwrap_or(epsilon);
            let w = build_witnesses(epsilon, dl, sp)?;
            let (v, m) = dw_quotient_with_method(&w.f, &w.l, sp)?;
            (v, m, Some(dl))
        }
        QuotientKind::Octahedral => {
            let ow = build_octahedral_witnesses(epsilon, sp)?;
            let (v, m) = octahedral_min_with_method(&ow.f, &ow.k, &ow.u, sp)?;
            (v, m, None)
        }
    };
    let paper_value = closed_form_bound(kind, epsilon, delta_used, sp)?;
    Ok(QuotientReport {
        kind,
        d: sp.d(),
        p: sp.p(),
        q: sp.q(),
        variant: sp.variant(),
        epsilon,
        delta: delta_used,
        computed,
        paper_value,
        deviation: (computed - paper_value).abs(),
        method,
    })
}

/// Evaluates one quotient over a grid of epsilons, in the given order.
/// `deltas`, if present, must pair up with `epsilons` one-to-one and is
/// only meaningful for the Dunkl–Williams kind.
pub fn sweep(
    kind: QuotientKind,
    sp: &SpaceParams,
    epsilons: &[f64],
    deltas: Option<&[f64]>,
) -> Result<Vec<QuotientReport>> {
    if let Some(ds) = deltas {
        if kind != QuotientKind::DunklWilliams {
            return Err(MorreyError::InvalidParams(format!(
                "delta only applies to the dw quotient, not {kind}"
            )));
        }
        if ds.len() != epsilons.len() {
            return Err(MorreyError::InvalidParams(format!(
                "got {} epsilons but {} deltas",
                epsilons.len(),
                ds.len()
            )));
        }
    }
    epsilons
        .iter()
        .enumerate()
        .map(|(i, &eps)| quotient_report(kind, sp, eps, deltas.map(|ds| ds[i])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(d: usize, p: f64, q: f64, variant: Variant) -> SpaceParams {
        SpaceParams::new(d, p, q, variant).unwrap()
    }

    #[test]
    fn nj_matches_analytic_value() {
        // γ = 1/2, ε = 1/4: shrink = 1/2, quotient = 1 + (1/2)² = 5/4.
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let w = build_witnesses(0.25, 0.5, &s).unwrap();
        let (v, m) = nj_quotient_with_method(&w.f, &w.k, &s).unwrap();
        assert!((v - 1.25).abs() <= 1e-13);
        assert_eq!(m, Method::ClosedForm);
    }

    #[test]
    fn james_matches_analytic_value() {
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let w = build_witnesses(0.25, 0.5, &s).unwrap();
        let v = james_quotient(&w.f, &w.k, &s).unwrap();
        assert!((v - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn dw_matches_analytic_value() {
        // (4 + 2δ)/(1 + δ)·(1 − ε^γ) with ε = 1/4, δ = 1/2: (5/1.5)·0.5.
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let w = build_witnesses(0.25, 0.5, &s).unwrap();
        let v = dw_quotient(&w.f, &w.l, &s).unwrap();
        let expect = 5.0 / 1.5 * 0.5;
        assert!((v - expect).abs() <= 1e-13, "{v} vs {expect}");
    }

    #[test]
    fn dw_detects_identical_inputs() {
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let w = build_witnesses(0.25, 1e-14, &s).unwrap();
        match dw_quotient(&w.f, &w.l, &s) {
            Err(MorreyError::IdenticalInputs) => {}
            other => panic!("expected IdenticalInputs, got {other:?}"),
        }
    }

    #[test]
    fn pair_edge_cases() {
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let w = build_witnesses(0.25, 0.5, &s).unwrap();
        let zero = RadialFunction::zero();
        assert!(matches!(
            nj_quotient(&w.f, &zero, &s),
            Err(MorreyError::ZeroVector)
        ));
        // y = x: nj hits the parallelogram identity, james the zero branch.
        assert!((nj_quotient(&w.f, &w.f, &s).unwrap() - 1.0).abs() <= 1e-14);
        assert_eq!(james_quotient(&w.f, &w.f, &s).unwrap(), 0.0);
        // y = −x: the normalized difference is 2x̂.
        let neg = w.f.negate();
        assert!((dw_quotient(&w.f, &neg, &s).unwrap() - 2.0).abs() <= 1e-14);
        // Sign and argument-order symmetry are bit-exact: the assembled
        // sums carry identical pieces either way.
        let a = nj_quotient(&w.f, &w.k, &s).unwrap();
        assert_eq!(a, nj_quotient(&w.k, &w.f, &s).unwrap());
        assert_eq!(a, nj_quotient(&w.f, &w.k.negate(), &s).unwrap());
    }

    #[test]
    fn octahedral_patterns_and_minimum() {
        let s = sp(1, 1.0, 2.0, Variant::Classical);
        let eps = 0.1;
        let ow = build_octahedral_witnesses(eps, &s).unwrap();
        let norms = octahedral_pattern_norms(&ow.f, &ow.k, &ow.u, &s).unwrap();
        // Pure patterns hit 3 exactly; mixed ones lose (3^p−(3^p−1)ε^γ)^{1/p}.
        let mixed = 3.0 - 2.0 * eps.sqrt();
        assert!((norms[0] - 3.0).abs() <= 3e-12, "++: {}", norms[0]);
        assert!((norms[3] - 3.0).abs() <= 3e-12, "--: {}", norms[3]);
        assert!((norms[1] - mixed).abs() <= 1e-12, "+-: {}", norms[1]);
        assert!((norms[2] - mixed).abs() <= 1e-12, "-+: {}", norms[2]);
        let v = octahedral_min(&ow.f, &ow.k, &ow.u, &s).unwrap();
        assert!((v - mixed).abs() <= 1e-12);
        let bound = closed_form_bound(QuotientKind::Octahedral, eps, None, &s).unwrap();
        assert!(v >= bound, "min {v} under bound {bound}");
    }

    #[test]
    fn octahedral_zero_inputs() {
        let s = sp(1, 1.0, 2.0, Variant::Classical);
        let ow = build_octahedral_witnesses(0.1, &s).unwrap();
        let zero = RadialFunction::zero();
        // Zero k and u leave the four patterns at ‖f̂‖ = 1.
        let norms = octahedral_pattern_norms(&ow.f, &zero, &zero, &s).unwrap();
        for n in norms {
            assert!((n - 1.0).abs() <= 1e-14);
        }
        assert!(matches!(
            octahedral_min(&zero, &zero, &zero, &s),
            Err(MorreyError::ZeroVector)
        ));
    }

    #[test]
    fn quadrature_fallback_for_mismatched_exponents() {
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let a = RadialFunction::new(vec![
            crate::space::PowerPiece::new(0.0, 1.0, 1.0, -0.3).unwrap()
        ])
        .unwrap();
        let b = RadialFunction::new(vec![
            crate::space::PowerPiece::new(0.0, 1.0, 1.0, -0.2).unwrap()
        ])
        .unwrap();
        let (v, m) = combo_norm(&[(1.0, &a), (1.0, &b)], &s).unwrap();
        assert_eq!(m, Method::Quadrature);
        assert!(v > 0.0);
        let (_, m) = nj_quotient_with_method(&a, &b, &s).unwrap();
        assert_eq!(m, Method::Quadrature);
    }

    #[test]
    fn report_and_sweep_shape() {
        let s = sp(1, 1.0, 2.0, Variant::Small);
        let eps = [0.5, 0.25, 0.125];
        let rows = sweep(QuotientKind::VonNeumannJordan, &s, &eps, None).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].epsilon, 0.25);
        assert!(
            rows[0].computed < rows[2].computed,
            "shrinking ε must grow nj"
        );
        for r in &rows {
            assert!(r.deviation <= 1e-12);
            assert!(r.delta.is_none());
            assert_eq!(
                r.csv_row().split(',').count(),
                CSV_HEADER.split(',').count()
            );
        }
        assert!(sweep(QuotientKind::James, &s, &eps, Some(&[0.1, 0.2, 0.3])).is_err());
        assert!(sweep(QuotientKind::DunklWilliams, &s, &eps, Some(&[0.1])).is_err());
        let dws = sweep(
            QuotientKind::DunklWilliams,
            &s,
            &eps,
            Some(&[0.1, 0.2, 0.3]),
        )
        .unwrap();
        assert_eq!(dws[2].delta, Some(0.3));
    }

    #[test]
    fn kind_tokens_round_trip() {
        for kind in QuotientKind::ALL {
            assert_eq!(kind.token().parse::<QuotientKind>().unwrap(), kind);
        }
        assert!("octahedral".parse::<QuotientKind>().is_err());
        assert_eq!(
            serde_json::to_string(&QuotientKind::James).unwrap(),
            "\"james\""
        );
    }

    #[test]
    fn report_serializes_with_wire_names() {
        let s = sp(2, 1.0, 2.0, Variant::Classical);
        let r = quotient_report(QuotientKind::Octahedral, &s, 0.5, None).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["kind"], "octa");
        assert_eq!(json["variant"], "classical");
        assert_eq!(json["method"], "ClosedForm");
        assert!(json["delta"].is_null());
        assert!(json["paper_value"].as_f64().unwrap() > 0.0);
    }
}
