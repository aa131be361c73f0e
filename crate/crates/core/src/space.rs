//! Space parameters and radial piecewise-power functions.
//!
//! Everything downstream works on [`RadialFunction`]: a finite list of
//! disjoint half-open radial intervals `[r_lo, r_hi)`, each carrying a power
//! profile `c · r^alpha`. Sums, slices, and sign patterns of such functions
//! stay in the class as long as overlapping stretches share an exponent,
//! which is what makes closed-form norm evaluation possible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MorreyError, Result};
use crate::num::{xpow, LOG_EXPONENT_EPS};

/// Which family of spaces the norm ranges over.
///
/// The two variants differ only in the radii the supremum sees: `Classical`
/// takes all balls, `Small` only those of radius below one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Classical,
    Small,
}

impl Variant {
    /// Exclusive upper bound for the ball radii in the supremum.
    pub fn radius_bound(self) -> f64 {
        match self {
            Variant::Classical => f64::INFINITY,
            Variant::Small => 1.0,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::Small => "small",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Variant {
    type Err = MorreyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Variant::Classical),
            "small" => Ok(Variant::Small),
            other => Err(MorreyError::InvalidParams(format!(
                "unknown variant {other:?}; expected \"classical\" or \"small\""
            ))),
        }
    }
}

/// Surface measure of the unit sphere in dimension `d`.
///
/// Computed by the two-step recurrence ω_{k+2} = (2π/k)·ω_k from ω_1 = 2 and
/// ω_2 = 2π, which is exact in the sense that it performs one multiplication
/// and one division per step instead of a gamma-function evaluation.
pub fn sphere_area(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be at least 1");
    let (mut k, mut c) = if d % 2 == 1 {
        (1usize, 2.0)
    } else {
        (2usize, std::f64::consts::TAU)
    };
    while k + 2 <= d {
        c *= std::f64::consts::TAU / k as f64;
        k += 2;
    }
    c
}

/// Dimension and integrability parameters of one space.
///
/// Invariant: `d ≥ 1` and `1 ≤ p ≤ q < ∞`. `p = q` is constructible (the
/// space degenerates to Lebesgue-like behavior) even though most functions
/// with mass at the origin then fall outside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpaceParams")]
pub struct SpaceParams {
    d: usize,
    p: f64,
    q: f64,
    variant: Variant,
}

#[derive(Deserialize)]
struct RawSpaceParams {
    d: usize,
    p: f64,
    q: f64,
    variant: Variant,
}

impl TryFrom<RawSpaceParams> for SpaceParams {
    type Error = MorreyError;

    fn try_from(raw: RawSpaceParams) -> Result<Self> {
        SpaceParams::new(raw.d, raw.p, raw.q, raw.variant)
    }
}

impl SpaceParams {
    pub fn new(d: usize, p: f64, q: f64, variant: Variant) -> Result<Self> {
        if d == 0 {
            return Err(MorreyError::InvalidParams(
                "dimension d must be at least 1".into(),
            ));
        }
        if !p.is_finite() || !q.is_finite() || p < 1.0 || q < p {
            return Err(MorreyError::InvalidParams(format!(
                "need 1 ≤ p ≤ q < ∞, got p = {p}, q = {q}"
            )));
        }
        Ok(SpaceParams { d, p, q, variant })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Scaling exponent γ = d(1 − p/q) of the normalized local mean.
    ///
    /// Zero exactly when p = q; positive otherwise.
    pub fn gamma(&self) -> f64 {
        self.d as f64 * (1.0 - self.p / self.q)
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        SpaceParams { variant, ..*self }
    }
}

/// One power profile `c · r^alpha` on the half-open interval `[r_lo, r_hi)`.
///
/// `r_hi` may be infinite; everything else is finite. `r_lo = 0` is allowed,
/// the profile value at the origin itself never enters any integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiece")]
pub struct PowerPiece {
    pub(crate) r_lo: f64,
    #[serde(with = "radius_token")]
    pub(crate) r_hi: f64,
    pub(crate) c: f64,
    pub(crate) alpha: f64,
}

#[derive(Deserialize)]
struct RawPiece {
    r_lo: f64,
    #[serde(with = "radius_token")]
    r_hi: f64,
    c: f64,
    alpha: f64,
}

impl TryFrom<RawPiece> for PowerPiece {
    type Error = MorreyError;

    fn try_from(raw: RawPiece) -> Result<Self> {
        PowerPiece::new(raw.r_lo, raw.r_hi, raw.c, raw.alpha)
    }
}

/// Serialization of a radius that may be infinite: finite values go out as
/// numbers, infinity as the string `"inf"`.
pub(crate) mod radius_token {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if r.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*r)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Token {
        Number(f64),
        Word(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Token::deserialize(d)? {
            Token::Number(x) => Ok(x),
            Token::Word(w) if w == "inf" => Ok(f64::INFINITY),
            Token::Word(w) => Err(serde::de::Error::custom(format!(
                "unrecognized radius token {w:?}; expected a number or \"inf\""
            ))),
        }
    }
}

impl PowerPiece {
    pub fn new(r_lo: f64, r_hi: f64, c: f64, alpha: f64) -> Result<Self> {
        if !r_lo.is_finite() || r_lo < 0.0 {
            return Err(MorreyError::InvalidParams(format!(
                "piece lower radius must be finite and nonnegative, got {r_lo}"
            )));
        }
        if r_hi.is_nan() || r_hi <= r_lo {
            return Err(MorreyError::InvalidParams(format!(
                "piece must satisfy r_lo < r_hi, got [{r_lo}, {r_hi})"
            )));
        }
        if !c.is_finite() || !alpha.is_finite() {
            return Err(MorreyError::InvalidParams(format!(
                "piece coefficient and exponent must be finite, got c = {c}, alpha = {alpha}"
            )));
        }
        Ok(PowerPiece {
            r_lo,
            r_hi,
            c,
            alpha,
        })
    }

    pub fn r_lo(&self) -> f64 {
        self.r_lo
    }

    pub fn r_hi(&self) -> f64 {
        self.r_hi
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A radial function given by finitely many disjoint power pieces.
///
/// The pieces are kept sorted by lower radius; gaps between them mean the
/// function is zero there. An empty piece list is the zero function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<PowerPiece>", try_from = "Vec<PowerPiece>")]
pub struct RadialFunction {
    pieces: Vec<PowerPiece>,
}

impl From<RadialFunction> for Vec<PowerPiece> {
    fn from(f: RadialFunction) -> Self {
        f.pieces
    }
}

impl TryFrom<Vec<PowerPiece>> for RadialFunction {
    type Error = MorreyError;

    fn try_from(pieces: Vec<PowerPiece>) -> Result<Self> {
        RadialFunction::new(pieces)
    }
}

impl RadialFunction {
    /// Builds a function from pieces in any order.
    ///
    /// Rejects overlapping pieces; drops zero-coefficient pieces and merges
    /// touching pieces with identical profiles, so structurally different
    /// inputs describing the same function compare equal.
    pub fn new(mut pieces: Vec<PowerPiece>) -> Result<Self> {
        pieces.sort_by(|a, b| a.r_lo.total_cmp(&b.r_lo));
        for w in pieces.windows(2) {
            if w[1].r_lo < w[0].r_hi {
                return Err(MorreyError::InvalidParams(format!(
                    "pieces [{}, {}) and [{}, {}) overlap",
                    w[0].r_lo, w[0].r_hi, w[1].r_lo, w[1].r_hi
                )));
            }
        }
        Ok(Self::assemble(pieces))
    }

    /// Canonicalizes sorted disjoint pieces: zero coefficients vanish,
    /// touching identical profiles fuse.
    fn assemble(pieces: Vec<PowerPiece>) -> Self {
        let mut out: Vec<PowerPiece> = Vec::new();
        for pc in pieces.into_iter().filter(|p| p.c != 0.0) {
            if let Some(prev) = out.last_mut() {
                if prev.r_hi == pc.r_lo && prev.c == pc.c && prev.alpha == pc.alpha {
                    prev.r_hi = pc.r_hi;
                    continue;
                }
            }
            out.push(pc);
        }
        RadialFunction { pieces: out }
    }

    pub fn zero() -> Self {
        RadialFunction { pieces: Vec::new() }
    }

    pub fn pieces(&self) -> &[PowerPiece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The piece whose half-open interval contains `r`, if any.
    pub(crate) fn piece_at(&self, r: f64) -> Option<&PowerPiece> {
        let idx = self.pieces.partition_point(|p| p.r_lo <= r);
        let piece = self.pieces.get(idx.checked_sub(1)?)?;
        (r < piece.r_hi).then_some(piece)
    }

    /// Profile value at radius `r > 0`; zero on gaps and beyond the support.
    pub fn value_at(&self, r: f64) -> f64 {
        match self.piece_at(r) {
            Some(p) => p.c * xpow(r, p.alpha),
            None => 0.0,
        }
    }

    /// All finite piece boundaries, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut cuts: Vec<f64> = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            cuts.push(p.r_lo);
            if p.r_hi.is_finite() {
                cuts.push(p.r_hi);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, k: f64) -> Self {
        assert!(k.is_finite(), "scale factor must be finite");
        Self::assemble(
            self.pieces
                .iter()
                .map(|p| PowerPiece { c: k * p.c, ..*p })
                .collect(),
        )
    }

    pub fn negate(&self) -> Self {
        self.scale(-1.0)
    }

    /// Pointwise sum.
    ///
    /// Fails with [`MorreyError::MismatchedExponents`] when the summands
    /// carry different exponents on an overlapping stretch; the sum then
    /// leaves the piecewise-power class and has no closed-form norm.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut cuts: Vec<f64> = Vec::new();
        for p in self.pieces.iter().chain(other.pieces.iter()) {
            cuts.push(p.r_lo);
            cuts.push(p.r_hi);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut out: Vec<PowerPiece> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (c, alpha) = match (self.piece_at(lo), other.piece_at(lo)) {
                (Some(a), Some(b)) => {
                    if a.alpha != b.alpha {
                        return Err(MorreyError::MismatchedExponents);
                    }
                    (a.c + b.c, a.alpha)
                }
                (Some(a), None) => (a.c, a.alpha),
                (None, Some(b)) => (b.c, b.alpha),
                (None, None) => continue,
            };
            out.push(PowerPiece {
                r_lo: lo,
                r_hi: hi,
                c,
                alpha,
            });
        }
        Ok(Self::assemble(out))
    }
}

/// Explains why `f` lies outside the space, or `None` if it is a member.
///
/// With `s = p·α + d` for the piece in question, the checks are:
///
/// * a piece touching the origin needs `s > 0` (local integrability of
///   `|f|^p`) and `α ≥ −d/q` (otherwise the norm blows up as `R → 0`);
/// * under the classical variant, a piece reaching infinity needs the
///   normalized mean bounded as `R → ∞`: automatic when `s < 0`, requires
///   `α ≤ −d/q` when `s > 0`, and requires `p < q` in the borderline
///   logarithmic case `s = 0`;
/// * the small variant never looks past radius one, so tails are free.
///
/// `s` within [`LOG_EXPONENT_EPS`] of zero counts as the logarithmic case,
/// matching the evaluation engine's routing exactly; a disagreement there
/// would admit functions whose norm the engine then computes as infinite.
pub fn membership_failure(f: &RadialFunction, sp: &SpaceParams) -> Option<String> {
    let d = sp.d() as f64;
    let dq = d / sp.q();
    for piece in f.pieces() {
        if piece.r_lo == 0.0 {
            let s = sp.p() * piece.alpha + d;
            if s <= LOG_EXPONENT_EPS {
                return Some(format!(
                    "piece on [0, {}) has p·α + d = {s:.3e} ≤ 0, so |f|^p is not integrable near the origin",
                    piece.r_hi
                ));
            }
            if piece.alpha < -dq {
                return Some(format!(
                    "origin exponent α = {} lies below −d/q = {}, so the norm is unbounded as R → 0",
                    piece.alpha, -dq
                ));
            }
        }
        if piece.r_hi.is_infinite() && sp.variant() == Variant::Classical {
            let s = sp.p() * piece.alpha + d;
            if s.abs() <= LOG_EXPONENT_EPS {
                if sp.gamma() <= 0.0 {
                    return Some(format!(
                        "tail exponent α = {} with p = q makes the norm grow logarithmically as R → ∞",
                        piece.alpha
                    ));
                }
            } else if s > 0.0 && piece.alpha > -dq {
                return Some(format!(
                    "tail exponent α = {} lies above −d/q = {}, so the norm is unbounded as R → ∞",
                    piece.alpha, -dq
                ));
            }
        }
    }
    None
}

/// [`membership_failure`] as a `Result` for call sites that only gate.
pub fn validate_membership(f: &RadialFunction, sp: &SpaceParams) -> Result<()> {
    match membership_failure(f, sp) {
        Some(reason) => Err(MorreyError::NotInSpace(reason)),
        None => Ok(()),
    }
}
