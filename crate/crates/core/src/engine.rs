//! Closed-form evaluation of the centered norm.
//!
//! For a radial profile φ the quantity under the supremum is
//!
//! ```text
//! N(R) = |B(0,R)|^{1/q − 1/p} · (ω_d · I(R))^{1/p},   I(R) = ∫_0^R |φ|^p r^{d−1} dr
//! ```
//!
//! and with γ = d(1 − p/q) and M(R) = R^{−γ}·I(R) this is a fixed monotone
//! map of M, so the engine maximizes M. On each stretch between piece
//! boundaries, M(R) = a·R^{−γ} + coeff·R^e is a two-term power expression
//! (or carries a logarithm in the borderline case p·α + d = 0), so the
//! supremum is found from endpoints plus at most one interior critical
//! point per stretch.
//!
//! The decomposition is arranged so that cancellations the algebra promises
//! are exact in floating point: `a` is computed as `I(lo) − coeff·lo^expo`
//! with the same power evaluation that produced `I(lo)`, hence a profile
//! whose |φ| matches `c·r^α` on contiguous pieces yields `a = 0` bit-exactly
//! on every one of them.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{MorreyError, Result};
use crate::num::{xpow, LOG_EXPONENT_EPS};
use crate::search::golden_max;
use crate::space::{sphere_area, validate_membership, RadialFunction, SpaceParams};

/// How a norm value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl Method {
    pub fn token(self) -> &'static str {
        match self {
            Method::ClosedForm => "ClosedForm",
            Method::Quadrature => "Quadrature",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// Where the supremum over ball radii sits.
///
/// `At(r)` means the value N(r) is attained (`r = ∞` marks a constant
/// stretch extending to arbitrarily large radii). `UpperLimit(r)` means the
/// supremum is only approached as R → r from below, which happens exactly at
/// the open upper edge of the radius range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupremumRadius {
    At(f64),
    UpperLimit(f64),
}

impl SupremumRadius {
    pub fn attained(self) -> bool {
        matches!(self, SupremumRadius::At(_))
    }

    pub fn radius(self) -> f64 {
        match self {
            SupremumRadius::At(r) | SupremumRadius::UpperLimit(r) => r,
        }
    }
}

/// Result of a norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub r_star: SupremumRadius,
    pub method: Method,
}

impl NormResult {
    pub fn attained(&self) -> bool {
        self.r_star.attained()
    }
}

/// Wire form: `{"value": v, "r_star": number|"inf"|"limit", "attained": bool,
/// "method": string}`. Infinite radii serialize as `"inf"` whether attained
/// or not; a finite unattained radius (the open boundary at 1) as `"limit"`.
impl Serialize for NormResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NormResult", 4)?;
        st.serialize_field("value", &self.value)?;
        match self.r_star {
            SupremumRadius::At(r) if r.is_finite() => st.serialize_field("r_star", &r)?,
            SupremumRadius::UpperLimit(r) if r.is_finite() => {
                st.serialize_field("r_star", "limit")?
            }
            _ => st.serialize_field("r_star", "inf")?,
        }
        st.serialize_field("attained", &self.attained())?;
        st.serialize_field("method", self.method.token())?;
        st.end()
    }
}

/// I(R) on one stretch between adjacent piece boundaries.
#[derive(Debug, Clone, Copy)]
enum Term {
    /// φ ≡ 0: I constant at `i_lo`.
    Gap,
    /// I(R) = a + coeff·R^expo. `e = p·(α + d/q)` is the exponent of the
    /// coefficient term of M, kept separately instead of as `expo − γ` so
    /// that profiles with α = −d/q get e = 0 exactly.
    Power {
        a: f64,
        coeff: f64,
        expo: f64,
        e: f64,
    },
    /// I(R) = i_lo + coeff·ln(R/lo), the borderline p·α + d = 0 case.
    Log { coeff: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    i_lo: f64,
    term: Term,
}

impl Segment {
    fn integral_at(&self, r: f64) -> f64 {
        match self.term {
            Term::Gap => self.i_lo,
            Term::Power { a, coeff, expo, .. } => a + coeff * xpow(r, expo),
            Term::Log { coeff } => self.i_lo + coeff * (r / self.lo).ln(),
        }
    }

    fn mean_at(&self, r: f64, gamma: f64) -> f64 {
        match self.term {
            Term::Gap => self.i_lo * xpow(r, -gamma),
            Term::Power { a, coeff, e, .. } => a * xpow(r, -gamma) + coeff * xpow(r, e),
            Term::Log { coeff } => xpow(r, -gamma) * (self.i_lo + coeff * (r / self.lo).ln()),
        }
    }
}

/// The cumulative integral I(R) = ∫_0^R |φ|^p r^{d−1} dr in closed form.
///
/// Segments tile [0, ∞); each carries I at its left end and the elementary
/// antiderivative valid on it.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    segments: Vec<Segment>,
}

impl CumulativeIntegral {
    /// I(r) for any r ≥ 0.
    pub fn eval(&self, r: f64) -> f64 {
        let idx = self.segments.partition_point(|s| s.lo < r).max(1) - 1;
        self.segments[idx].integral_at(r.max(self.segments[idx].lo))
    }
}

/// Builds the closed-form cumulative integral of |f|^p against r^{d−1}.
///
/// Fails with [`MorreyError::DivergentAtOrigin`] when the piece touching the
/// origin has p·α + d ≤ 0, in which case I(R) is infinite for every R.
pub fn cumulative_integral(f: &RadialFunction, sp: &SpaceParams) -> Result<CumulativeIntegral> {
    let p = sp.p();
    let d = sp.d() as f64;
    let dq = d / sp.q();

    let mut cuts = vec![0.0];
    cuts.extend(f.breakpoints());
    cuts.push(f64::INFINITY);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut segments = Vec::with_capacity(cuts.len() - 1);
    let mut i_acc = 0.0_f64;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let i_lo = i_acc;
        let term = match f.piece_at(lo) {
            None => Term::Gap,
            Some(pc) => {
                let s = p * pc.alpha + d;
                let cp = xpow(pc.c.abs(), p);
                if s <= LOG_EXPONENT_EPS && lo == 0.0 {
                    return Err(MorreyError::DivergentAtOrigin(format!(
                        "piece [0, {hi}) with p·α + d = {s:.3e}"
                    )));
                }
                if s.abs() <= LOG_EXPONENT_EPS {
                    Term::Log { coeff: cp }
                } else {
                    let coeff = cp / s;
                    let a = i_lo - coeff * xpow(lo, s);
                    Term::Power {
                        a,
                        coeff,
                        expo: s,
                        e: p * (pc.alpha + dq),
                    }
                }
            }
        };
        let seg = Segment { lo, hi, i_lo, term };
        if hi.is_finite() {
            i_acc = seg.integral_at(hi);
        }
        segments.push(seg);
    }
    Ok(CumulativeIntegral { segments })
}

/// One contender for the supremum of M.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    m: f64,
    r: SupremumRadius,
}

/// Keeps the better candidate: larger M wins; on an exact tie an attained
/// radius beats a limit, and among those the smaller radius is kept.
fn consider(best: &mut Option<Candidate>, c: Candidate) {
    debug_assert!(!c.m.is_nan(), "candidate mean is NaN at {:?}", c.r);
    if c.m.is_nan() {
        return;
    }
    let Some(b) = best else {
        *best = Some(c);
        return;
    };
    let replace = c.m > b.m
        || (c.m == b.m
            && ((c.r.attained() && !b.r.attained())
                || (c.r.attained() == b.r.attained() && c.r.radius() < b.r.radius())));
    if replace {
        *best = Some(c);
    }
}

/// Golden-section candidates snap to an endpoint when they land within this
/// band of it (measured in ln R); the endpoint candidate already covers the
/// value, and keeps the attainment flag honest at the open boundary.
const LOG_BAND: f64 = 1e-9;

/// Absolute tolerance for golden-section search in the ln R coordinate,
/// which is a relative tolerance on the radius itself.
const GOLDEN_TOL: f64 = 1e-12;

fn segment_candidates(seg: &Segment, gamma: f64, hi_c: f64, edge: bool, out: &mut Vec<Candidate>) {
    let right = |m: f64| Candidate {
        m,
        r: if edge {
            SupremumRadius::UpperLimit(hi_c)
        } else {
            SupremumRadius::At(hi_c)
        },
    };
    match seg.term {
        Term::Gap => {
            // M = i_lo·R^{−γ} is nonincreasing; a zero stretch only matters
            // for the all-zero function, where it pins r_star to the range end.
            if seg.i_lo == 0.0 {
                out.push(Candidate {
                    m: 0.0,
                    r: SupremumRadius::At(hi_c),
                });
            } else {
                out.push(Candidate {
                    m: seg.i_lo * xpow(seg.lo, -gamma),
                    r: SupremumRadius::At(seg.lo),
                });
            }
        }
        Term::Power { a, coeff, expo, e } => {
            if a == 0.0 && e == 0.0 {
                // M ≡ coeff on the whole stretch: attained everywhere, and
                // reported at the right end when the stretch starts at 0.
                let r = if seg.lo > 0.0 { seg.lo } else { hi_c };
                out.push(Candidate {
                    m: coeff,
                    r: SupremumRadius::At(r),
                });
                return;
            }
            if seg.lo > 0.0 {
                out.push(Candidate {
                    m: seg.mean_at(seg.lo, gamma),
                    r: SupremumRadius::At(seg.lo),
                });
            }
            if hi_c.is_finite() {
                out.push(right(seg.mean_at(hi_c, gamma)));
            } else {
                // R → ∞ limit; membership guarantees e ≤ 0 out here.
                let lim = if gamma == 0.0 { a } else { 0.0 } + if e == 0.0 { coeff } else { 0.0 };
                out.push(Candidate {
                    m: lim,
                    r: SupremumRadius::UpperLimit(f64::INFINITY),
                });
            }
            // M' = 0 at R^expo = γ·a/(e·coeff): the single interior critical
            // point. A minimum can land here too; it simply never wins.
            if gamma > 0.0 && e != 0.0 && a != 0.0 {
                let g = gamma * a / (e * coeff);
                if g > 0.0 && g.is_finite() {
                    let rc = xpow(g, 1.0 / expo);
                    if seg.lo < rc && rc < hi_c {
                        out.push(Candidate {
                            m: seg.mean_at(rc, gamma),
                            r: SupremumRadius::At(rc),
                        });
                    }
                }
            }
        }
        Term::Log { coeff } => {
            out.push(Candidate {
                m: seg.mean_at(seg.lo, gamma),
                r: SupremumRadius::At(seg.lo),
            });
            if hi_c.is_finite() {
                out.push(right(seg.mean_at(hi_c, gamma)));
            }
            if gamma > 0.0 {
                // In t = ln R the critical point satisfies t − t_lo =
                // 1/γ − i_lo/coeff ≤ 1/γ, so the search window below always
                // brackets it (or the maximum sits at t_lo).
                let t_lo = seg.lo.ln();
                let t_hi = hi_c.ln();
                let window_hi = t_hi.min(t_lo + 1.0 / gamma);
                let i_lo = seg.i_lo;
                let h = |t: f64| (-gamma * t).exp() * (i_lo + coeff * (t - t_lo));
                let (t_star, v_star) = golden_max(h, t_lo, window_hi, GOLDEN_TOL);
                let near_lo = t_star <= t_lo + LOG_BAND;
                let near_hi = t_star >= t_hi - LOG_BAND;
                if !near_lo && !near_hi {
                    out.push(Candidate {
                        m: v_star,
                        r: SupremumRadius::At(t_star.exp()),
                    });
                }
            }
        }
    }
}

/// Computes the centered norm of `f` in the space `sp` by exact piecewise
/// maximization of M(R).
pub fn centered_norm(f: &RadialFunction, sp: &SpaceParams) -> Result<NormResult> {
    validate_membership(f, sp)?;
    let ci = cumulative_integral(f, sp)?;
    let bound = sp.variant().radius_bound();
    let gamma = sp.gamma();

    let mut best: Option<Candidate> = None;
    let mut scratch = Vec::new();
    for seg in &ci.segments {
        if seg.lo >= bound {
            break;
        }
        let hi_c = seg.hi.min(bound);
        let edge = seg.hi >= bound;
        scratch.clear();
        segment_candidates(seg, gamma, hi_c, edge, &mut scratch);
        for c in scratch.drain(..) {
            consider(&mut best, c);
        }
    }

    let best = best.expect("segments tile (0, ∞), so at least one candidate exists");
    let cd = sphere_area(sp.d());
    let d = sp.d() as f64;
    let m = best.m.max(0.0);
    let value = xpow(cd / d, 1.0 / sp.q() - 1.0 / sp.p()) * xpow(cd * m, 1.0 / sp.p());
    if !value.is_finite() {
        return Err(MorreyError::NumericalOverflow(format!(
            "norm from peak mean {m:e} at radius {:e}",
            best.r.radius()
        )));
    }
    Ok(NormResult {
        value,
        r_star: best.r,
        method: Method::ClosedForm,
    })
}
