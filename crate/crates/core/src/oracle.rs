//! Independent numerical verification of the norm engine.
//!
//! [`oracle_norm`] recomputes the centered norm with no shared code path:
//! the radial integral comes from adaptive Gauss–Kronrod quadrature and the
//! supremum over R from a dense geometric grid with golden-section
//! refinement, plus a geometric scan beyond the grid for classical tails
//! whose peak sits at very large radii. [`offcenter_probe`] additionally
//! samples balls centered away from the origin, giving a statistical lower
//! bound on the full supremum over centers that the analytic engine never
//! searches.

use std::cell::Cell;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Method, NormResult, SupremumRadius};
use crate::error::{MorreyError, Result};
use crate::num::xpow;
use crate::quad::integrate;
use crate::search::golden_max;
use crate::space::{sphere_area, validate_membership, RadialFunction, SpaceParams, Variant};

/// Supremum grid density: points per decade of radius.
const GRID_PER_DECADE: f64 = 512.0;
/// Grid span below the smallest breakpoint and above the largest.
const GRID_SPAN_BELOW: f64 = 1e-6;
const GRID_SPAN_ABOVE: f64 = 1e3;
/// Grid local maxima within this fraction of the best are refined too.
const REFINE_FRACTION: f64 = 0.99;
/// Prominence a grid local maximum must have over its neighbors to earn its
/// own refinement; plateaus (where the grid value already equals the
/// supremum to rounding) stay below it and are refined once, at the argmax.
const PEAK_PROMINENCE: f64 = 1e-12;
/// Cap on refinement brackets per evaluation.
const REFINE_CAP: usize = 64;
/// Tail scan: step budget and the flatness rule that declares a limit.
const TAIL_STEPS_MAX: usize = 200;
const FLAT_REL: f64 = 1e-14;
const FLAT_STREAK: usize = 3;

/// A weighted sum of radial functions, evaluated pointwise. The quadrature
/// path works on this directly, so it also covers combinations whose pieces
/// do not share exponents and therefore have no closed form.
struct Profile<'a> {
    parts: Vec<(f64, &'a RadialFunction)>,
    p: f64,
    d: f64,
    gamma: f64,
    /// (ω_d/d)^{1/q−1/p}, the radius-independent factor of N.
    front: f64,
    cd: f64,
}

impl Profile<'_> {
    /// Single-term powers live at radius `probe`, as (effective
    /// coefficient, exponent).
    fn terms_at(&self, probe: f64) -> Vec<(f64, f64)> {
        let mut terms = Vec::new();
        for (w, f) in &self.parts {
            for pc in f.pieces() {
                if pc.r_lo() <= probe && probe < pc.r_hi() {
                    terms.push((w * pc.c(), pc.alpha()));
                }
            }
        }
        terms
    }

    /// |Σ cᵢ r^{αᵢ}|^p · r^{d−1} on a breakpoint-free interval, factored
    /// against the locally dominant term and assembled in log space: steep
    /// exponents far from r = 1 overflow the naive product long before the
    /// integrand itself leaves f64 range.
    fn cell_integrand(&self, lo: f64, hi: f64) -> impl Fn(f64) -> f64 + '_ {
        let probe = (lo * hi).sqrt().max(lo);
        let terms = self.terms_at(probe);
        let lp = probe.ln();
        let beta = terms
            .iter()
            .copied()
            .max_by(|a, b| (a.0.abs().ln() + a.1 * lp).total_cmp(&(b.0.abs().ln() + b.1 * lp)))
            .map(|(_, a)| a)
            .unwrap_or(0.0);
        let tail_expo = self.p * beta + self.d - 1.0;
        move |r: f64| {
            if terms.is_empty() {
                return 0.0;
            }
            let sum: f64 = terms.iter().map(|&(c, a)| c * xpow(r, a - beta)).sum();
            (self.p * sum.abs().ln() + tail_expo * r.ln()).exp()
        }
    }

    /// N from ln R and I(R); works at radii far beyond f64 range.
    fn norm_at(&self, t: f64, i: f64) -> f64 {
        if i <= 0.0 {
            return 0.0;
        }
        let mean = (i.ln() - self.gamma * t).exp();
        self.front * xpow(self.cd * mean, 1.0 / self.p)
    }

    /// Pieces that reach r = ∞, as (effective coefficient, exponent).
    fn live_tail(&self) -> Vec<(f64, f64)> {
        let mut live = Vec::new();
        for (w, f) in &self.parts {
            for pc in f.pieces() {
                if pc.r_hi().is_infinite() {
                    live.push((w * pc.c(), pc.alpha()));
                }
            }
        }
        live
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(MorreyError::InvalidParams(format!(
            "tol must lie in (0, 1e-4], got {tol}"
        )));
    }
    Ok(())
}

/// Quadrature-path norm of a weighted sum of radial functions.
///
/// Every part must be a member of the space individually; the sum then is by
/// the triangle inequality.
pub(crate) fn profile_norm(
    parts: &[(f64, &RadialFunction)],
    sp: &SpaceParams,
    tol: f64,
) -> Result<NormResult> {
    check_tol(tol)?;
    for (_, f) in parts {
        validate_membership(f, sp)?;
    }
    let live_parts: Vec<(f64, &RadialFunction)> = parts
        .iter()
        .filter(|(w, f)| *w != 0.0 && !f.is_zero())
        .map(|(w, f)| (*w, *f))
        .collect();
    if live_parts.is_empty() {
        return Ok(NormResult {
            value: 0.0,
            r_star: SupremumRadius::At(sp.variant().radius_bound()),
            method: Method::Quadrature,
        });
    }

    let cd = sphere_area(sp.d());
    let profile = Profile {
        parts: live_parts,
        p: sp.p(),
        d: sp.d() as f64,
        gamma: sp.gamma(),
        front: xpow(cd / sp.d() as f64, 1.0 / sp.q() - 1.0 / sp.p()),
        cd,
    };

    // Breakpoints of the combination; the Small variant pins 1.0 so the grid
    // ends exactly at the open boundary.
    let mut bps: Vec<f64> = Vec::new();
    for (_, f) in &profile.parts {
        bps.extend(f.breakpoints().into_iter().filter(|&r| r > 0.0));
    }
    if sp.variant() == Variant::Small {
        bps.push(1.0);
    }
    bps.sort_by(f64::total_cmp);
    bps.dedup();

    let r_min_bp = bps.first().copied().unwrap_or(1.0);
    let r_max_bp = bps.last().copied().unwrap_or(1.0);
    let grid_lo = GRID_SPAN_BELOW * r_min_bp;
    let grid_hi = match sp.variant() {
        Variant::Small => 1.0,
        Variant::Classical => GRID_SPAN_ABOVE * r_max_bp,
    };

    // Geometric grid merged with the exact breakpoints.
    let t_lo = grid_lo.ln();
    let t_hi = grid_hi.ln();
    let n_pts =
        ((GRID_PER_DECADE * (t_hi - t_lo) / std::f64::consts::LN_10).ceil() as usize).max(8);
    let mut rs: Vec<f64> = (0..=n_pts)
        .map(|j| (t_lo + (t_hi - t_lo) * j as f64 / n_pts as f64).exp())
        .collect();
    rs[0] = grid_lo;
    *rs.last_mut().unwrap() = grid_hi;
    rs.extend(bps.iter().copied().filter(|&b| b > grid_lo && b < grid_hi));
    rs.sort_by(f64::total_cmp);
    rs.dedup();

    let cell_tol = tol / 10.0;

    // Cumulative integral at every grid radius. The first cell starts at 0;
    // if any part touches the origin, the substitution r = τ^{2/s₀} with
    // s₀ = p·α_min + d turns the worst-case integrand into ~τ, which the
    // quadrature handles without endpoint refinement.
    let mut origin_terms: Vec<(f64, f64)> = Vec::new();
    for (w, f) in &profile.parts {
        for pc in f.pieces() {
            if pc.r_lo() == 0.0 {
                origin_terms.push((w * pc.c(), pc.alpha()));
            }
        }
    }
    let mut is: Vec<f64> = Vec::with_capacity(rs.len());
    let mut acc = if origin_terms.is_empty() {
        0.0
    } else {
        // Factored against α_min the τ-power is k·s₀ − 1 = 1 exactly, so the
        // substituted integrand is |Σ cᵢ τ^{k(αᵢ−α_min)}|^p · k·τ: bounded
        // near 0 and free of the overflow the direct r-form hits at steep
        // α·p.
        let origin_alpha = origin_terms
            .iter()
            .map(|t| t.1)
            .fold(f64::INFINITY, f64::min);
        let s0 = profile.p * origin_alpha + profile.d;
        let k = 2.0 / s0;
        let tau_hi = xpow(rs[0], 1.0 / k);
        integrate(
            &|tau: f64| {
                if tau <= 0.0 {
                    return 0.0;
                }
                let lr = k * tau.ln();
                let sum: f64 = origin_terms
                    .iter()
                    .map(|&(c, a)| c * ((a - origin_alpha) * lr).exp())
                    .sum();
                xpow(sum.abs(), profile.p) * k * tau
            },
            0.0,
            tau_hi,
            cell_tol,
        )?
    };
    is.push(acc);
    for j in 1..rs.len() {
        let cell = profile.cell_integrand(rs[j - 1], rs[j]);
        acc += integrate(&cell, rs[j - 1], rs[j], cell_tol)?;
        if !acc.is_finite() {
            return Err(MorreyError::NumericalOverflow(format!(
                "cumulative integral at radius {:e}",
                rs[j]
            )));
        }
        is.push(acc);
    }

    let ts: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let ns: Vec<f64> = ts
        .iter()
        .zip(is.iter())
        .map(|(&t, &i)| profile.norm_at(t, i))
        .collect();

    // N(t) anywhere on the grid range, integrating from the nearest grid
    // point below. Used by the golden refinements.
    let eval_n = |t: f64| -> Result<f64> {
        // exp(ln r) can land an ulp below the grid point itself, so clamp
        // before integrating over [rs[idx], r_t].
        let r_t = t.exp();
        let idx = rs.partition_point(|&r| r <= r_t).max(1) - 1;
        let r_t = r_t.max(rs[idx]);
        let mut i = is[idx];
        if r_t > rs[idx] {
            let hi = rs[(idx + 1).min(rs.len() - 1)];
            let cell = profile.cell_integrand(rs[idx], hi.max(r_t));
            i += integrate(&cell, rs[idx], r_t, cell_tol)?;
        }
        Ok(profile.norm_at(t, i))
    };

    let argmax = ns
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, _)| j)
        .unwrap();
    let n_best_grid = ns[argmax];

    // Refinement targets: the argmax plus every sufficiently prominent local
    // maximum within REFINE_FRACTION of it.
    let mut targets = vec![argmax];
    for j in 0..ns.len() {
        if j == argmax || ns[j] < REFINE_FRACTION * n_best_grid {
            continue;
        }
        let band = PEAK_PROMINENCE * ns[j];
        let left_ok = j == 0 || ns[j] > ns[j - 1] + band;
        let right_ok = j + 1 == ns.len() || ns[j] > ns[j + 1] + band;
        if left_ok && right_ok {
            targets.push(j);
        }
    }
    targets.sort_by(|a, b| ns[*b].total_cmp(&ns[*a]));
    targets.truncate(REFINE_CAP);

    let mut best_v = 0.0_f64;
    let mut best_t = ts[argmax];
    let failure: Cell<Option<MorreyError>> = Cell::new(None);
    for &j in &targets {
        let a = ts[j.saturating_sub(1)];
        let b = ts[(j + 1).min(ts.len() - 1)];
        let (t_star, v_star) = golden_max(
            |t| match eval_n(t) {
                Ok(v) => v,
                Err(e) => {
                    failure.set(Some(e));
                    f64::NEG_INFINITY
                }
            },
            a,
            b,
            tol,
        );
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if v_star > best_v {
            best_v = v_star;
            best_t = t_star;
        }
    }

    let mut r_star = SupremumRadius::At(best_t.exp());
    if sp.variant() == Variant::Small && best_t.exp() >= 1.0 - 1e-9 {
        // The supremum presses against the open boundary.
        r_star = SupremumRadius::UpperLimit(1.0);
    }

    // Classical tails can peak far beyond any fixed multiple of the last
    // breakpoint (the closer the tail exponent sits to critical, the further
    // out); scan geometrically in ln R until N drops or flattens.
    if sp.variant() == Variant::Classical {
        let live = profile.live_tail();
        if !live.is_empty() {
            match scan_tail(
                &profile,
                &live,
                *ts.last().unwrap(),
                *is.last().unwrap(),
                tol,
            )? {
                TailOutcome::Peak(t_star, v_star) if v_star > best_v => {
                    best_v = v_star;
                    r_star = SupremumRadius::At(t_star.exp());
                }
                TailOutcome::Limit(v_lim) if v_lim > best_v => {
                    best_v = v_lim;
                    r_star = SupremumRadius::UpperLimit(f64::INFINITY);
                }
                _ => {}
            }
        }
    }

    if !best_v.is_finite() {
        return Err(MorreyError::NumericalOverflow(
            "supremum of N over the radius grid".into(),
        ));
    }
    Ok(NormResult {
        value: best_v,
        r_star,
        method: Method::Quadrature,
    })
}

enum TailOutcome {
    Peak(f64, f64),
    Limit(f64),
}

/// Integral of the tail integrand over [t₁, t₂] in the t = ln R coordinate,
/// computed without materializing any radius: with β = max αᵢ the integrand
/// is e^{s_max·t}·|Σ cᵢ e^{(αᵢ−β)t}|^p, s_max = p·β + d, and the bounded
/// second factor is integrated by quadrature while the first is split off
/// analytically only as the constant e^{s_max·t₁}.
fn tail_increment(
    profile: &Profile<'_>,
    live: &[(f64, f64)],
    t1: f64,
    t2: f64,
    cell_tol: f64,
) -> Result<f64> {
    let beta = live
        .iter()
        .map(|&(_, a)| a)
        .fold(f64::NEG_INFINITY, f64::max);
    let s_max = profile.p * beta + profile.d;
    let p = profile.p;
    let inner = integrate(
        &|u: f64| {
            let sum: f64 = live
                .iter()
                .map(|&(c, a)| c * ((a - beta) * (t1 + u)).exp())
                .sum();
            (s_max * u).exp() * xpow(sum.abs(), p)
        },
        0.0,
        t2 - t1,
        cell_tol,
    )?;
    Ok((s_max * t1).exp() * inner)
}

fn scan_tail(
    profile: &Profile<'_>,
    live: &[(f64, f64)],
    t_end: f64,
    i_end: f64,
    tol: f64,
) -> Result<TailOutcome> {
    // Step so that the controlling exponential halves each time: the γ pull
    // when there is one, otherwise (p = q) the slowest tail decay.
    let rate = if profile.gamma > 0.0 {
        profile.gamma
    } else {
        live.iter()
            .map(|&(_, a)| (profile.p * a + profile.d).abs())
            .fold(f64::INFINITY, f64::min)
            .max(1e-12)
    };
    let h = (std::f64::consts::LN_2 / rate).min(1e4);
    let cell_tol = tol / 10.0;

    let mut pts: Vec<(f64, f64)> = vec![(t_end, i_end)];
    let mut ns: Vec<f64> = vec![profile.norm_at(t_end, i_end)];
    let mut flat = 0usize;
    for k in 1..=TAIL_STEPS_MAX {
        let (t_prev, i_prev) = *pts.last().unwrap();
        let t_k = t_end + k as f64 * h;
        let i_k = i_prev + tail_increment(profile, live, t_prev, t_k, cell_tol)?;
        if !i_k.is_finite() {
            return Err(MorreyError::NumericalOverflow(format!(
                "tail integral at ln R = {t_k:e}"
            )));
        }
        let n_k = profile.norm_at(t_k, i_k);
        pts.push((t_k, i_k));
        ns.push(n_k);
        let n_prev = ns[ns.len() - 2];

        if (n_k - n_prev).abs() <= FLAT_REL * n_k.max(f64::MIN_POSITIVE) {
            flat += 1;
            if flat >= FLAT_STREAK {
                return Ok(TailOutcome::Limit(n_k));
            }
            continue;
        }
        flat = 0;

        if n_k < n_prev {
            // N rose (or held) until now, so the peak is bracketed by the
            // last three scan points.
            let lo = pts[pts.len().saturating_sub(3)].0;
            let failure: Cell<Option<MorreyError>> = Cell::new(None);
            let eval = |t: f64| -> Result<f64> {
                let idx = pts.partition_point(|&(tp, _)| tp <= t).max(1) - 1;
                let (tb, ib) = pts[idx];
                let i = ib + tail_increment(profile, live, tb, t, cell_tol)?;
                Ok(profile.norm_at(t, i))
            };
            let (t_star, v_star) = golden_max(
                |t| match eval(t) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.set(Some(e));
                        f64::NEG_INFINITY
                    }
                },
                lo,
                t_k,
                tol,
            );
            if let Some(e) = failure.take() {
                return Err(e);
            }
            return Ok(TailOutcome::Peak(t_star, v_star));
        }
    }
    Err(MorreyError::ToleranceNotMet(format!(
        "tail supremum scan still rising after {TAIL_STEPS_MAX} steps of {h:e} in ln R"
    )))
}

/// Norm of a single function by the quadrature path.
pub fn oracle_norm(f: &RadialFunction, sp: &SpaceParams, tol: f64) -> Result<NormResult> {
    profile_norm(&[(1.0, f)], sp, tol)
}

/// Outcome of [`offcenter_probe_report`]: the best off-center value found,
/// with the Monte Carlo standard error of that cell and where it was.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    pub value: f64,
    pub std_error: f64,
    pub center: f64,
    pub radius: f64,
}

/// Monte Carlo search over balls B(a, R) with a ≠ 0.
///
/// Center magnitudes run over a uniform grid on [0, 2·r_max], radii over a
/// geometric grid around the support, and each ball integral is estimated
/// from `n_samples` points stratified in radius. The same sample quantiles
/// and directions are reused for every (center, radius) cell, so comparing
/// cells does not pick up fresh sampling noise and the reported maximum is
/// not biased upward by the argmax over noisy estimates.
pub fn offcenter_probe_report(
    f: &RadialFunction,
    sp: &SpaceParams,
    n_centers: usize,
    n_samples: usize,
    seed: u64,
) -> Result<ProbeReport> {
    validate_membership(f, sp)?;
    if n_centers == 0 || n_samples == 0 {
        return Err(MorreyError::InvalidParams(
            "probe needs n_centers ≥ 1 and n_samples ≥ 1".into(),
        ));
    }
    let d = sp.d() as f64;
    let cd = sphere_area(sp.d());
    let vol_coeff = cd / d;

    let bps: Vec<f64> = f.breakpoints().into_iter().filter(|&r| r > 0.0).collect();
    let r_ref = bps.last().copied().unwrap_or(1.0);

    let centers: Vec<f64> = if n_centers == 1 {
        vec![0.0]
    } else {
        (0..n_centers)
            .map(|j| 2.0 * r_ref * j as f64 / (n_centers - 1) as f64)
            .collect()
    };

    let mut radii: Vec<f64> = Vec::new();
    let (rad_lo, rad_hi) = (0.01 * r_ref, 10.0 * r_ref);
    let n_rad = ((8.0 * (rad_hi / rad_lo).log10()).ceil() as usize).max(1);
    for j in 0..=n_rad {
        radii.push(rad_lo * (rad_hi / rad_lo).powf(j as f64 / n_rad as f64));
    }
    radii.extend(bps.iter().copied());
    if sp.variant() == Variant::Small {
        radii.retain(|&r| r <= 1.0);
        radii.push(1.0);
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    // Common random numbers: one radial quantile and one direction cosine
    // per sample, shared across all cells.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_samples as f64;
    let samples: Vec<(f64, f64)> = (0..n_samples)
        .map(|j| {
            let u = (j as f64 + rng.random::<f64>().max(1e-12)) / n;
            let omega = if sp.d() == 1 {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            } else {
                // First coordinate of a uniform unit vector, via a
                // normalized Gaussian sample; only that coordinate and the
                // squared length are needed.
                let mut gauss = || {
                    let (u1, u2) = (rng.random::<f64>().max(1e-300), rng.random::<f64>());
                    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                };
                let g0 = gauss();
                let mut norm2 = g0 * g0;
                for _ in 1..sp.d() {
                    let gi = gauss();
                    norm2 += gi * gi;
                }
                if norm2 > 0.0 {
                    g0 / norm2.sqrt()
                } else {
                    1.0
                }
            };
            (u, omega)
        })
        .collect();

    let inv_d = 1.0 / d;
    let p = sp.p();
    let mut best = ProbeReport {
        value: 0.0,
        std_error: 0.0,
        center: 0.0,
        radius: radii[0],
    };
    let mut cell_values = vec![0.0_f64; n_samples];
    for &a in &centers {
        for &radius in &radii {
            let mut mean = 0.0;
            for (j, &(u, omega)) in samples.iter().enumerate() {
                let s = radius * xpow(u, inv_d);
                let x = (a * a + 2.0 * a * s * omega + s * s).max(0.0).sqrt();
                let v = xpow(f.value_at(x).abs(), p);
                cell_values[j] = v;
                mean += v;
            }
            mean /= n;
            if mean <= 0.0 {
                continue;
            }
            let var: f64 = cell_values
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / (n - 1.0).max(1.0);
            let se_mean = (var / n).sqrt();

            let vol = vol_coeff * xpow(radius, d);
            let value = xpow(vol, 1.0 / sp.q()) * xpow(mean, 1.0 / p);
            if value > best.value {
                best = ProbeReport {
                    value,
                    std_error: value * se_mean / (p * mean),
                    center: a,
                    radius,
                };
            }
        }
    }
    Ok(best)
}

/// The probe's best value alone.
pub fn offcenter_probe(
    f: &RadialFunction,
    sp: &SpaceParams,
    n_centers: usize,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    Ok(offcenter_probe_report(f, sp, n_centers, n_samples, seed)?.value)
}
