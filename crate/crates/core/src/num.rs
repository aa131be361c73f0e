//! Small numeric helpers shared across the crate.

/// |p·α + d| at or below this threshold is treated as the logarithmic
/// antiderivative case. Inputs meant to be exactly logarithmic (α = −d/p)
/// land within a few 1e-15 of zero after rounding, while a genuine exponent
/// this small is numerically indistinguishable from zero anyway: modelling it
/// as a logarithm perturbs I(R) by a relative ~|p·α+d|·ln(R/a)², below 1e-10
/// for every radius range this crate touches.
pub(crate) const LOG_EXPONENT_EPS: f64 = 1e-12;

/// `base^exponent` with integer exponents special-cased.
///
/// `powf` routes through exp/log on most targets and can lose the last ulp
/// even for squares; integer exponents go through binary powering instead,
/// which is deterministic across platforms. Exponent 0 returns 1 for every
/// base, matching the convention R^0 = 1 used by the norm algebra.
pub(crate) fn xpow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        return 1.0;
    }
    if exponent.fract() == 0.0 && exponent.abs() <= 512.0 {
        return base.powi(exponent as i32);
    }
    base.powf(exponent)
}
