//! One-dimensional maximization by golden-section search.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2

/// Maximizes `f` on `[a, b]`, returning `(argmax, max)`.
///
/// Assumes `f` is unimodal on the bracket; a monotone `f` counts, the search
/// then converges to the corresponding endpoint. Every probe, endpoints
/// included, competes for the returned best, so even a misjudged bracket
/// yields the best value actually seen rather than something invented.
/// `tol` is the absolute bracket width at which the search stops.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    debug_assert!(a <= b, "bracket must be ordered");
    let mut best_x = a;
    let mut best_v = f(a);
    let vb = f(b);
    if vb > best_v {
        best_x = b;
        best_v = vb;
    }
    if a == b {
        return (best_x, best_v);
    }

    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    if f1 > best_v {
        best_x = x1;
        best_v = f1;
    }
    if f2 > best_v {
        best_x = x2;
        best_v = f2;
    }

    // Width shrinks by 1/φ per step, so 500 iterations cover any bracket this
    // crate produces; the cap only guards against a degenerate tol.
    for _ in 0..500 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 > best_v {
                best_x = x2;
                best_v = f2;
            }
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 > best_v {
                best_x = x1;
                best_v = f1;
            }
        }
    }
    (best_x, best_v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let f = |x: f64| -(x - 0.3).powi(2);
        let (x, v) = golden_max(f, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v <= 0.0 && v > -1e-12);
    }

    #[test]
    fn monotone_converges_to_endpoint() {
        let (x, _) = golden_max(|x| x, 0.0, 2.0, 1e-12);
        assert!((x - 2.0).abs() < 1e-9);
        let (x, _) = golden_max(|x| -x, 0.0, 2.0, 1e-12);
        assert!(x.abs() < 1e-9);
    }

    #[test]
    fn degenerate_bracket() {
        let (x, v) = golden_max(|x| x * x, 1.5, 1.5, 1e-12);
        assert_eq!(x, 1.5);
        assert_eq!(v, 2.25);
    }
}
