//! Safeguarded Newton iteration on a sign-changing bracket.
//!
//! Every solver in the crate reduces to a monotone scalar equation on a known
//! bracket, so one routine serves them all: take the Newton step when it stays
//! strictly inside the current bracket, otherwise bisect.

/// Finds a root of `f` in `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign.
///
/// `f_df` returns the value and the derivative. Iteration stops when the
/// bracket is narrower than `tol`, when a Newton step moves less than `tol / 2`,
/// or when `f` evaluates to exactly zero.
pub(crate) fn newton_bisect<F>(mut f_df: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> (f64, f64),
{
    let (f_lo, _) = f_df(lo);
    debug_assert!(f_lo.is_finite());
    let lo_positive = f_lo > 0.0;

    let mut x = 0.5 * (lo + hi);
    // 200 bisections exhaust any f64 bracket; Newton only shortens this.
    for _ in 0..200 {
        let (fx, dfx) = f_df(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo).abs() <= tol {
            return 0.5 * (lo + hi);
        }

        let newton = x - fx / dfx;
        let inside = newton.is_finite() && newton > lo.min(hi) && newton < lo.max(hi);
        if inside {
            let step = (newton - x).abs();
            x = newton;
            if step <= 0.5 * tol {
                return x;
            }
        } else {
            x = 0.5 * (lo + hi);
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn decreasing_function() {
        let r = newton_bisect(|x| (1.0 - x.powi(3), -3.0 * x * x), 0.0, 5.0, 1e-13);
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        // derivative reported as zero everywhere: pure bisection
        let r = newton_bisect(|x| (x - 0.3, 0.0), 0.0, 1.0, 1e-12);
        assert!((r - 0.3).abs() < 1e-12);
    }
}
