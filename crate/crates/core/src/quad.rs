//! Scalar adaptive quadrature.
//!
//! A deliberately small, self-contained integrator used as an *independent*
//! cross-check on closed-form integrals elsewhere in the crate (radial mode
//! overlaps in particular). It is adaptive Simpson with the usual Richardson
//! error estimate; accuracy is driven by the per-interval tolerance, and the
//! recursion halves the tolerance with each split so the global error stays
//! below the requested bound.

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Panics if the recursion exceeds `max_depth` before reaching `tol`; for the
/// smooth Gaussian-weighted integrands this crate checks, depth 40 is far
/// beyond what is ever reached.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    refine(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Standard Simpson error model: the composite halves over-resolve the
    // single panel by a factor 15.
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    assert!(depth > 0, "adaptive_simpson: max recursion depth exceeded");
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomial_exactly() {
        let f = |x: f64| 3.0 * x * x;
        assert_abs_diff_eq!(adaptive_simpson(&f, 0.0, 2.0, 1e-12, 40), 8.0, epsilon = 1e-11);
    }

    #[test]
    fn integrates_gaussian_moment() {
        // ∫₀^∞ r³ e^{−r²} dr = 1/2, truncated far into the tail.
        let f = |r: f64| r.powi(3) * (-r * r).exp();
        assert_abs_diff_eq!(adaptive_simpson(&f, 0.0, 12.0, 1e-12, 40), 0.5, epsilon = 1e-11);
    }

    #[test]
    fn integrates_oscillatory() {
        let f = |x: f64| x.sin();
        assert_abs_diff_eq!(adaptive_simpson(&f, 0.0, PI, 1e-12, 40), 2.0, epsilon = 1e-10);
    }
}
