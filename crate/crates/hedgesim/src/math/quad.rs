//! Adaptive Simpson quadrature.
//!
//! Used by the verification command to integrate the time-value gamma
//! integrand against the closed form. Test oracles reuse it for the
//! lognormal-payoff integrals.

/// Integrates `f` over `[a, b]` with adaptive Simpson refinement until the
/// local error estimate is below `tol` (distributed proportionally across
/// subintervals).
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
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
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // classic Richardson correction
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(&|x| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        // integral of exp(-x^2) over [0, 5] = sqrt(pi)/2 * erf(5)
        let v = integrate(&|x: f64| (-x * x).exp(), 0.0, 5.0, 1e-12);
        let expected = std::f64::consts::PI.sqrt() / 2.0 * crate::math::erf(5.0);
        assert!((v - expected).abs() < 1e-11);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(&|x| x, 1.0, 1.0, 1e-12), 0.0);
    }
}
