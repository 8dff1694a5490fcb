//! Adaptive Simpson quadrature.

/// Integrates `f` over [a, b] to absolute tolerance `tol`.
///
/// Classic adaptive Simpson with Richardson correction on acceptance. The
/// integrand is assumed piecewise smooth; callers split at known kinks.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
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
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let got = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12);
        assert!((got - (std::f64::consts::E - 1.0)).abs() < 1e-11);

        let got = adaptive_simpson(&|x: f64| (5.0 * x).sin(), 0.0, 2.0, 1e-12);
        let exact = (1.0 - (10.0_f64).cos()) / 5.0;
        assert!((got - exact).abs() < 1e-11);
    }

    #[test]
    fn handles_mild_singular_behavior() {
        // sqrt has unbounded derivative at 0; adaptivity still converges.
        let got = adaptive_simpson(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-10);
        assert!((got - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn zero_length_interval() {
        assert_eq!(adaptive_simpson(&|x: f64| x, 2.0, 2.0, 1e-10), 0.0);
    }
}
