//! Adaptive quadrature.
//!
//! The workhorse is a globally adaptive Gauss–Kronrod 7–15 rule (the QUADPACK
//! `qk15` pair) with interval bisection driven by the Kronrod error estimate.
//! A separate step-doubling adaptive Simpson integrator is provided so that
//! results can be cross-checked through a fully independent code path.

/// 15-point Kronrod abscissae on [-1, 1], positive half; even entries are the
/// embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7-15 panel: returns (integral, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_gauss = fc * WG[3];
    let mut result_kronrod = fc * WGK[7];
    let mut fv = [0.0f64; 7];
    for (j, x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1 + f2;
        result_kronrod += WGK[j] * fv[j];
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * fv[j];
        }
    }
    let integral = result_kronrod * half;
    // raw |K15 - G7| difference: a conservative bound on the Kronrod error
    let err = ((result_kronrod - result_gauss) * half).abs();
    (integral, err)
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Subdivides the worst interval until the summed error estimate falls below
/// `abs_tol` or the interval budget is exhausted. Returns the estimate and its
/// error bound.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> QuadResult {
    integrate_segments(f, &[a, b], abs_tol)
}

/// Adaptive integration over [0, b] with geometric pre-splitting toward zero,
/// so that boundary layers at any scale down to ~1e-15 b are seen by the
/// initial panels (a single panel over a wide interval can step right over a
/// narrow spike near the origin and report a deceptively small error).
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, abs_tol: f64) -> QuadResult {
    debug_assert!(b > 0.0);
    let mut breakpoints = Vec::with_capacity(52);
    breakpoints.push(0.0);
    for j in (0..=49).rev() {
        breakpoints.push(b * 0.5f64.powi(j));
    }
    integrate_segments(f, &breakpoints, abs_tol)
}

/// Adaptive integration seeded with explicit initial panels.
pub fn integrate_segments<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], abs_tol: f64) -> QuadResult {
    debug_assert!(breakpoints.len() >= 2);
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    for pair in breakpoints.windows(2) {
        let (v, e) = qk15(&f, pair[0], pair[1]);
        intervals.push((pair[0], pair[1], v, e));
    }
    let max_intervals = 4000;
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= abs_tol || intervals.len() >= max_intervals {
            let value: f64 = intervals.iter().map(|iv| iv.2).sum();
            return QuadResult {
                value,
                error_estimate: total_err,
                converged: total_err <= abs_tol,
            };
        }
        // split the interval with the largest error (NaN sorts as largest so
        // a non-finite panel is always refined first)
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval at floating-point resolution; accept what we have
            let value: f64 = intervals.iter().map(|iv| iv.2).sum();
            let err: f64 = intervals.iter().map(|iv| iv.3).sum();
            return QuadResult {
                value,
                error_estimate: err,
                converged: false,
            };
        }
        let left = qk15(&f, lo, mid);
        let right = qk15(&f, mid, hi);
        intervals.push((lo, mid, left.0, left.1));
        intervals.push((mid, hi, right.0, right.1));
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// Adaptive Simpson with step doubling; independent of the Kronrod path.
pub fn integrate_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, fa, b, fb, fm);
    recurse(&f, a, fa, b, fb, fm, whole, abs_tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        // Kronrod 15 integrates degree <= 22 exactly
        let r = integrate(|x| x * x * x * x * x, 0.0, 2.0, 1e-13);
        assert_relative_eq!(r.value, 64.0 / 6.0, max_relative = 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(|x| (-x * x).exp(), -8.0, 8.0, 1e-13);
        assert_relative_eq!(r.value, PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn peaked_integrand() {
        // narrow peak forces subdivision
        let r = integrate(|x| (-(x - 0.7).powi(2) * 1e6).exp(), 0.0, 1.0, 1e-14);
        assert_relative_eq!(r.value, (PI / 1e6).sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn simpson_agrees_with_kronrod() {
        let f = |x: f64| (x.sin() + 2.0) / (1.0 + x * x);
        let a = integrate(f, 0.0, 10.0, 1e-12).value;
        let b = integrate_simpson(f, 0.0, 10.0, 1e-12);
        assert_relative_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn boundary_layer_at_origin_is_caught() {
        // mass concentrated near 0 on a wide domain: the geometric splitter
        // must see it even though a single panel over [0, 30] would not
        let f = |x: f64| 50.0 * (-50.0 * x).exp();
        let r = integrate_from_zero(f, 30.0, 1e-12);
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-10);
    }
}
