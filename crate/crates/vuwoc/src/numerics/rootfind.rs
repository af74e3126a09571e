//! Safeguarded scalar root finding: Illinois-damped false position inside a
//! bracket. Used by the maximum likelihood updates, which reduce to
//! well-behaved 1-D stationarity conditions on a positive bracket.

/// Outcome of a root search.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: u32,
    pub converged: bool,
}

/// Find a root of `f` in [lo, hi] with the Illinois variant of false
/// position (endpoint damping prevents one-sided stagnation).
///
/// The caller guarantees f(lo) and f(hi) bracket a sign change; otherwise the
/// endpoint with the smaller |f| is returned, flagged non-converged.
/// Convergence is declared on the residual (|f| <= tol) or when the bracket
/// collapses to floating-point resolution.
pub fn bisect_secant<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64, max_iter: u32) -> Root {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Root { x: a, residual: 0.0, iterations: 0, converged: true };
    }
    if fb == 0.0 {
        return Root { x: b, residual: 0.0, iterations: 0, converged: true };
    }
    if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
        let (x, residual) = if fb.is_finite() && (!fa.is_finite() || fa.abs() > fb.abs()) {
            (b, fb)
        } else {
            (a, fa)
        };
        return Root { x, residual, iterations: 0, converged: false };
    }
    let mut side = 0i8;
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for it in 1..=max_iter {
        // false position with Illinois damping of the stagnant endpoint
        let xs = (a * fb - b * fa) / (fb - fa);
        x = if xs.is_finite() && xs > a && xs < b { xs } else { 0.5 * (a + b) };
        fx = f(x);
        if !fx.is_finite() {
            // retreat to plain bisection when the model blows up mid-bracket
            x = 0.5 * (a + b);
            fx = f(x);
            if !fx.is_finite() {
                return Root { x, residual: fx, iterations: it, converged: false };
            }
        }
        if fx.abs() <= tol {
            return Root { x, residual: fx, iterations: it, converged: true };
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= f64::EPSILON * (a.abs() + b.abs()).max(1e-300) {
            return Root { x, residual: fx, iterations: it, converged: fx.abs() <= tol * 1e3 };
        }
    }
    Root { x, residual: fx, iterations: max_iter, converged: fx.abs() <= tol }
}
