//! Expectation-maximization for the two-component mixtures.
//!
//! The E-step computes responsibilities by Bayes' rule; the M-step solves the
//! weighted maximum-likelihood stationarity conditions exactly: the Weibull
//! shape and the GG shape p reduce to 1-D root problems after profiling out
//! the scales (eta, and the pair theta = a^p, q = d/p). Each component block
//! only replaces its parameters when the weighted block likelihood does not
//! decrease, so the overall data log-likelihood is monotone by construction.

use super::dist::{ln_gg_pdf, ln_weibull_pdf, WggParams};
use super::sample::SampleSet;
use super::FitError;
use crate::numerics::rootfind::bisect_secant;
use crate::numerics::special::{digamma, gamma, ln_gamma};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Which form of the Weibull scale update to use. `MaximumLikelihood` is the
/// standard weighted update eta = (sum g I^b / sum g)^{1/b}; `AsPrinted`
/// keeps the reciprocal form for A/B comparison (see the module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeibullScaleForm {
    #[default]
    MaximumLikelihood,
    AsPrinted,
}

/// EM iteration record.
#[derive(Debug, Clone)]
pub struct EmTrace {
    /// Data log-likelihood after each iteration.
    pub loglik: Vec<f64>,
    pub iterations: u32,
    pub converged: bool,
    /// Set when the responsibilities degenerated and the fit collapsed to a
    /// single component.
    pub collapsed: Option<&'static str>,
}

impl EmTrace {
    pub fn final_loglik(&self) -> f64 {
        self.loglik.last().copied().unwrap_or(f64::NEG_INFINITY)
    }
}

/// Root bracket for the 1-D shape solves. Weak-fluctuation campaigns with
/// strong aperture averaging produce Weibull shapes of several hundred, so
/// the upper end sits at 1e3.
const SHAPE_BRACKET: (f64, f64) = (1e-2, 1e3);
const ROOT_TOL: f64 = 1e-10;

struct FitData<'a> {
    x: &'a [f64],
    ln: Vec<f64>,
}

impl<'a> FitData<'a> {
    fn new(samples: &'a SampleSet) -> Result<Self, FitError> {
        if !samples.all_positive() {
            return Err(FitError::DegenerateData(
                "log-likelihood fitting needs strictly positive samples".into(),
            ));
        }
        let x = samples.values();
        let ln = x.iter().map(|v| v.ln()).collect();
        Ok(Self { x, ln })
    }

    fn len(&self) -> usize {
        self.x.len()
    }
}

/// Weighted Weibull ML update. Returns (beta, eta, root_converged).
fn weibull_m_step(
    data: &FitData,
    weights: &[f64],
    beta_guess: f64,
    scale_form: WeibullScaleForm,
) -> Option<(f64, f64, bool)> {
    let s0: f64 = weights.iter().sum();
    if s0 <= 0.0 {
        return None;
    }
    let sl: f64 = weights.iter().zip(&data.ln).map(|(w, l)| w * l).sum();
    let mean_ln = sl / s0;
    // profile stationarity: 1/b + mean_ln - (sum w I^b ln I)/(sum w I^b) = 0
    let residual = |b: f64| -> f64 {
        let mut sb = 0.0;
        let mut sbl = 0.0;
        for ((w, &l), _) in weights.iter().zip(&data.ln).zip(data.x) {
            let p = (b * l).exp();
            sb += w * p;
            sbl += w * p * l;
        }
        1.0 / b + mean_ln - sbl / sb
    };
    // warm bracket ladder around the previous shape: the root moves little
    // between EM iterations, so a tight bracket usually wins in ~4 evals
    let mut lo = SHAPE_BRACKET.0;
    let mut hi = SHAPE_BRACKET.1;
    for widen in [1.05, 1.6] {
        let l = (beta_guess / widen).max(SHAPE_BRACKET.0);
        let h = (beta_guess * widen).min(SHAPE_BRACKET.1);
        if residual(l).signum() != residual(h).signum() {
            lo = l;
            hi = h;
            break;
        }
    }
    let root = bisect_secant(residual, lo, hi, ROOT_TOL, 200);
    let beta = root.x.clamp(SHAPE_BRACKET.0, SHAPE_BRACKET.1);
    let sb: f64 = weights
        .iter()
        .zip(&data.ln)
        .map(|(w, &l)| w * (beta * l).exp())
        .sum();
    let eta = match scale_form {
        WeibullScaleForm::MaximumLikelihood => (sb / s0).powf(1.0 / beta),
        WeibullScaleForm::AsPrinted => s0 / sb,
    };
    if !(beta.is_finite() && eta.is_finite() && eta > 0.0) {
        return None;
    }
    Some((beta, eta, root.converged))
}

/// Weighted GG ML update in the (theta = a^p, q = d/p) parameterization.
///
/// The stationarity residual in p can have no sign change on a warm bracket
/// (the profile is flat or multimodal for awkward weight sets), so the search
/// escalates: warm bracket around the current p, then a log-grid scan for the
/// sign change nearest the current value, then a simplex fallback on the
/// weighted block likelihood. Returns (a, d, p, solver_converged).
fn gg_m_step(
    data: &FitData,
    weights: &[f64],
    current: (f64, f64, f64),
) -> Option<(f64, f64, f64, bool)> {
    let w0: f64 = weights.iter().sum();
    if w0 <= 0.0 {
        return None;
    }
    let wl: f64 = weights.iter().zip(&data.ln).map(|(w, l)| w * l).sum();
    let mean_ln = wl / w0;
    // q(p) = 1 / (p ((sum w I^p ln I)/(sum w I^p) - mean_ln));
    // theta(p) = (sum w I^p) / (q w0);
    // stationarity in p: p mean_ln - ln theta - psi(q) = 0
    let pieces = |p: f64| -> Option<(f64, f64)> {
        let mut wp = 0.0;
        let mut wpl = 0.0;
        for (w, &l) in weights.iter().zip(&data.ln) {
            let e = (p * l).exp();
            wp += w * e;
            wpl += w * e * l;
        }
        if !(wp.is_finite() && wpl.is_finite()) || wp <= 0.0 {
            return None;
        }
        let spread = wpl / wp - mean_ln;
        if spread <= 0.0 {
            return None;
        }
        let q = 1.0 / (p * spread);
        let theta = wp / (q * w0);
        Some((q, theta))
    };
    let residual = |p: f64| -> f64 {
        match pieces(p) {
            Some((q, theta)) => p * mean_ln - theta.ln() - digamma(q),
            None => f64::NAN,
        }
    };
    let build = |p: f64, converged: bool| -> Option<(f64, f64, f64, bool)> {
        let p = p.clamp(SHAPE_BRACKET.0, SHAPE_BRACKET.1);
        let (q, theta) = pieces(p)?;
        let d = q * p;
        let a = theta.powf(1.0 / p);
        if a.is_finite() && d.is_finite() && a > 0.0 && d > 0.0 {
            Some((a, d, p, converged))
        } else {
            None
        }
    };

    let p_guess = current.2.clamp(SHAPE_BRACKET.0, SHAPE_BRACKET.1);
    // fast path: warm bracket ladder around the current shape
    let mut bracket = None;
    for widen in [1.05, 1.6] {
        let lo = (p_guess / widen).max(SHAPE_BRACKET.0);
        let hi = (p_guess * widen).min(SHAPE_BRACKET.1);
        let (rlo, rhi) = (residual(lo), residual(hi));
        if rlo.is_finite() && rhi.is_finite() && rlo.signum() != rhi.signum() {
            bracket = Some((lo, hi));
            break;
        }
    }
    if bracket.is_none() {
        // log-grid scan, keeping the sign change nearest the current shape
        let n = 32;
        let ratio = SHAPE_BRACKET.1 / SHAPE_BRACKET.0;
        let mut prev: Option<(f64, f64)> = None;
        let mut best_dist = f64::INFINITY;
        for i in 0..=n {
            let p = SHAPE_BRACKET.0 * ratio.powf(i as f64 / n as f64);
            let r = residual(p);
            if let (Some((pp, rr)), true) = (prev, r.is_finite()) {
                if rr.signum() != r.signum() {
                    let mid = (pp * p).sqrt();
                    let dist = (mid.ln() - p_guess.ln()).abs();
                    if dist < best_dist {
                        best_dist = dist;
                        bracket = Some((pp, p));
                    }
                }
            }
            prev = if r.is_finite() { Some((p, r)) } else { None };
        }
    }
    if let Some((lo, hi)) = bracket {
        let root = bisect_secant(residual, lo, hi, ROOT_TOL, 200);
        if let Some(result) = build(root.x, root.converged) {
            return Some(result);
        }
    }
    // simplex fallback on the weighted block likelihood in log space
    let objective = |v: &[f64]| -> f64 {
        let (a, d, p) = (v[0].exp(), v[1].exp(), v[2].exp());
        if !(a.is_finite() && d.is_finite() && p.is_finite()) || d > 2e4 || p > 2e3 {
            return f64::INFINITY;
        }
        -gg_block_ll(data, weights, a, d, p)
    };
    let start = [current.0.max(1e-6).ln(), current.1.max(1e-3).ln(), p_guess.ln()];
    let (best, value, _, converged) =
        crate::numerics::neldermead::nelder_mead(objective, &start, &[0.2, 0.2, 0.2], 1e-12, 400);
    if !value.is_finite() {
        return None;
    }
    let (a, d, p) = (best[0].exp(), best[1].exp(), best[2].exp());
    if a > 0.0 && d > 0.0 && p > 0.0 && a.is_finite() && d.is_finite() && p.is_finite() {
        Some((a, d, p, converged))
    } else {
        None
    }
}

/// Weighted block log-likelihoods used for the monotonicity guards.
fn weibull_block_ll(data: &FitData, weights: &[f64], beta: f64, eta: f64) -> f64 {
    let ln_eta = eta.ln();
    let ln_beta = beta.ln();
    weights
        .iter()
        .zip(&data.ln)
        .map(|(w, &l)| {
            if *w == 0.0 {
                0.0
            } else {
                w * (ln_beta - ln_eta + (beta - 1.0) * (l - ln_eta) - (beta * (l - ln_eta)).exp())
            }
        })
        .sum()
}

fn gg_block_ll(data: &FitData, weights: &[f64], a: f64, d: f64, p: f64) -> f64 {
    let ln_a = a.ln();
    let ln_norm = p.ln() - d * ln_a - ln_gamma(d / p);
    weights
        .iter()
        .zip(&data.ln)
        .map(|(w, &l)| {
            if *w == 0.0 {
                0.0
            } else {
                w * (ln_norm + (d - 1.0) * l - (p * (l - ln_a)).exp())
            }
        })
        .sum()
}

fn data_loglik(data: &FitData, params: &WggParams) -> f64 {
    let lv = params.varpi.ln();
    let lu = (1.0 - params.varpi).ln();
    data.x
        .iter()
        .map(|&x| {
            let lf = lv + ln_weibull_pdf(params.beta, params.eta, x);
            let lg = lu + ln_gg_pdf(params.a, params.d, params.p, x);
            let hi = lf.max(lg);
            hi + ((lf - hi).exp() + (lg - hi).exp()).ln()
        })
        .sum()
}

/// What one E-pass produced: responsibilities are left in the buffers.
struct EPass {
    loglik: f64,
    min_gamma: f64,
    max_gamma: f64,
}

/// Fused E-step: fills the responsibility buffers and returns the mixture
/// log-likelihood of the input parameters in the same pass. Uses the cached
/// sample logs so each sample costs two exp calls.
fn e_step(data: &FitData, params: &WggParams, gamma: &mut [f64], inv: &mut [f64]) -> EPass {
    let lv = params.varpi.ln();
    let lu = (1.0 - params.varpi).ln();
    let ln_eta = params.eta.ln();
    let ln_a = params.a.ln();
    let cf = lv + params.beta.ln() - ln_eta; // Weibull prefactor
    let cg = lu + params.p.ln() - params.d * ln_a - ln_gamma(params.d / params.p);
    let mut ll = 0.0;
    let mut min_g: f64 = 1.0;
    let mut max_g: f64 = 0.0;
    for (i, &l) in data.ln.iter().enumerate() {
        let lf = cf + (params.beta - 1.0) * (l - ln_eta) - (params.beta * (l - ln_eta)).exp();
        let lg = cg + (params.d - 1.0) * l - (params.p * (l - ln_a)).exp();
        // one-exp log-sum-exp, branch keeps the exponent nonpositive
        let g = if lf >= lg {
            let t = (lg - lf).exp();
            ll += lf + t.ln_1p();
            1.0 / (1.0 + t)
        } else {
            let t = (lf - lg).exp();
            ll += lg + t.ln_1p();
            t / (1.0 + t)
        };
        gamma[i] = g;
        inv[i] = 1.0 - g;
        min_g = min_g.min(g);
        max_g = max_g.max(g);
    }
    EPass { loglik: ll, min_gamma: min_g, max_gamma: max_g }
}

/// Block-guarded M-step from the responsibilities currently in the buffers.
fn m_step(
    data: &FitData,
    params: &WggParams,
    gamma: &[f64],
    inv: &[f64],
    scale_form: WeibullScaleForm,
) -> WggParams {
    let mut next = *params;
    if let Some((beta, eta, solved)) = weibull_m_step(data, gamma, params.beta, scale_form) {
        // a converged profile root is the exact weighted ML maximizer (the
        // profile is unimodal in the shape); only fall back to the explicit
        // guard when the solver did not converge
        let accept = solved || {
            let cur = weibull_block_ll(data, gamma, params.beta, params.eta);
            let new = weibull_block_ll(data, gamma, beta, eta);
            new >= cur - 1e-10 * cur.abs().max(1.0)
        };
        if accept {
            next.beta = beta;
            next.eta = eta;
        }
    }
    if let Some((a, d, p, _)) = gg_m_step(data, inv, (params.a, params.d, params.p)) {
        let cur = gg_block_ll(data, inv, params.a, params.d, params.p);
        let new = gg_block_ll(data, inv, a, d, p);
        if new >= cur - 1e-10 * cur.abs().max(1.0) {
            next.a = a;
            next.d = d;
            next.p = p;
        }
    }
    let s0: f64 = gamma.iter().sum();
    next.varpi = (s0 / gamma.len() as f64).clamp(1e-12, 1.0 - 1e-12);
    next
}

/// Unconstrained coordinates for the extrapolation step.
fn encode(p: &WggParams) -> [f64; 6] {
    [
        (p.varpi / (1.0 - p.varpi)).ln(),
        p.beta.ln(),
        p.eta.ln(),
        p.a.ln(),
        p.d.ln(),
        p.p.ln(),
    ]
}

fn decode(t: &[f64; 6]) -> Option<WggParams> {
    let varpi = 1.0 / (1.0 + (-t[0]).exp());
    let params = WggParams {
        varpi: varpi.clamp(1e-12, 1.0 - 1e-12),
        beta: t[1].exp(),
        eta: t[2].exp(),
        a: t[3].exp(),
        d: t[4].exp(),
        p: t[5].exp(),
    };
    let ok = params.beta.is_finite()
        && params.eta.is_finite()
        && params.a.is_finite()
        && params.d.is_finite()
        && params.p.is_finite()
        && (1e-3..=1e3).contains(&params.beta)
        && (1e-3..=1e3).contains(&params.p)
        && params.d < 1e4
        && params.eta > 1e-9
        && params.a > 1e-9;
    ok.then_some(params)
}

/// One full EM run from a given initialization.
///
/// Alternates responsibilities with the exact weighted ML updates. Plain EM
/// creeps along the mixture's likelihood ridge, so every cycle attempts a
/// squared extrapolation through two EM steps; the extrapolated point only
/// replaces the plain double-step when its log-likelihood is at least as
/// good, which keeps the recorded trace monotone. `max_iter` counts EM map
/// applications; the run stops when a cycle improves the log-likelihood by
/// less than `tol`. Degenerate responsibilities (all below 1e-12 or all
/// above 1-1e-12) collapse the fit to the surviving component, flagged.
pub fn em_fit_wgg(
    samples: &SampleSet,
    init: WggParams,
    max_iter: u32,
    tol: f64,
    scale_form: WeibullScaleForm,
) -> Result<(WggParams, EmTrace), FitError> {
    if samples.len() < 100 {
        return Err(FitError::TooFewSamples { got: samples.len(), need: 100 });
    }
    init.validate()?;
    let data = FitData::new(samples)?;
    let num = data.len();
    let mut params = init;
    let mut trace = EmTrace { loglik: Vec::new(), iterations: 0, converged: false, collapsed: None };
    let mut gamma = vec![0.0f64; num];
    let mut inv = vec![0.0f64; num];
    let mut last_cycle_ll = f64::NEG_INFINITY;

    let mut applications = 0u32;
    while applications < max_iter {
        // --- step 1 (always a plain EM step)
        let pass0 = e_step(&data, &params, &mut gamma, &mut inv);
        if pass0.max_gamma < 1e-12 || pass0.min_gamma > 1.0 - 1e-12 {
            let uniform = vec![1.0f64; num];
            if pass0.max_gamma < 1e-12 {
                if let Some((a, d, p, _)) =
                    gg_m_step(&data, &uniform, (params.a, params.d, params.p))
                {
                    params = WggParams { varpi: 1e-12, a, d, p, ..params };
                }
                trace.collapsed = Some("gg-only");
            } else {
                if let Some((beta, eta, _)) =
                    weibull_m_step(&data, &uniform, params.beta, scale_form)
                {
                    params = WggParams { varpi: 1.0 - 1e-12, beta, eta, ..params };
                }
                trace.collapsed = Some("weibull-only");
            }
            let ll = data_loglik(&data, &params);
            trace.loglik.push(ll);
            trace.iterations = applications + 1;
            return Ok((params, trace));
        }
        let theta0 = encode(&params);
        let p1 = m_step(&data, &params, &gamma, &inv, scale_form);
        applications += 1;

        // --- step 2
        let pass1 = e_step(&data, &p1, &mut gamma, &mut inv);
        let p2 = m_step(&data, &p1, &gamma, &inv, scale_form);
        applications += 1;
        trace.loglik.push(pass1.loglik); // ll of the committed iterate p1

        // --- squared extrapolation with monotone safeguard
        let theta1 = encode(&p1);
        let theta2 = encode(&p2);
        let mut r = [0.0f64; 6];
        let mut v = [0.0f64; 6];
        let mut r2 = 0.0;
        let mut v2 = 0.0;
        for i in 0..6 {
            r[i] = theta1[i] - theta0[i];
            v[i] = theta2[i] - theta1[i] - r[i];
            r2 += r[i] * r[i];
            v2 += v[i] * v[i];
        }
        let mut accepted = false;
        if v2 > 0.0 {
            let alpha = -(r2.sqrt() / v2.sqrt()).max(1.0);
            let mut theta_x = [0.0f64; 6];
            for i in 0..6 {
                theta_x[i] = theta0[i] - 2.0 * alpha * r[i] + alpha * alpha * v[i];
            }
            if let Some(candidate) = decode(&theta_x) {
                let pass_x = e_step(&data, &candidate, &mut gamma, &mut inv);
                let degenerate =
                    pass_x.max_gamma < 1e-12 || pass_x.min_gamma > 1.0 - 1e-12;
                if !degenerate && pass_x.loglik.is_finite() && pass_x.loglik >= pass1.loglik {
                    // finish the cycle with an EM step from the extrapolation
                    params = m_step(&data, &candidate, &gamma, &inv, scale_form);
                    applications += 1;
                    trace.loglik.push(pass_x.loglik);
                    accepted = true;
                }
            }
        }
        if !accepted {
            params = p2;
        }
        trace.iterations = applications;

        let cycle_ll = *trace.loglik.last().unwrap();
        if (cycle_ll - last_cycle_ll).abs() < tol && last_cycle_ll.is_finite() {
            trace.converged = true;
            break;
        }
        last_cycle_ll = cycle_ll;
    }
    Ok((params, trace))
}

/// Method-of-moments Weibull fit: solves the coefficient-of-variation
/// identity for the shape, then sets the scale from the mean.
pub fn weibull_moment_fit(values: &[f64]) -> Result<(f64, f64), FitError> {
    let n = values.len() as f64;
    if values.len() < 2 {
        return Err(FitError::TooFewSamples { got: values.len(), need: 2 });
    }
    let mean: f64 = values.iter().sum::<f64>() / n;
    let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 || mean <= 0.0 {
        return Err(FitError::DegenerateData("zero variance in moment fit".into()));
    }
    let cv2 = var / (mean * mean);
    // Gamma(1 + 2/b) / Gamma(1 + 1/b)^2 - 1 = cv2, decreasing in b
    let f = |b: f64| -> f64 {
        (ln_gamma(1.0 + 2.0 / b) - 2.0 * ln_gamma(1.0 + 1.0 / b)).exp() - 1.0 - cv2
    };
    let root = bisect_secant(f, 0.05, 500.0, 1e-12, 200);
    let beta = root.x;
    let eta = mean / gamma(1.0 + 1.0 / beta);
    Ok((beta, eta))
}

/// Method-of-moments Gamma fit expressed as a GG with p = 1.
pub fn gamma_moment_fit(values: &[f64]) -> Result<(f64, f64, f64), FitError> {
    gg_moment_fit_given_p(values, 1.0)
}

/// Method-of-moments GG fit at a fixed shape p: y = I^p is Gamma(q, theta),
/// so matching the first two moments of y gives q and theta exactly, and
/// (a, d) = (theta^{1/p}, q p) maps back.
pub fn gg_moment_fit_given_p(values: &[f64], p: f64) -> Result<(f64, f64, f64), FitError> {
    let n = values.len() as f64;
    if values.len() < 2 {
        return Err(FitError::TooFewSamples { got: values.len(), need: 2 });
    }
    let mut mean = 0.0;
    for &v in values {
        mean += v.powf(p);
    }
    mean /= n;
    let mut var = 0.0;
    for &v in values {
        let d = v.powf(p) - mean;
        var += d * d;
    }
    var /= n - 1.0;
    if var <= 0.0 || mean <= 0.0 {
        return Err(FitError::DegenerateData("zero variance in moment fit".into()));
    }
    let q = (mean * mean / var).clamp(1e-3, 5e3);
    let theta = var / mean;
    let d = (q * p).clamp(5e-3, 5e3);
    Ok((theta.powf(1.0 / p), d, p))
}

/// Split-sample initialization: Weibull moments on the lower half, Gamma
/// moments (GG at p = 1) on the upper half, equal weight. Shapes are clamped
/// into the EM search range.
pub fn wgg_initial_guess(samples: &SampleSet) -> Result<WggParams, FitError> {
    let sorted = samples.sorted();
    let mid = sorted.len() / 2;
    let (low, high) = sorted.split_at(mid);
    let (beta, eta) = weibull_moment_fit(low)?;
    let (a, d, p) = gamma_moment_fit(high)?;
    WggParams::new(0.5, beta.clamp(5e-2, 900.0), eta, a, d.clamp(5e-2, 900.0), p)
}

/// Options for the full WGG fit (initialization + restarts + guards).
#[derive(Debug, Clone, Copy)]
pub struct WggFitOptions {
    pub max_iter: u32,
    pub tol: f64,
    pub restarts: u32,
    pub restart_iters: u32,
    pub seed: u64,
    pub scale_form: WeibullScaleForm,
}

impl Default for WggFitOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            tol: 1e-5,
            restarts: 5,
            restart_iters: 120,
            seed: 0x5eed_cafe,
            scale_form: WeibullScaleForm::default(),
        }
    }
}

/// Full WGG fit: structured split initializations (both component
/// assignments, a ladder of GG shapes), seeded random restarts, and
/// single-component boundary candidates so the mixture never reports a worse
/// likelihood than its nested Weibull or GG fits.
///
/// The restart phase runs on a strided subsample so the basin search stays
/// cheap; the winner (and the runner-up when the full-data likelihood
/// disagrees with the subsample ranking) is polished on the full set.
pub fn fit_wgg(
    samples: &SampleSet,
    options: &WggFitOptions,
) -> Result<(WggParams, EmTrace), FitError> {
    let base = wgg_initial_guess(samples)?;
    let sorted = samples.sorted();
    let mid = sorted.len() / 2;
    let (lower, upper) = sorted.split_at(mid);

    // structured candidates: each half plays each role, GG shape laddered
    let mut inits = vec![base];
    for (weibull_half, gg_half) in [(lower, upper), (upper, lower)] {
        let Ok((beta, eta)) = weibull_moment_fit(weibull_half) else { continue };
        for p0 in [1.0, 6.0, 24.0] {
            if let Ok((a, d, p)) = gg_moment_fit_given_p(gg_half, p0) {
                inits.push(WggParams {
                    varpi: 0.5,
                    beta: beta.clamp(5e-2, 950.0),
                    eta,
                    a,
                    d: d.clamp(5e-2, 950.0),
                    p: p.clamp(5e-2, 950.0),
                });
            }
        }
    }
    // seeded random restarts around the data-driven shapes
    let mut rng = ChaCha12Rng::seed_from_u64(options.seed);
    for _ in 0..options.restarts {
        let jitter = |rng: &mut ChaCha12Rng| -> f64 { (rng.random::<f64>() - 0.5).exp() };
        let ln_p = rng.random_range(0.3f64.ln()..60f64.ln());
        let varpi = rng.random_range(0.2..0.8);
        let beta = (base.beta * jitter(&mut rng)).clamp(5e-2, 950.0);
        let eta = base.eta * jitter(&mut rng);
        let (a, d, p) = match gg_moment_fit_given_p(upper, ln_p.exp()) {
            Ok(t) => t,
            Err(_) => (base.a, base.d, base.p),
        };
        inits.push(WggParams {
            varpi,
            beta,
            eta,
            a,
            d: d.clamp(5e-2, 950.0),
            p: p.clamp(5e-2, 950.0),
        });
    }

    // basin search on a deterministic subsample (samples are iid, so a
    // stride over the sorted array is an unbiased thinning)
    let stride = (samples.len() / 20_000).max(1);
    let scout_raw: Vec<f64> = sorted.iter().step_by(stride).copied().collect();
    let scout = if stride > 1 { Some(SampleSet::from_raw(&scout_raw)?) } else { None };
    let search_set = scout.as_ref().unwrap_or(samples);

    let data = FitData::new(samples)?;
    let mut ranked: Vec<(f64, WggParams)> = Vec::new();
    for init in &inits {
        if let Ok((p, _)) =
            em_fit_wgg(search_set, *init, options.restart_iters, options.tol, options.scale_form)
        {
            // rank by the FULL-data likelihood of the scouted parameters
            ranked.push((data_loglik(&data, &p), p));
        }
    }
    if ranked.is_empty() {
        return Err(FitError::DegenerateData("every EM initialization failed".into()));
    }
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    // polish the winner; also polish the runner-up briefly when it is close
    let polish = |start: WggParams, iters: u32| {
        em_fit_wgg(samples, start, iters, options.tol, options.scale_form)
    };
    let (mut params, mut trace) = polish(ranked[0].1, options.max_iter)?;
    if ranked.len() > 1 && ranked[1].0 > ranked[0].0 - 2.0 {
        if let Ok((p2, t2)) = polish(ranked[1].1, options.max_iter) {
            if t2.final_loglik() > trace.final_loglik() {
                params = p2;
                trace = t2;
            }
        }
    }

    // a shape pinned against the solver bracket marks a spurious component
    // collapse (a near-zero-width spike absorbing a handful of samples);
    // discard the mixture and fall back to the nested single-family fits
    let pin_hi = 0.99 * SHAPE_BRACKET.1;
    let pin_lo = 1.05 * SHAPE_BRACKET.0;
    let pinned = params.beta >= pin_hi
        || params.p >= pin_hi
        || params.beta <= pin_lo
        || params.p <= pin_lo;

    // boundary candidates: the nested single-family fits as near-degenerate
    // mixtures (penalty bounded by Num * 1e-12, far below reporting slack);
    // the vanishing component carries tame single-family parameters so the
    // reported vector never smuggles a pinned shape through
    let data = FitData::new(samples)?;
    let uniform = vec![1.0f64; samples.len()];
    let weibull_side = weibull_m_step(&data, &uniform, base.beta, options.scale_form);
    let gg_side = gg_m_step(&data, &uniform, (base.a, base.d, base.p));
    let mut candidates: Vec<(WggParams, &'static str)> = Vec::new();
    if let Some((beta, eta, _)) = weibull_side {
        let (a, d, p) = gg_side.map(|(a, d, p, _)| (a, d, p)).unwrap_or((eta, beta, beta));
        candidates.push((WggParams { varpi: 1.0 - 1e-12, beta, eta, a, d, p }, "weibull-boundary"));
    }
    if let Some((a, d, p, _)) = gg_side {
        let (beta, eta) = weibull_side.map(|(b, e, _)| (b, e)).unwrap_or((p.min(900.0), a));
        candidates.push((WggParams { varpi: 1e-12, beta, eta, a, d, p }, "gg-boundary"));
    }
    let mut best_ll = if pinned { f64::NEG_INFINITY } else { trace.final_loglik() };
    let mut adopted: Option<(WggParams, &'static str, f64)> = None;
    for (candidate, tag) in candidates {
        let ll = data_loglik(&data, &candidate);
        if ll > best_ll {
            best_ll = ll;
            adopted = Some((candidate, tag, ll));
        }
    }
    match adopted {
        Some((candidate, tag, ll)) => {
            params = candidate;
            if pinned {
                // model-selection override, not an EM iterate: fresh trace
                trace.loglik = vec![ll];
                trace.converged = false;
            } else {
                trace.loglik.push(ll);
            }
            trace.collapsed = Some(tag);
        }
        None if pinned => {
            return Err(FitError::OptimizerFailure(
                "mixture collapsed onto a pinned shape and no single-family fallback fits".into(),
            ));
        }
        None => {}
    }
    Ok((params, trace))
}

/// Single-family Weibull ML fit (all weights 1).
pub fn fit_weibull_ml(samples: &SampleSet) -> Result<(f64, f64, f64), FitError> {
    let data = FitData::new(samples)?;
    let uniform = vec![1.0f64; samples.len()];
    let (beta_mom, _) = weibull_moment_fit(samples.sorted())?;
    let (beta, eta, _) = weibull_m_step(&data, &uniform, beta_mom.clamp(0.02, 900.0), WeibullScaleForm::MaximumLikelihood)
        .ok_or_else(|| FitError::DegenerateData("weibull ML failed".into()))?;
    let ll = weibull_block_ll(&data, &uniform, beta, eta);
    Ok((beta, eta, ll))
}

/// Single-family GG ML fit (all weights 1). Returns (a, d, p, loglik).
pub fn fit_gg_ml(samples: &SampleSet) -> Result<(f64, f64, f64, f64), FitError> {
    let data = FitData::new(samples)?;
    let uniform = vec![1.0f64; samples.len()];
    let (a0, d0, p0) = gamma_moment_fit(samples.sorted())?;
    let (a, d, p, _) = gg_m_step(&data, &uniform, (a0, d0, p0))
        .ok_or_else(|| FitError::DegenerateData("gg ML failed".into()))?;
    let ll = gg_block_ll(&data, &uniform, a, d, p);
    Ok((a, d, p, ll))
}

/// EGG mixture fit: exponential first component by the same EM scheme.
/// Returns (w, lambda, a, d, p, loglik, iterations, converged).
#[allow(clippy::type_complexity)]
pub fn fit_egg(
    samples: &SampleSet,
    options: &WggFitOptions,
) -> Result<(f64, f64, f64, f64, f64, f64, u32, bool), FitError> {
    if samples.len() < 100 {
        return Err(FitError::TooFewSamples { got: samples.len(), need: 100 });
    }
    let data = FitData::new(samples)?;
    let num = data.len();
    let sorted = samples.sorted();
    // low-intensity tail seeds the exponential component
    let decile = &sorted[..(num / 10).max(2)];
    let mut lambda = decile.iter().sum::<f64>() / decile.len() as f64;
    let (mut a, mut d, mut p) = gamma_moment_fit(&sorted[num / 10..])?;
    let mut w = 0.2f64;
    let mut gamma_buf = vec![0.0f64; num];
    let mut inv_buf = vec![0.0f64; num];
    let ln_mix = |w: f64, lambda: f64, a: f64, d: f64, p: f64, x: f64| -> f64 {
        let lf = w.ln() - lambda.ln() - x / lambda;
        let lg = (1.0 - w).ln() + ln_gg_pdf(a, d, p, x);
        let hi = lf.max(lg);
        hi + ((lf - hi).exp() + (lg - hi).exp()).ln()
    };
    let mut last_ll: f64 = data.x.iter().map(|&x| ln_mix(w, lambda, a, d, p, x)).sum();
    let mut iterations = 0;
    let mut converged = false;
    for iter in 1..=options.max_iter {
        iterations = iter;
        for (i, &x) in data.x.iter().enumerate() {
            let lf = w.ln() - lambda.ln() - x / lambda;
            let lg = (1.0 - w).ln() + ln_gg_pdf(a, d, p, x);
            let g = 1.0 / (1.0 + (lg - lf).exp());
            gamma_buf[i] = g;
            inv_buf[i] = 1.0 - g;
        }
        let s0: f64 = gamma_buf.iter().sum();
        if s0 / num as f64 > 1e-12 {
            let sx: f64 = gamma_buf.iter().zip(data.x).map(|(g, &x)| g * x).sum();
            lambda = (sx / s0).max(1e-12);
        }
        if let Some((na, nd, np, _)) = gg_m_step(&data, &inv_buf, (a, d, p)) {
            let cur = gg_block_ll(&data, &inv_buf, a, d, p);
            let new = gg_block_ll(&data, &inv_buf, na, nd, np);
            if new >= cur - 1e-10 * cur.abs().max(1.0) {
                a = na;
                d = nd;
                p = np;
            }
        }
        w = (s0 / num as f64).clamp(1e-12, 1.0 - 1e-12);
        let ll: f64 = data.x.iter().map(|&x| ln_mix(w, lambda, a, d, p, x)).sum();
        if (ll - last_ll).abs() < options.tol && iter > 1 {
            converged = true;
            last_ll = ll;
            break;
        }
        last_ll = ll;
    }
    Ok((w, lambda, a, d, p, last_ll, iterations, converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::synth::sample_wgg;
    use approx::assert_relative_eq;

    #[test]
    fn responsibilities_symmetry() {
        // when varpi = 1/2 and f = g the responsibility is exactly 1/2:
        // engineered by making both components the same exponential
        // (Weibull beta=1, eta=s equals GG d=1, p=1, a=s)
        let params = WggParams::new(0.5, 1.0, 1.3, 1.3, 1.0, 1.0).unwrap();
        for x in [0.1, 0.9, 3.7] {
            let lf = ln_weibull_pdf(params.beta, params.eta, x);
            let lg = ln_gg_pdf(params.a, params.d, params.p, x);
            assert_relative_eq!(lf, lg, epsilon = 1e-12);
            let g = 1.0 / (1.0 + ((0.5f64.ln() + lg) - (0.5f64.ln() + lf)).exp());
            assert_relative_eq!(g, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn weight_update_is_mean_of_responsibilities() {
        // gamma = {1, 0, 1, 0} -> varpi = 0.5 by the closed-form update
        let gammas = [1.0, 0.0, 1.0, 0.0];
        let varpi: f64 = gammas.iter().sum::<f64>() / gammas.len() as f64;
        assert_eq!(varpi, 0.5);
    }

    #[test]
    fn weibull_ml_recovers_exponential_shape() {
        // Exponential data fitted as Weibull: beta ~ 1
        let n = 100_000;
        let raw: Vec<f64> = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                -(1.0 - u).ln()
            })
            .collect();
        let samples = SampleSet::from_raw(&raw).unwrap();
        let (beta, _eta, _) = fit_weibull_ml(&samples).unwrap();
        assert_relative_eq!(beta, 1.0, max_relative = 0.03);
    }

    #[test]
    fn em_loglik_is_monotone() {
        let raw = sample_wgg(
            &WggParams::new(0.6, 3.0, 1.0, 0.8, 2.0, 1.5).unwrap(),
            20_000,
            12345,
        );
        let samples = SampleSet::from_raw(&raw).unwrap();
        let init = wgg_initial_guess(&samples).unwrap();
        let (_, trace) =
            em_fit_wgg(&samples, init, 120, 1e-9, WeibullScaleForm::MaximumLikelihood).unwrap();
        for w in trace.loglik.windows(2) {
            assert!(w[1] >= w[0] - 1e-10 * w[0].abs().max(1.0), "loglik decreased: {w:?}");
        }
    }

    #[test]
    fn nesting_dominance_via_boundary_guard() {
        // pure Weibull data: the mixture must not report less than the
        // single-family Weibull likelihood (1e-6 slack)
        let n = 5_000;
        let raw: Vec<f64> = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                (-(1.0 - u).ln()).powf(1.0 / 3.0) // Weibull(3, 1) quantile
            })
            .collect();
        let samples = SampleSet::from_raw(&raw).unwrap();
        let (_, trace) = fit_wgg(&samples, &WggFitOptions::default()).unwrap();
        let (_, _, ll_w) = fit_weibull_ml(&samples).unwrap();
        let (_, _, _, ll_g) = fit_gg_ml(&samples).unwrap();
        assert!(trace.final_loglik() >= ll_w - 1e-6, "{} < {}", trace.final_loglik(), ll_w);
        assert!(trace.final_loglik() >= ll_g - 1e-6);
    }

    #[test]
    fn scale_equivariance() {
        // scaling samples by c scales eta and a by c, shapes unchanged
        let params = WggParams::new(0.55, 2.6, 0.9, 1.1, 3.1, 2.2).unwrap();
        let raw = sample_wgg(&params, 30_000, 777);
        let s1 = SampleSet::from_raw(&raw).unwrap();
        // SampleSet renormalizes to unit mean, so apply the scale inside the
        // fit by comparing against raw data scaled before normalization:
        // normalization makes the fit scale-free, so fitted shapes from any
        // scaling of the same raw data must agree tightly.
        let scaled: Vec<f64> = raw.iter().map(|v| v * 3.21).collect();
        let s2 = SampleSet::from_raw(&scaled).unwrap();
        let opts = WggFitOptions { restarts: 2, ..Default::default() };
        let (p1, _) = fit_wgg(&s1, &opts).unwrap();
        let (p2, _) = fit_wgg(&s2, &opts).unwrap();
        assert_relative_eq!(p1.beta, p2.beta, max_relative = 1e-3);
        assert_relative_eq!(p1.p, p2.p, max_relative = 1e-3);
        assert_relative_eq!(p1.d, p2.d, max_relative = 1e-3);
        assert_relative_eq!(p1.eta, p2.eta, max_relative = 1e-3);
    }

    #[test]
    fn eta_update_consistent_at_fixed_point() {
        // at an EM fixed point, re-plugging (beta, gamma) into the scale
        // update reproduces eta; drive EM to a tight fixed point first
        let params = WggParams::new(0.6, 3.0, 1.0, 0.8, 2.0, 1.5).unwrap();
        let raw = sample_wgg(&params, 20_000, 999);
        let samples = SampleSet::from_raw(&raw).unwrap();
        let init = wgg_initial_guess(&samples).unwrap();
        let (fitted, _) =
            em_fit_wgg(&samples, init, 4000, 1e-12, WeibullScaleForm::MaximumLikelihood).unwrap();
        let data = FitData::new(&samples).unwrap();
        let lv = fitted.varpi.ln();
        let lu = (1.0 - fitted.varpi).ln();
        let weights: Vec<f64> = data
            .x
            .iter()
            .map(|&x| {
                let lf = lv + ln_weibull_pdf(fitted.beta, fitted.eta, x);
                let lg = lu + ln_gg_pdf(fitted.a, fitted.d, fitted.p, x);
                1.0 / (1.0 + (lg - lf).exp())
            })
            .collect();
        let s0: f64 = weights.iter().sum();
        let sb: f64 = weights
            .iter()
            .zip(&data.ln)
            .map(|(w, &l)| w * (fitted.beta * l).exp())
            .sum();
        let eta_again = (sb / s0).powf(1.0 / fitted.beta);
        assert_relative_eq!(eta_again, fitted.eta, max_relative = 1e-6);
    }
}
