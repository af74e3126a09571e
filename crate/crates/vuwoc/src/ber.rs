//! Average bit-error rate of an OOK IM/DD link under WGG fading.
//!
//! The conditional BER is erfc-shaped in the instantaneous intensity; the
//! average is its expectation under the mixture density. Two routes are
//! provided: adaptive quadrature of the defining integral (the oracle), and
//! the closed-form series obtained by integrating each mixture component
//! term by term. A Weibull(beta, eta) component is the d = p = beta special
//! case of the generalized Gamma, so one component evaluator serves both.
//!
//! dB convention: snr_linear = 10^{dB/20} (the SNR multiplies the intensity
//! inside the erfc argument, i.e. it is an amplitude-domain quantity).

use crate::fading::{wgg_cdf, wgg_pdf, WggParams};
use crate::numerics::quad::{integrate, integrate_from_zero, integrate_simpson};
use crate::numerics::special::{erfc, gamma_q, ln_gamma};
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum BerError {
    #[error("snr must be positive, got {0}")]
    NonPositiveSnr(f64),
    #[error("quadrature did not reach the requested tolerance (error estimate {0:.3e})")]
    QuadratureNotConverged(f64),
    #[error("invalid sweep: start {start} dB, stop {stop} dB, step {step} dB")]
    BadSweep { start: f64, stop: f64, step: f64 },
    #[error(transparent)]
    Params(#[from] crate::fading::FitError),
}

/// Evaluation route of an average-BER value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerMethod {
    Series,
    Quadrature,
}

impl BerMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BerMethod::Series => "series",
            BerMethod::Quadrature => "quadrature",
        }
    }
}

/// Average BER value with its evaluation route. `fallback` marks series
/// requests that had to divert to quadrature.
#[derive(Debug, Clone, Copy)]
pub struct BerValue {
    pub value: f64,
    pub method: BerMethod,
    pub fallback: bool,
}

/// One point of a BER curve.
#[derive(Debug, Clone, Copy)]
pub struct BerPoint {
    pub snr_db: f64,
    pub average_ber: f64,
    pub method: BerMethod,
    pub fallback: bool,
}

/// Average-BER curve over an SNR sweep.
#[derive(Debug, Clone)]
pub struct BerCurve {
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    /// CSV serialization: `snr_db,average_ber,method` with full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,average_ber,method\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{}\n", p.snr_db, p.average_ber, p.method.name()));
        }
        out
    }
}

/// Amplitude-domain dB conversion: snr = 10^{dB/20}.
pub fn snr_from_db(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Conditional BER of OOK IM/DD: erfc(snr I / (2 sqrt 2)) / 2.
pub fn conditional_ber(snr: f64, intensity: f64) -> f64 {
    0.5 * erfc(snr * intensity / (2.0 * std::f64::consts::SQRT_2))
}

/// Mixture survival function, evaluated without cancellation.
fn wgg_sf(params: &WggParams, x: f64) -> f64 {
    let weib = (-(x / params.eta).powf(params.beta)).exp();
    let gg = gamma_q(params.d / params.p, (x / params.a).powf(params.p));
    params.varpi * weib + (1.0 - params.varpi) * gg
}

/// Upper integration limit: survival below 1e-16.
fn upper_limit(params: &WggParams) -> f64 {
    let mut u = 2.0 * params.eta.max(params.a).max(1.0);
    while wgg_sf(params, u) > 1e-16 && u < 1e9 {
        u *= 2.0;
    }
    u
}

/// Average BER by adaptive quadrature of the defining integral,
/// absolute tolerance 1e-12. This is the oracle for the series route.
pub fn average_ber_quadrature(params: &WggParams, snr: f64) -> Result<f64, BerError> {
    if snr <= 0.0 {
        return Err(BerError::NonPositiveSnr(snr));
    }
    params.validate()?;
    let p = *params;
    let upper = upper_limit(&p);
    let r = integrate_from_zero(move |x| wgg_pdf(&p, x) * conditional_ber(snr, x), upper, 1e-12);
    if !r.converged && r.error_estimate > 1e-10 {
        return Err(BerError::QuadratureNotConverged(r.error_estimate));
    }
    Ok(r.value.clamp(0.0, 0.5))
}

/// Independent second integrator (adaptive Simpson with step doubling),
/// used only for cross-checks.
pub fn average_ber_simpson(params: &WggParams, snr: f64) -> Result<f64, BerError> {
    if snr <= 0.0 {
        return Err(BerError::NonPositiveSnr(snr));
    }
    params.validate()?;
    let p = *params;
    let upper = upper_limit(&p);
    // geometric panels toward zero, mirroring the Kronrod route's splitting
    let f = move |x: f64| wgg_pdf(&p, x) * conditional_ber(snr, x);
    let mut total = integrate_simpson(f, 0.0, upper * 0.5f64.powi(40), 1e-15);
    for j in (0..40).rev() {
        let hi = upper * 0.5f64.powi(j);
        total += integrate_simpson(f, hi * 0.5, hi, 1e-12 / 40.0);
    }
    Ok(total.clamp(0.0, 0.5))
}

/// Outcome of one component's series evaluation.
enum ComponentSeries {
    Value(f64),
    NeedsQuadrature,
}

/// Series term accumulator with compensated summation in linear space and
/// magnitude bookkeeping in log space.
struct SeriesAccumulator {
    sum: f64,
    compensation: f64,
    max_term: f64,
}

impl SeriesAccumulator {
    fn new() -> Self {
        Self { sum: 0.0, compensation: 0.0, max_term: 0.0 }
    }

    fn add(&mut self, term: f64) {
        self.max_term = self.max_term.max(term.abs());
        let y = term - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    /// Growth guard: larger intermediate terms than 1e6 x the running sum
    /// mean the alternating series is cancelling too deeply for f64.
    fn unstable(&self) -> bool {
        self.max_term > 1e6 * self.sum.abs().max(1e-30)
    }
}

const MAX_TERMS: usize = 500;
const REL_STOP: f64 = 1e-12;
const SHAPE_EQ_TWO: f64 = 1e-9;

/// Average erfc integral for one GG(a, d, p) component with mixture weight
/// `w`. The Weibull component is the d = p = beta case.
fn gg_component_avg_ber(w: f64, a: f64, d: f64, p: f64, snr: f64) -> ComponentSeries {
    let a4 = snr / (2.0 * std::f64::consts::SQRT_2);
    let ln_gamma_dp = ln_gamma(d / p);
    if (p - 2.0).abs() < SHAPE_EQ_TWO {
        // closed form through 2F1(1/2, (d+1)/2; 3/2; -z^2)
        let z = a * a4;
        let f = hyp2f1_half((d + 1.0) / 2.0, z * z);
        let coef = (ln_gamma((d + 1.0) / 2.0) - ln_gamma(d / 2.0)).exp() / PI.sqrt();
        return ComponentSeries::Value(w * (0.5 - z * coef * f));
    }
    if p > 2.0 {
        // alternating series in x = (a snr / 2 sqrt 2)^2
        let x = (a * a4) * (a * a4);
        let ln_x = x.ln();
        let mut acc = SeriesAccumulator::new();
        let mut converged = false;
        for t in 0..MAX_TERMS {
            let tf = t as f64;
            let ln_mag = ln_gamma((2.0 * tf + d + 1.0) / p) - (tf + 0.5).ln()
                - ln_gamma(tf + 1.0)
                + tf * ln_x;
            if ln_mag > 700.0 {
                return ComponentSeries::NeedsQuadrature;
            }
            let term = if t % 2 == 0 { ln_mag.exp() } else { -ln_mag.exp() };
            acc.add(term);
            if acc.unstable() {
                return ComponentSeries::NeedsQuadrature;
            }
            if t > 2 && term.abs() < REL_STOP * acc.sum.abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return ComponentSeries::NeedsQuadrature;
        }
        let coef = (w * a * snr / (4.0 * (2.0 * PI).sqrt())) * (-ln_gamma_dp).exp();
        ComponentSeries::Value(w / 2.0 - coef * acc.sum)
    } else {
        // ascending series in y = (2 sqrt 2 / (a snr))^p
        let ln_base = ((2.0 * std::f64::consts::SQRT_2) / (a * snr)).ln();
        let ln_yd = d * ln_base;
        let ln_yp = p * ln_base;
        let mut acc = SeriesAccumulator::new();
        let mut converged = false;
        for t in 0..MAX_TERMS {
            let tf = t as f64;
            let ln_mag = ln_gamma((p * tf + d + 1.0) / 2.0) - (p * tf + d).ln()
                - ln_gamma(tf + 1.0)
                + ln_yd
                + tf * ln_yp;
            if ln_mag > 700.0 {
                return ComponentSeries::NeedsQuadrature;
            }
            let term = if t % 2 == 0 { ln_mag.exp() } else { -ln_mag.exp() };
            acc.add(term);
            if acc.unstable() {
                return ComponentSeries::NeedsQuadrature;
            }
            if t > 2 && term.abs() < REL_STOP * acc.sum.abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return ComponentSeries::NeedsQuadrature;
        }
        let coef = w * p / (2.0 * PI.sqrt()) * (-ln_gamma_dp).exp();
        ComponentSeries::Value(coef * acc.sum)
    }
}

/// 2F1(1/2, b; 3/2; -x) for x >= 0 through the integral representation
/// int_0^1 (1 + x s^2)^{-b} ds (smooth, bounded by 1 on the unit interval).
pub fn hyp2f1_half(b: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    integrate(move |s| (1.0 + x * s * s).powf(-b), 0.0, 1.0, 1e-15).value
}

/// Average BER by the closed-form component series, falling back to
/// quadrature (flagged) when a series is unstable or non-convergent.
pub fn average_ber_series(params: &WggParams, snr: f64) -> Result<BerValue, BerError> {
    if snr <= 0.0 {
        return Err(BerError::NonPositiveSnr(snr));
    }
    params.validate()?;
    let weibull =
        gg_component_avg_ber(params.varpi, params.eta, params.beta, params.beta, snr);
    let gg = gg_component_avg_ber(1.0 - params.varpi, params.a, params.d, params.p, snr);
    match (weibull, gg) {
        (ComponentSeries::Value(b1), ComponentSeries::Value(b2)) => Ok(BerValue {
            value: (b1 + b2).clamp(0.0, 0.5),
            method: BerMethod::Series,
            fallback: false,
        }),
        _ => {
            let value = average_ber_quadrature(params, snr)?;
            Ok(BerValue { value, method: BerMethod::Quadrature, fallback: true })
        }
    }
}

/// Average-BER curve over an inclusive dB sweep, series route with
/// quadrature fallback per point.
pub fn ber_curve(
    params: &WggParams,
    start_db: f64,
    stop_db: f64,
    step_db: f64,
) -> Result<BerCurve, BerError> {
    if !(step_db > 0.0 && start_db < stop_db) {
        return Err(BerError::BadSweep { start: start_db, stop: stop_db, step: step_db });
    }
    let mut points = Vec::new();
    let mut db = start_db;
    while db <= stop_db + 1e-9 {
        let v = average_ber_series(params, snr_from_db(db))?;
        points.push(BerPoint {
            snr_db: db,
            average_ber: v.value,
            method: v.method,
            fallback: v.fallback,
        });
        db += step_db;
    }
    Ok(BerCurve { points })
}

/// CDF of the mixture at `x`; exposed for the MSE stage of the pipeline.
pub fn wgg_cdf_value(params: &WggParams, x: f64) -> f64 {
    wgg_cdf(params, x)
}
