//! Oceanic refractive-index power spectrum and per-screen phase PSD.
//!
//! The three scalar component spectra (temperature, salinity, co-spectrum)
//! share one closed form driven by the dissipation rate chi_q, the
//! Kolmogorov microscale and the non-dimensional parameter c_q; the
//! refractive-index spectrum combines them through the linear coefficients
//! A and B. This module is a raw formula evaluator: the bracket term is not
//! sign-definite, so consumers that need a nonnegative PSD clamp downstream.

use crate::environment::TurbulenceLayerParams;
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum SpectrumError {
    #[error("spatial frequency must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("non-positive argument {name}: {value}")]
    NonPositive { name: &'static str, value: f64 },
}

/// Which scalar spectrum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumComponent {
    Temperature,
    Salinity,
    CoSpectrum,
}

/// Bundle of layer parameters plus the Oboukhov-Corrsin constant.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumParams {
    pub layer: TurbulenceLayerParams,
    pub beta0: f64,
}

impl SpectrumParams {
    pub fn new(layer: TurbulenceLayerParams, beta0: f64) -> Self {
        assert!(beta0 > 0.0, "beta0 must be positive");
        Self { layer, beta0 }
    }
}

/// Scalar spectrum Phi_q(kappa) in m^3.
///
/// Phi_q = (beta0 chi_q eps^{-1/3} / 4 pi) kappa^{-11/3}
///         exp[-174.90 (kappa eta)^2 c_q^{0.96}]
///         [1 + 21.61 (kappa eta)^{0.61} c_q^{0.02} - 18.18 (kappa eta)^{0.55} c_q^{0.04}]
pub fn component_spectrum(
    q: SpectrumComponent,
    kappa: f64,
    params: &SpectrumParams,
) -> Result<f64, SpectrumError> {
    if kappa <= 0.0 {
        return Err(SpectrumError::NonPositiveKappa(kappa));
    }
    let layer = &params.layer;
    let (chi, c) = match q {
        SpectrumComponent::Temperature => (layer.chi_t, layer.c_t),
        SpectrumComponent::Salinity => (layer.chi_s, layer.c_s),
        SpectrumComponent::CoSpectrum => (layer.chi_ts, layer.c_ts),
    };
    if chi == 0.0 {
        return Ok(0.0);
    }
    let ke = kappa * layer.eta;
    let front = params.beta0 * chi * layer.epsilon.powf(-1.0 / 3.0) / (4.0 * PI)
        * kappa.powf(-11.0 / 3.0);
    let decay = (-174.90 * ke * ke * c.powf(0.96)).exp();
    let bracket = 1.0 + 21.61 * ke.powf(0.61) * c.powf(0.02) - 18.18 * ke.powf(0.55) * c.powf(0.04);
    Ok(front * decay * bracket)
}

/// Refractive-index spectrum Phi_n = A^2 Phi_T + B^2 Phi_S + 2AB Phi_TS (m^3).
pub fn refractive_index_spectrum(kappa: f64, params: &SpectrumParams) -> Result<f64, SpectrumError> {
    if kappa <= 0.0 {
        return Err(SpectrumError::NonPositiveKappa(kappa));
    }
    let a = params.layer.a;
    let b = params.layer.b;
    let phi_t = component_spectrum(SpectrumComponent::Temperature, kappa, params)?;
    let phi_s = component_spectrum(SpectrumComponent::Salinity, kappa, params)?;
    let phi_ts = component_spectrum(SpectrumComponent::CoSpectrum, kappa, params)?;
    Ok(a * a * phi_t + b * b * phi_s + 2.0 * a * b * phi_ts)
}

/// Phase power spectral density of one screen (m^2):
/// F_phi(kappa) = 2 pi k^2 delta_d Phi_n(kappa).
pub fn phase_psd(
    kappa: f64,
    wavenumber: f64,
    delta_d: f64,
    params: &SpectrumParams,
) -> Result<f64, SpectrumError> {
    if wavenumber <= 0.0 {
        return Err(SpectrumError::NonPositive { name: "wavenumber", value: wavenumber });
    }
    if delta_d <= 0.0 {
        return Err(SpectrumError::NonPositive { name: "delta_d", value: delta_d });
    }
    Ok(2.0 * PI * wavenumber * wavenumber * delta_d * refractive_index_spectrum(kappa, params)?)
}
