//! Scan the refractive-index spectrum and the per-screen phase PSD over
//! spatial frequency at one depth of a profile. Output is plot-ready CSV on
//! stdout: kappa, Phi_T, Phi_S, Phi_TS, Phi_n, F_phi.
//!
//!     cargo run --example spectrum_scan > spectrum.csv

use std::path::Path;
use vuwoc::{
    component_spectrum, layer_params, load_profile, phase_psd, refractive_index_spectrum,
    PhysicalConstants, SpectrumComponent, SpectrumParams,
};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles/pacific.csv");
    let profile = load_profile(&path).expect("profile parses");
    let constants = PhysicalConstants::default();
    let layer = layer_params(&profile, 55.0, 1e-5, 1e-5, 532e-9, &constants).unwrap();
    let params = SpectrumParams::new(layer, constants.beta0);
    let wavenumber = 2.0 * std::f64::consts::PI / 532e-9;
    let delta_d = 7.0;

    println!("kappa,phi_t,phi_s,phi_ts,phi_n,f_phi");
    let mut kappa = 1.0;
    while kappa < 2.0e4 {
        let t = component_spectrum(SpectrumComponent::Temperature, kappa, &params).unwrap();
        let s = component_spectrum(SpectrumComponent::Salinity, kappa, &params).unwrap();
        let ts = component_spectrum(SpectrumComponent::CoSpectrum, kappa, &params).unwrap();
        let n = refractive_index_spectrum(kappa, &params).unwrap();
        let f = phase_psd(kappa, wavenumber, delta_d, &params).unwrap();
        println!("{kappa},{t},{s},{ts},{n},{f}");
        kappa *= 1.25;
    }
}
