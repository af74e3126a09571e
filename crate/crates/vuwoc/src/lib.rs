//! Wave-optics simulation and statistical analysis of vertical underwater
//! optical links.
//!
//! The crate models a beam propagating downward through depth-stratified
//! oceanic turbulence with the multi-phase-screen split-step method, fits the
//! received-intensity statistics with a Weibull + generalized-Gamma mixture
//! (and eight baseline families) via EM, and evaluates closed-form average
//! BER for OOK links under that fading model.
//!
//! Start from the `examples/` directory: each file exercises one capability
//! end to end. The `campaign` module (and the thin `vuwoc` binary on top of
//! it) chains the stages plan -> simulate -> fit -> gof -> ber from a plain
//! key=value configuration.

pub mod ber;
pub mod campaign;
pub mod constants;
pub mod environment;
pub mod fading;
pub mod numerics;
pub mod planner;
pub mod propagation;
pub mod screens;
pub mod spectrum;

pub use constants::PhysicalConstants;
pub use environment::{
    gradients_at, layer_params, load_profile, state_at, thermo_coefficients, OceanProfile,
    SeawaterState, TurbulenceLayerParams,
};
pub use planner::{
    magnification_bounds, max_screen_spacing, min_screens, plan_screens, GridSpec, PropagationPlan,
};
pub use propagation::{
    apply_screen, gaussian_source, propagate_link, receive, vacuum_step, IntensitySample,
    LinkOptions, OpticalField, ReceiverSpec,
};
pub use screens::{generate_screen, screen_ensemble_stats, PhaseScreen};
pub use spectrum::{
    component_spectrum, phase_psd, refractive_index_spectrum, SpectrumComponent, SpectrumParams,
};
