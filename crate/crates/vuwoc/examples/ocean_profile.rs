//! Load a depth profile, interpolate water states and derive the per-layer
//! turbulence quantities that drive the refractive-index spectrum.
//!
//!     cargo run --example ocean_profile

use std::path::Path;
use vuwoc::{gradients_at, layer_params, load_profile, state_at, PhysicalConstants};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles/pacific.csv");
    let profile = load_profile(&path).expect("profile parses");
    println!(
        "profile `{}`: {} samples spanning {} m to {} m",
        profile.source_id(),
        profile.samples().len(),
        profile.min_depth(),
        profile.max_depth()
    );

    let constants = PhysicalConstants::default();
    println!("\n depth      T (C)   S (ppt)    dT/dz      dS/dz      chi_T        omega    dr");
    for depth in [25.0, 50.0, 100.0, 300.0, 800.0] {
        let state = state_at(&profile, depth).unwrap();
        let (dt, ds) = gradients_at(&profile, depth).unwrap();
        let layer = layer_params(&profile, depth, 1e-5, 1e-5, 532e-9, &constants).unwrap();
        println!(
            "{depth:6.1}  {:8.3}  {:8.3}  {dt:9.5}  {ds:9.5}  {:11.4e}  {:7.3}  {:.3}",
            state.temperature, state.salinity, layer.chi_t, layer.omega, layer.dr
        );
    }
}
