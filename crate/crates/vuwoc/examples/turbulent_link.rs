//! One realization of a turbulent vertical link: profile-driven screens,
//! split-step propagation and aperture reception at two aperture sizes.
//!
//!     cargo run --example turbulent_link

use std::path::Path;
use vuwoc::{
    gaussian_source, generate_screen, layer_params, load_profile, phase_psd, plan_screens,
    propagate_link, receive, GridSpec, LinkOptions, PhysicalConstants, ReceiverSpec,
    SpectrumParams,
};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles/atlantic.csv");
    let profile = load_profile(&path).expect("profile parses");
    let constants = PhysicalConstants::default();

    let grid = GridSpec::new(256, 0.25e-3, 0.25e-3, 532e-9, 0.04).unwrap();
    let (d_t, d_l, n_screens) = (20.0, 30.0, 5);
    let plan = plan_screens(&grid, d_t, d_l, n_screens).unwrap();
    let k = grid.wavenumber();
    let thickness = d_l / n_screens as f64;

    let screens: Vec<_> = plan
        .screen_depths
        .iter()
        .enumerate()
        .map(|(p, &depth)| {
            let layer = layer_params(&profile, depth, 1e-6, 1e-5, 532e-9, &constants).unwrap();
            let params = SpectrumParams::new(layer, constants.beta0);
            let psd = move |kappa: f64| phase_psd(kappa, k, thickness, &params).unwrap_or(0.0);
            generate_screen(&grid, psd, 1000 + p as u64, 3, depth).unwrap()
        })
        .collect();
    for s in &screens {
        let rms = (s.phase.iter().map(|p| p * p).sum::<f64>()
            / (s.n() * s.n()) as f64)
            .sqrt();
        println!("screen at {:5.1} m: phase rms {:.4} rad", s.depth, rms);
    }

    let source = gaussian_source(&grid, 0.015).unwrap();
    let field = propagate_link(&source, &plan, &screens, LinkOptions::default()).unwrap();
    println!("\nreceiver plane at {} m", field.depth);
    println!("beam second-moment radius: {:.4} m", field.second_moment_radius());
    for da in [0.025, 0.05] {
        let sample = receive(
            &field,
            &ReceiverSpec { aperture_diameter: da, center_offset: (0.0, 0.0) },
            0,
        )
        .unwrap();
        println!(
            "aperture {:>4.1} cm: received power {:.6e} ({:.2}% of source)",
            da * 100.0,
            sample.received_power,
            100.0 * sample.received_power / source.total_power()
        );
    }
}
