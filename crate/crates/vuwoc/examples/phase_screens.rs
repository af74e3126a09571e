//! Synthesize a phase-screen ensemble from a profile-driven PSD, compare the
//! ensemble variance against the discrete spectral integral, and dump one
//! screen as a binary grid (16-byte header + row-major f64).
//!
//!     cargo run --example phase_screens

use std::path::Path;
use vuwoc::numerics::fft2::freq_index;
use vuwoc::screens::{structure_function, subharmonic_mean_kernel, write_grid_binary};
use vuwoc::{
    generate_screen, layer_params, load_profile, phase_psd, screen_ensemble_stats, GridSpec,
    PhysicalConstants, SpectrumParams,
};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles/pacific.csv");
    let profile = load_profile(&path).expect("profile parses");
    let constants = PhysicalConstants::default();
    let layer = layer_params(&profile, 55.0, 1e-5, 1e-5, 532e-9, &constants).unwrap();
    let params = SpectrumParams::new(layer, constants.beta0);
    let grid = GridSpec::new(256, 0.25e-3, 0.25e-3, 532e-9, 0.032).unwrap();
    let k = grid.wavenumber();
    let delta_d = 7.0;
    let levels = 3;
    let psd = move |kappa: f64| phase_psd(kappa, k, delta_d, &params).unwrap_or(0.0);

    let screens: Vec<_> = (0..300)
        .map(|i| generate_screen(&grid, psd, 42 + i, levels, 55.0).expect("screen"))
        .collect();
    let stats = screen_ensemble_stats(&screens).unwrap();

    // independent discrete PSD integral including the piston-removal factor
    let n = grid.n_points;
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * grid.delta1);
    let mut target = 0.0;
    for u in 0..n {
        for v in 0..n {
            let kx = dk * freq_index(u, n) as f64;
            let ky = dk * freq_index(v, n) as f64;
            let kappa = (kx * kx + ky * ky).sqrt();
            if kappa > 0.0 {
                target += psd(kappa).max(0.0) * dk * dk;
            }
        }
    }
    for level in 1..=levels {
        let dk_l = dk / 3f64.powi(level as i32);
        for iu in -1i64..=1 {
            for iv in -1i64..=1 {
                if iu == 0 && iv == 0 {
                    continue;
                }
                let kappa = dk_l * ((iu * iu + iv * iv) as f64).sqrt();
                let m = subharmonic_mean_kernel(iu, level, n)
                    * subharmonic_mean_kernel(iv, level, n);
                target += psd(kappa).max(0.0) * dk_l * dk_l * (1.0 - m.norm_sqr());
            }
        }
    }

    println!("ensemble of {} screens at N = {}", screens.len(), n);
    println!("ensemble mean:      {:+.3e} rad", stats.mean);
    println!("ensemble variance:  {:.6e} rad^2", stats.variance);
    println!("spectral target:    {:.6e} rad^2", target);
    println!("ratio:              {:.4}", stats.variance / target);
    for lag in [1usize, 4, 16, 64] {
        let d = structure_function(&screens, lag).unwrap();
        println!("structure function at {:>2} px ({:.4} m): {:.4e} rad^2", lag, lag as f64 * grid.delta1, d);
    }

    let out = std::env::temp_dir().join("vuwoc_example_screen.bin");
    write_grid_binary(&out, &screens[0].phase, screens[0].spacing).unwrap();
    println!("first screen dumped to {}", out.display());
}
