//! Vacuum-propagation oracle: a collimated Gaussian beam propagated with the
//! angular-spectrum step must reproduce the analytic beam-radius growth
//! w(z) = w0 sqrt(1 + (z/z_R)^2) and conserve power.
//!
//!     cargo run --example vacuum_beam

use vuwoc::{gaussian_source, vacuum_step, GridSpec};

fn main() {
    let grid = GridSpec::new(512, 0.25e-3, 0.25e-3, 532e-9, 0.12).unwrap();
    let w0 = 0.03;
    let z_r = std::f64::consts::PI * w0 * w0 / 532e-9;
    println!("w0 = {} m, Rayleigh range = {:.1} m", w0, z_r);

    let source = gaussian_source(&grid, w0).unwrap();
    let p0 = source.total_power();
    println!("\n     z      w analytic    w measured    rel err    power drift");
    let mut field = source.clone();
    for hop in 0..10 {
        field = vacuum_step(&field, 7.0, 1.0).unwrap();
        let z = 7.0 * (hop + 1) as f64;
        let analytic = w0 * (1.0 + (z / z_r).powi(2)).sqrt();
        let measured = field.second_moment_radius();
        println!(
            "{z:6.1}  {analytic:12.6e}  {measured:12.6e}  {:+.2e}  {:+.2e}",
            measured / analytic - 1.0,
            field.total_power() / p0 - 1.0
        );
    }
}
