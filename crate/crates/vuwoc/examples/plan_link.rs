//! Sampling constraints and screen placement for a reference vertical link:
//! N = 1024 grid at 0.25 mm spacing, 532 nm, 70 m link from 20 m depth.
//!
//!     cargo run --example plan_link

use vuwoc::{max_screen_spacing, min_screens, plan_screens, GridSpec};

fn main() {
    let grid = GridSpec::new(1024, 0.25e-3, 0.25e-3, 532e-9, 0.12).expect("valid grid");
    let d_max = max_screen_spacing(&grid);
    let n_min = min_screens(70.0, d_max);
    println!("max screen spacing: {d_max:.4} m");
    println!("minimum screens for a 70 m link: {n_min}");

    let plan = plan_screens(&grid, 20.0, 70.0, 10).expect("10 screens satisfy the constraint");
    print!("{}", plan.report(&grid));

    // a plan that violates the constraint is rejected with the bound quoted
    match plan_screens(&grid, 0.0, 500.0, 2) {
        Err(e) => println!("\n500 m with 2 screens: {e}"),
        Ok(_) => unreachable!(),
    }
}
