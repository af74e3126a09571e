//! Fit the distribution zoo to synthetic mixture samples and print the
//! goodness-of-fit comparison; the mixture family should win on both scores.
//!
//!     cargo run --example fit_wgg

use vuwoc::fading::{fit_all_families, synth::sample_wgg, Family, SampleSet, WggParams};

fn main() {
    let truth = WggParams::new(0.62, 4.5, 1.05, 0.85, 3.2, 2.4).unwrap();
    let raw = sample_wgg(&truth, 50_000, 20_240_601);
    let samples = SampleSet::from_raw(&raw).unwrap();
    println!(
        "fitting {} samples from WGG(varpi={}, beta={}, eta={}, a={}, d={}, p={})",
        samples.len(),
        truth.varpi,
        truth.beta,
        truth.eta,
        truth.a,
        truth.d,
        truth.p
    );
    println!("sample variance (scintillation index): {:.4}\n", samples.variance());

    let report = fit_all_families(&samples, &Family::ALL);
    println!("{:<12} {:>10} {:>12} {:>14}  parameters", "family", "R^2", "MSE", "loglik");
    for r in &report.records {
        match &r.note {
            None => {
                let params = r
                    .params
                    .iter()
                    .map(|p| format!("{p:.4}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                println!(
                    "{:<12} {:>10.4} {:>12.3e} {:>14.2}  ({params})",
                    r.family.name(),
                    r.r_squared,
                    r.mse,
                    r.loglik
                );
            }
            Some(note) => println!("{:<12} flagged: {note}", r.family.name()),
        }
    }

    let wgg = report.get(Family::Wgg).unwrap();
    let best_r2 = report
        .records
        .iter()
        .filter(|r| r.usable())
        .map(|r| r.r_squared)
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "\nWGG R^2 = {:.4} (best overall: {:.4}), recovered varpi = {:.3}",
        wgg.r_squared, best_r2, wgg.params[0]
    );
}
