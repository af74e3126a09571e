//! Desk-scale end-to-end campaign through the library API: plan, simulate,
//! fit, goodness of fit and BER, writing every artifact to a scratch
//! directory. The same flow is available as `vuwoc run --config <file>`.
//!
//!     cargo run --example campaign_small

use std::path::Path;
use vuwoc::campaign::{run_campaign, CampaignConfig};
use vuwoc::fading::Family;

fn main() {
    let profile = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/profiles/pacific.csv");
    let text = format!(
        "\
profile = {}
N = 256
delta1 = 0.25e-3
lambda = 532e-9
w0 = 0.01
Da = 0.012
dT = 30
dL = 20
Np = 5
epsilon = 1e-7
KT = 1e-5
realizations = 150
seed = 7
workers = 4
models = weibull,gg,wgg
snr_db = 0:40:2
emit_spot_stats = true
",
        profile.display()
    );
    let config = CampaignConfig::parse(&text).expect("config parses");
    let out = std::env::temp_dir().join("vuwoc_campaign_small");
    let result = run_campaign(&config, &out).expect("campaign runs");

    println!("samples: {}", result.samples.len());
    println!("scintillation index: {:.4e}", result.samples.variance());
    for r in &result.report.records {
        match &r.note {
            None => println!(
                "{:<8} r2 {:>8.4}  mse {:>10.3e}  converged {}",
                r.family.name(),
                r.r_squared,
                r.mse,
                r.converged
            ),
            Some(note) => println!("{:<8} flagged: {note}", r.family.name()),
        }
    }
    if let Some(wgg) = result.report.get(Family::Wgg) {
        if wgg.usable() {
            println!("fitted WGG params: {:?}", wgg.params);
        }
    }
    match &result.ber {
        Some(curve) => println!("ber curve: {} points", curve.points.len()),
        None => println!("ber skipped (no converged WGG record)"),
    }
    println!("artifacts in {}", out.display());
}
