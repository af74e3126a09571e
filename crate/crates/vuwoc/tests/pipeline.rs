//! Stage-composition and determinism tests for the campaign pipeline.

use std::path::{Path, PathBuf};
use vuwoc::campaign::{
    artifact, run_campaign, stage_ber, stage_fit, stage_gof, stage_plan, stage_simulate,
    CampaignConfig, CampaignError,
};
use vuwoc::fading::{synth::sample_wgg, Family, FitReport, WggParams};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vuwoc_pipeline_{}_{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_profile(dir: &Path) -> PathBuf {
    let mut text = String::from("depth_m,temperature_C,salinity_ppt\n");
    for i in 0..=20 {
        let z = i as f64 * 2.0;
        text.push_str(&format!("{z},{},{}\n", 16.0 - 0.09 * z, 35.0 - 0.007 * z));
    }
    let path = dir.join("profile.csv");
    std::fs::write(&path, text).unwrap();
    path
}

fn small_config(profile: &Path, realizations: usize, workers: usize) -> CampaignConfig {
    let text = format!(
        "\
profile = {}
N = 128
delta1 = 0.4e-3
lambda = 532e-9
w0 = 0.008
Da = 0.01
dT = 10
dL = 8
Np = 4
epsilon = 1e-7
KT = 1e-5
realizations = {realizations}
seed = 31415
workers = {workers}
models = weibull,gg,wgg
snr_db = 0:30:5
",
        profile.display()
    );
    CampaignConfig::parse(&text).unwrap()
}

#[test]
fn staged_run_equals_composed_run() {
    let dir = scratch("compose");
    let profile = write_profile(&dir);
    let config = small_config(&profile, 120, 2);

    let composed = dir.join("composed");
    run_campaign(&config, &composed).unwrap();

    let staged = dir.join("staged");
    stage_plan(&config, &staged).unwrap();
    stage_simulate(&config, &staged).unwrap();
    stage_fit(&config, &staged).unwrap();
    stage_gof(&staged).unwrap();
    stage_ber(&config, &staged).unwrap();

    for name in
        [artifact::PLAN, artifact::SAMPLES, artifact::HISTOGRAM, artifact::FIT_REPORT, artifact::GOF, artifact::BER]
    {
        let a = std::fs::read(composed.join(name)).unwrap();
        let b = std::fs::read(staged.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between composed and staged runs");
    }
}

#[test]
fn samples_are_worker_count_invariant() {
    let dir = scratch("workers");
    let profile = write_profile(&dir);
    let serial = dir.join("serial");
    let parallel = dir.join("parallel");
    stage_simulate(&small_config(&profile, 24, 1), &serial).unwrap();
    stage_simulate(&small_config(&profile, 24, 4), &parallel).unwrap();
    let a = std::fs::read(serial.join(artifact::SAMPLES)).unwrap();
    let b = std::fs::read(parallel.join(artifact::SAMPLES)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_realization_flags_fitting() {
    let dir = scratch("single");
    let profile = write_profile(&dir);
    let out = dir.join("out");
    let config = small_config(&profile, 1, 1);
    let result = run_campaign(&config, &out).unwrap();
    assert_eq!(result.samples.len(), 1);
    assert!(result.report.records.iter().all(|r| !r.usable()));
    assert!(result.ber.is_none());
    assert!(!out.join(artifact::BER).exists());
    // provenance still written
    assert!(out.join(artifact::PROVENANCE).exists());
}

#[test]
fn ber_stage_requires_converged_wgg() {
    let dir = scratch("ber_missing");
    let profile = write_profile(&dir);
    let config = small_config(&profile, 120, 1);
    // fabricate a fit report without a WGG record
    let report = FitReport {
        records: vec![vuwoc::fading::FitRecord::failed(Family::Wgg, "not fitted")],
    };
    std::fs::write(dir.join(artifact::FIT_REPORT), report.to_text()).unwrap();
    match stage_ber(&config, &dir) {
        Err(CampaignError::Artifact(msg)) => assert!(msg.contains("WGG")),
        other => panic!("expected artifact error, got {other:?}"),
    }
    assert!(!dir.join(artifact::BER).exists());
}

#[test]
fn fit_stage_accepts_external_samples() {
    let dir = scratch("external");
    let profile = write_profile(&dir);
    let config = small_config(&profile, 120, 1);
    // externally produced sample file (synthetic draws, arbitrary scale)
    let truth = WggParams::new(0.6, 3.0, 1.0, 0.9, 2.5, 1.8).unwrap();
    let raw = sample_wgg(&truth, 3000, 99);
    let mut csv = String::from("realization,received_power,normalized_intensity\n");
    let mean: f64 = raw.iter().sum::<f64>() / raw.len() as f64;
    for (i, v) in raw.iter().enumerate() {
        csv.push_str(&format!("{i},{v},{}\n", v / mean));
    }
    std::fs::write(dir.join(artifact::SAMPLES), csv).unwrap();
    let report = stage_fit(&config, &dir).unwrap();
    let wgg = report.get(Family::Wgg).unwrap();
    assert!(wgg.usable(), "external samples should fit: {:?}", wgg.note);
    assert!(dir.join(artifact::HISTOGRAM).exists());
    // and the gof stage consumes the result
    stage_gof(&dir).unwrap();
    let gof = std::fs::read_to_string(dir.join(artifact::GOF)).unwrap();
    assert!(gof.lines().count() >= 3);
}

#[test]
fn plan_stage_produces_constraint_report() {
    let dir = scratch("plan");
    let profile = write_profile(&dir);
    let config = small_config(&profile, 10, 1);
    stage_plan(&config, &dir).unwrap();
    let report = std::fs::read_to_string(dir.join(artifact::PLAN)).unwrap();
    assert!(report.contains("max screen spacing"));
    assert!(report.contains("minimum screens"));
}

#[test]
fn profile_span_is_validated() {
    let dir = scratch("span");
    let profile = write_profile(&dir); // spans 0..40 m
    let mut config = small_config(&profile, 10, 1);
    config.transmitter_depth = 35.0;
    config.link_depth = 20.0; // needs 35..55 m
    match vuwoc::campaign::simulate(&config, None) {
        Err(CampaignError::ProfileSpan { .. }) => {}
        other => panic!("expected span error, got {:?}", other.map(|_| ())),
    }
}
