//! End-to-end campaign orchestration: plan -> simulate -> fit -> gof -> ber.
//!
//! Each stage consumes and produces plain files in the output directory so
//! campaigns can be resumed or mixed (for example, fitting externally
//! produced samples). `run_campaign` chains the very same stage functions,
//! which makes the composed and staged runs byte-identical.
//!
//! Determinism: (config, master seed) fix every emitted byte except the
//! timestamp line in `provenance.txt`. Per-screen RNG seeds derive from
//! (master seed, realization index, screen index), so results do not depend
//! on the worker count or scheduling.

pub mod config;

pub use config::{CampaignConfig, ConfigError, SampleMode, SnrSweep};

use crate::ber::{ber_curve, BerCurve, BerError};
use crate::constants::{ConstantsError, PhysicalConstants};
use crate::environment::{layer_params, load_profile, EnvironmentError, OceanProfile};
use crate::fading::{
    fit_all_families, wgg_from_vec, Family, FitError, FitRecord, FitReport, Histogram, SampleSet,
};
use crate::planner::{plan_screens, GridSpec, PlanError, PropagationPlan};
use crate::propagation::{
    gaussian_source, propagate_link_observed, receive, receive_pixels, FieldError, LinkOptions,
    OpticalField, ReceiverSpec,
};
use crate::screens::{generate_screen, write_grid_binary, ScreenError};
use crate::spectrum::{phase_psd, SpectrumParams};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("[config] {0}")]
    Config(#[from] ConfigError),
    #[error("[constants] {0}")]
    Constants(#[from] ConstantsError),
    #[error("[environment] {0}")]
    Environment(#[from] EnvironmentError),
    #[error("[plan] {0}")]
    Plan(#[from] PlanError),
    #[error("[screens] {0}")]
    Screen(#[from] ScreenError),
    #[error("[propagation] {0}")]
    Field(#[from] FieldError),
    #[error("[fit] {0}")]
    Fit(#[from] FitError),
    #[error("[ber] {0}")]
    Ber(#[from] BerError),
    #[error("[io] {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("[artifact] {0}")]
    Artifact(String),
    #[error("[simulate] profile `{profile}` spans [{min} m, {max} m] but the link needs [{lo} m, {hi} m]")]
    ProfileSpan { profile: String, min: f64, max: f64, lo: f64, hi: f64 },
}

impl CampaignError {
    /// Process exit code: 2 for validation problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CampaignError::Config(_)
            | CampaignError::Constants(_)
            | CampaignError::Environment(_)
            | CampaignError::Plan(_)
            | CampaignError::Io { .. }
            | CampaignError::Artifact(_)
            | CampaignError::ProfileSpan { .. } => 2,
            CampaignError::Screen(_)
            | CampaignError::Field(_)
            | CampaignError::Fit(_)
            | CampaignError::Ber(_) => 3,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CampaignError + '_ {
    move |source| CampaignError::Io { path: path.to_path_buf(), source }
}

/// splitmix64 step, the standard 64-bit finalizer.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one screen: a splitmix chain over (master, realization, screen),
/// so any screen is reproducible in isolation.
pub fn screen_seed(master: u64, realization: u64, screen: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ realization.wrapping_add(1)) ^ screen.wrapping_add(1))
}

/// Static link machinery shared by every realization.
pub struct LinkSetup {
    pub grid: GridSpec,
    pub plan: PropagationPlan,
    pub source: OpticalField,
    pub receiver: ReceiverSpec,
    /// Per-screen spectrum parameters from the profile at each screen depth.
    pub spectra: Vec<SpectrumParams>,
    /// Thickness of the turbulence layer each screen stands in for.
    pub layer_thickness: f64,
}

/// Validate the configuration against the profile and build the link.
pub fn prepare_link(
    config: &CampaignConfig,
    profile: &OceanProfile,
    constants: &PhysicalConstants,
) -> Result<LinkSetup, CampaignError> {
    let lo = config.transmitter_depth;
    let hi = config.transmitter_depth + config.link_depth;
    if profile.min_depth() > lo || profile.max_depth() < hi {
        return Err(CampaignError::ProfileSpan {
            profile: profile.source_id().to_string(),
            min: profile.min_depth(),
            max: profile.max_depth(),
            lo,
            hi,
        });
    }
    let grid = GridSpec::new(
        config.n_points,
        config.delta1,
        config.delta2,
        config.wavelength,
        config.effective_source_extent(),
    )?;
    let plan = plan_screens(&grid, config.transmitter_depth, config.link_depth, config.n_screens)?;
    let source = gaussian_source(&grid, config.w0)?;
    let receiver = ReceiverSpec { aperture_diameter: config.aperture, center_offset: (0.0, 0.0) };
    // verify the receiver aperture fits before spending any compute
    receive(&source, &receiver, 0)?;
    let mut spectra = Vec::with_capacity(plan.n_screens());
    for &depth in &plan.screen_depths {
        let layer = layer_params(
            profile,
            depth,
            config.epsilon,
            config.k_t,
            config.wavelength,
            constants,
        )?;
        spectra.push(SpectrumParams::new(layer, config.beta0));
    }
    Ok(LinkSetup {
        grid,
        plan,
        source,
        receiver,
        spectra,
        layer_thickness: config.link_depth / config.n_screens as f64,
    })
}

/// Everything one realization contributes.
struct RealizationOutput {
    /// Raw sample values in sampling order.
    rows: Vec<f64>,
    /// Beam second-moment radius after each screen (when requested).
    spot: Option<Vec<f64>>,
}

/// Output of the simulation stage before normalization.
pub struct SimulationOutput {
    /// One entry per sample row: the owning realization index.
    pub realization_of: Vec<usize>,
    /// Raw received power per sample row.
    pub raw_power: Vec<f64>,
    /// Mean beam second-moment radius per screen depth, when requested.
    pub spot_stats: Option<Vec<(f64, f64)>>,
}

fn simulate_one(
    setup: &LinkSetup,
    config: &CampaignConfig,
    realization: usize,
    dump_dir: Option<&Path>,
) -> Result<RealizationOutput, CampaignError> {
    let wavenumber = setup.grid.wavenumber();
    let thickness = setup.layer_thickness;
    let mut screens = Vec::with_capacity(setup.plan.n_screens());
    for (p, (&depth, spectrum)) in
        setup.plan.screen_depths.iter().zip(&setup.spectra).enumerate()
    {
        let params = *spectrum;
        let psd =
            move |kappa: f64| phase_psd(kappa, wavenumber, thickness, &params).unwrap_or(0.0);
        let seed = screen_seed(config.seed, realization as u64, p as u64);
        let screen = generate_screen(&setup.grid, psd, seed, config.subharmonics, depth)?;
        if let Some(dir) = dump_dir {
            let path = dir.join(format!("screen_r{realization}_p{p}.bin"));
            write_grid_binary(&path, &screen.phase, screen.spacing).map_err(io_err(&path))?;
        }
        screens.push(screen);
    }
    let mut spot: Option<Vec<f64>> = if config.emit_spot_stats { Some(Vec::new()) } else { None };
    let mut dump_error: Option<CampaignError> = None;
    let field = propagate_link_observed(
        &setup.source,
        &setup.plan,
        &screens,
        LinkOptions { absorbing_window: true },
        |p, field| {
            if let Some(radii) = spot.as_mut() {
                radii.push(field.second_moment_radius());
            }
            if let Some(dir) = dump_dir {
                let path = dir.join(format!("intensity_r{realization}_p{p}.bin"));
                if let Err(e) = write_grid_binary(&path, &field.intensity(), field.spacing) {
                    dump_error.get_or_insert(CampaignError::Io { path, source: e });
                }
            }
        },
    )?;
    if let Some(e) = dump_error {
        return Err(e);
    }
    let rows = match config.sample_mode {
        SampleMode::AperturePower => {
            vec![receive(&field, &setup.receiver, realization)?.received_power]
        }
        SampleMode::PixelIntensity => receive_pixels(&field, &setup.receiver)?,
    };
    Ok(RealizationOutput { rows, spot })
}

/// Run every realization (concurrently up to `config.workers`) and aggregate
/// in realization order.
pub fn simulate(
    config: &CampaignConfig,
    dump_dir: Option<&Path>,
) -> Result<SimulationOutput, CampaignError> {
    let constants = match &config.constants {
        Some(path) => PhysicalConstants::from_path(path)?,
        None => PhysicalConstants::default(),
    };
    let profile = load_profile(&config.profile)?;
    let setup = prepare_link(config, &profile, &constants)?;

    let n = config.realizations;
    let results: Mutex<Vec<Option<RealizationOutput>>> =
        Mutex::new((0..n).map(|_| None).collect());
    let failure: Mutex<Option<CampaignError>> = Mutex::new(None);
    let next = AtomicUsize::new(0);
    let workers = config.workers.min(n).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let r = next.fetch_add(1, Ordering::Relaxed);
                if r >= n || failure.lock().unwrap().is_some() {
                    break;
                }
                // field dumps cover the first realization only
                let dumps = if r == 0 { dump_dir } else { None };
                match simulate_one(&setup, config, r, dumps) {
                    Ok(out) => results.lock().unwrap()[r] = Some(out),
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        break;
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }

    let mut realization_of = Vec::new();
    let mut raw_power = Vec::new();
    let mut spot_acc: Option<Vec<f64>> = None;
    let outputs = results.into_inner().unwrap();
    for (r, out) in outputs.into_iter().enumerate() {
        let out = out.ok_or_else(|| {
            CampaignError::Artifact(format!("realization {r} produced no output"))
        })?;
        for v in out.rows {
            realization_of.push(r);
            raw_power.push(v);
        }
        if let Some(radii) = out.spot {
            let acc = spot_acc.get_or_insert_with(|| vec![0.0; radii.len()]);
            for (a, v) in acc.iter_mut().zip(radii) {
                *a += v;
            }
        }
    }
    let spot_stats = spot_acc.map(|acc| {
        setup
            .plan
            .screen_depths
            .iter()
            .zip(acc)
            .map(|(&z, sum)| (z, sum / n as f64))
            .collect()
    });
    Ok(SimulationOutput { realization_of, raw_power, spot_stats })
}

// ---------------------------------------------------------------------------
// file-level stages
// ---------------------------------------------------------------------------

/// Removes the files it tracks unless defused; keeps failed stages from
/// leaving partial artifacts behind.
struct OutputGuard {
    files: Vec<PathBuf>,
    armed: bool,
}

impl OutputGuard {
    fn new() -> Self {
        Self { files: Vec::new(), armed: true }
    }

    fn track(&mut self, path: PathBuf) -> PathBuf {
        self.files.push(path.clone());
        path
    }

    fn defuse(&mut self) {
        self.armed = false;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if self.armed {
            for f in &self.files {
                let _ = std::fs::remove_file(f);
            }
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CampaignError> {
    std::fs::write(path, text).map_err(io_err(path))
}

/// File names of every artifact a campaign can produce.
pub mod artifact {
    pub const PLAN: &str = "plan.txt";
    pub const SAMPLES: &str = "samples.csv";
    pub const HISTOGRAM: &str = "histogram.csv";
    pub const FIT_REPORT: &str = "fit_report.txt";
    pub const GOF: &str = "gof.csv";
    pub const BER: &str = "ber_wgg.csv";
    pub const SPOT: &str = "spot_size.csv";
    pub const PROVENANCE: &str = "provenance.txt";
}

/// `plan` stage: constraint report for the configured link.
pub fn stage_plan(config: &CampaignConfig, out_dir: &Path) -> Result<PathBuf, CampaignError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let grid = GridSpec::new(
        config.n_points,
        config.delta1,
        config.delta2,
        config.wavelength,
        config.effective_source_extent(),
    )?;
    let plan = plan_screens(&grid, config.transmitter_depth, config.link_depth, config.n_screens)?;
    let mut guard = OutputGuard::new();
    let path = guard.track(out_dir.join(artifact::PLAN));
    write_text(&path, &plan.report(&grid))?;
    guard.defuse();
    Ok(path)
}

/// `simulate` stage: runs the wave-optics campaign and writes `samples.csv`
/// (plus optional spot statistics and first-realization field dumps).
pub fn stage_simulate(config: &CampaignConfig, out_dir: &Path) -> Result<PathBuf, CampaignError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut guard = OutputGuard::new();
    let dump_dir = if config.dump_fields { Some(out_dir) } else { None };
    let sim = simulate(config, dump_dir)?;
    let mean = sim.raw_power.iter().sum::<f64>() / sim.raw_power.len() as f64;
    let mut csv = String::from("realization,received_power,normalized_intensity\n");
    for (r, &p) in sim.realization_of.iter().zip(&sim.raw_power) {
        csv.push_str(&format!("{},{},{}\n", r, p, p / mean));
    }
    let path = guard.track(out_dir.join(artifact::SAMPLES));
    write_text(&path, &csv)?;
    if let Some(spot) = &sim.spot_stats {
        let mut s = String::from("depth_m,mean_rms_radius_m\n");
        for (z, w) in spot {
            s.push_str(&format!("{z},{w}\n"));
        }
        let spot_path = guard.track(out_dir.join(artifact::SPOT));
        write_text(&spot_path, &s)?;
    }
    guard.defuse();
    Ok(path)
}

/// Read samples back from `samples.csv` (raw power column).
pub fn read_samples(path: &Path) -> Result<SampleSet, CampaignError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let _realization = fields.next();
        let power: f64 = fields.next().and_then(|s| s.parse().ok()).ok_or_else(|| {
            CampaignError::Artifact(format!(
                "{}:{}: malformed sample row",
                path.display(),
                lineno + 1
            ))
        })?;
        raw.push(power);
    }
    Ok(SampleSet::from_raw(&raw)?)
}

/// `fit` stage: fit the configured families against `samples.csv`. With
/// fewer than 100 samples every record is flagged instead of fitted.
pub fn stage_fit(config: &CampaignConfig, out_dir: &Path) -> Result<FitReport, CampaignError> {
    let samples = read_samples(&out_dir.join(artifact::SAMPLES))?;
    let mut guard = OutputGuard::new();
    let report = if samples.len() < 100 {
        FitReport {
            records: config
                .models
                .iter()
                .map(|&family| {
                    FitRecord::failed(
                        family,
                        format!("insufficient data: {} samples, need 100", samples.len()),
                    )
                })
                .collect(),
        }
    } else {
        fit_all_families(&samples, &config.models)
    };
    let path = guard.track(out_dir.join(artifact::FIT_REPORT));
    write_text(&path, &report.to_text())?;
    // histogram artifact for downstream plotting
    let hist = Histogram::from_samples(&samples);
    let mut csv = String::from("bin_left,bin_right,density\n");
    for i in 0..hist.n_bins() {
        csv.push_str(&format!(
            "{},{},{}\n",
            hist.edges[i],
            hist.edges[i + 1],
            hist.densities[i]
        ));
    }
    let hist_path = guard.track(out_dir.join(artifact::HISTOGRAM));
    write_text(&hist_path, &csv)?;
    guard.defuse();
    Ok(report)
}

/// `gof` stage: extract the goodness-of-fit table from the fit report.
pub fn stage_gof(out_dir: &Path) -> Result<PathBuf, CampaignError> {
    let report_path = out_dir.join(artifact::FIT_REPORT);
    let text = std::fs::read_to_string(&report_path).map_err(io_err(&report_path))?;
    let report = FitReport::from_text(&text)?;
    let mut guard = OutputGuard::new();
    let mut csv = String::from("family,r_squared,mse\n");
    for r in &report.records {
        csv.push_str(&format!("{},{},{}\n", r.family.name(), r.r_squared, r.mse));
    }
    let path = guard.track(out_dir.join(artifact::GOF));
    write_text(&path, &csv)?;
    guard.defuse();
    Ok(path)
}

/// `ber` stage: average-BER curve from the fitted WGG record.
pub fn stage_ber(config: &CampaignConfig, out_dir: &Path) -> Result<BerCurve, CampaignError> {
    let report_path = out_dir.join(artifact::FIT_REPORT);
    let text = std::fs::read_to_string(&report_path).map_err(io_err(&report_path))?;
    let report = FitReport::from_text(&text)?;
    let record = report
        .get(Family::Wgg)
        .filter(|r| r.usable() && r.converged)
        .ok_or_else(|| {
            CampaignError::Artifact(format!(
                "{} has no converged WGG record; cannot evaluate BER",
                report_path.display()
            ))
        })?;
    let params = wgg_from_vec(&record.params)?;
    let curve = ber_curve(&params, config.snr.start_db, config.snr.stop_db, config.snr.step_db)?;
    let mut guard = OutputGuard::new();
    let path = guard.track(out_dir.join(artifact::BER));
    write_text(&path, &curve.to_csv())?;
    guard.defuse();
    Ok(curve)
}

/// Aggregated outcome of a full campaign.
pub struct CampaignResult {
    pub samples: SampleSet,
    pub histogram: Histogram,
    pub report: FitReport,
    /// Absent when the fit produced no converged WGG record.
    pub ber: Option<BerCurve>,
    pub provenance: String,
}

/// Full pipeline in one call; equivalent to running the stages in order on
/// the same output directory.
pub fn run_campaign(
    config: &CampaignConfig,
    out_dir: &Path,
) -> Result<CampaignResult, CampaignError> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut guard = OutputGuard::new();
    for name in [
        artifact::PLAN,
        artifact::SAMPLES,
        artifact::HISTOGRAM,
        artifact::FIT_REPORT,
        artifact::GOF,
        artifact::BER,
        artifact::SPOT,
        artifact::PROVENANCE,
    ] {
        guard.track(out_dir.join(name));
    }

    stage_plan(config, out_dir)?;
    stage_simulate(config, out_dir)?;
    let report = stage_fit(config, out_dir)?;
    stage_gof(out_dir)?;
    let wgg_ready =
        report.get(Family::Wgg).map(|r| r.usable() && r.converged).unwrap_or(false);
    let ber = if wgg_ready { Some(stage_ber(config, out_dir)?) } else { None };

    let samples = read_samples(&out_dir.join(artifact::SAMPLES))?;
    let histogram = Histogram::from_samples(&samples);
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let provenance = format!(
        "config_hash = {:016x}\nseed = {}\nversion = {}\nsample_count = {}\nber_emitted = {}\ntimestamp = {}\n",
        config.content_hash(),
        config.seed,
        env!("CARGO_PKG_VERSION"),
        samples.len(),
        ber.is_some(),
        timestamp
    );
    write_text(&out_dir.join(artifact::PROVENANCE), &provenance)?;
    guard.defuse();
    Ok(CampaignResult { samples, histogram, report, ber, provenance })
}
