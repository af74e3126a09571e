//! Campaign configuration: flat key=value text with keys named after the
//! simulation symbols (N, delta1, lambda, w0, Da, dT, dL, Np, epsilon, KT,
//! beta0, ...). Unknown keys are rejected so typos cannot silently fall back
//! to defaults.

use crate::fading::Family;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected `key = value`, found {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue { line: usize, key: String, value: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("missing required key {0:?}")]
    Missing(&'static str),
    #[error("invalid {field}: {message}")]
    Invalid { field: &'static str, message: String },
}

/// How intensity samples are collected at the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleMode {
    /// One aperture-integrated power sample per realization.
    #[default]
    AperturePower,
    /// Every grid pixel inside the aperture contributes one sample.
    PixelIntensity,
}

impl SampleMode {
    pub fn name(&self) -> &'static str {
        match self {
            SampleMode::AperturePower => "aperture_power",
            SampleMode::PixelIntensity => "pixel_intensity",
        }
    }
}

/// SNR sweep in dB: start:stop:step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSweep {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for SnrSweep {
    fn default() -> Self {
        Self { start_db: 0.0, stop_db: 50.0, step_db: 1.0 }
    }
}

impl SnrSweep {
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = s.split(':');
        let start_db: f64 = parts.next()?.trim().parse().ok()?;
        let stop_db: f64 = parts.next()?.trim().parse().ok()?;
        let step_db: f64 = parts.next()?.trim().parse().ok()?;
        if parts.next().is_some() || step_db <= 0.0 || start_db >= stop_db {
            return None;
        }
        Some(Self { start_db, stop_db, step_db })
    }
}

/// Full campaign description.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub profile: PathBuf,
    pub n_points: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub wavelength: f64,
    pub w0: f64,
    pub aperture: f64,
    pub transmitter_depth: f64,
    pub link_depth: f64,
    pub n_screens: usize,
    pub epsilon: f64,
    pub k_t: f64,
    pub beta0: f64,
    pub realizations: usize,
    pub seed: u64,
    pub subharmonics: usize,
    pub workers: usize,
    /// Source extent D1; defaults to 4 w0 when absent.
    pub source_extent: Option<f64>,
    pub sample_mode: SampleMode,
    pub snr: SnrSweep,
    /// Families to fit; defaults to the full zoo.
    pub models: Vec<Family>,
    /// Optional external physical-constants table.
    pub constants: Option<PathBuf>,
    /// Dump first-realization screens and intensity slices as binary grids.
    pub dump_fields: bool,
    /// Emit the per-depth beam second-moment statistic.
    pub emit_spot_stats: bool,
}

impl CampaignConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let mut config = Self::parse(&text)?;
        // profile paths are relative to the config file location
        if config.profile.is_relative() {
            if let Some(dir) = path.parent() {
                config.profile = dir.join(&config.profile);
            }
        }
        if let Some(c) = &config.constants {
            if c.is_relative() {
                if let Some(dir) = path.parent() {
                    config.constants = Some(dir.join(c));
                }
            }
        }
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut profile = None;
        let mut n_points = None;
        let mut delta1 = None;
        let mut delta2 = None;
        let mut wavelength = None;
        let mut w0 = None;
        let mut aperture = None;
        let mut transmitter_depth = None;
        let mut link_depth = None;
        let mut n_screens = None;
        let mut epsilon = None;
        let mut k_t = None;
        let mut beta0 = 0.72;
        let mut realizations = None;
        let mut seed = 1u64;
        let mut subharmonics = 3usize;
        let mut workers = 1usize;
        let mut source_extent = None;
        let mut sample_mode = SampleMode::default();
        let mut snr = SnrSweep::default();
        let mut models: Vec<Family> = Family::ALL.to_vec();
        let mut constants = None;
        let mut dump_fields = false;
        let mut emit_spot_stats = false;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed { line: lineno + 1, content: raw.into() });
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |k: &str, v: &str| ConfigError::BadValue {
                line: lineno + 1,
                key: k.into(),
                value: v.into(),
            };
            let f = |v: &str, k: &str| -> Result<f64, ConfigError> {
                v.parse().map_err(|_| bad(k, v))
            };
            match key {
                "profile" => profile = Some(PathBuf::from(value)),
                "N" => n_points = Some(value.parse().map_err(|_| bad(key, value))?),
                "delta1" => delta1 = Some(f(value, key)?),
                "delta2" => delta2 = Some(f(value, key)?),
                "lambda" => wavelength = Some(f(value, key)?),
                "w0" => w0 = Some(f(value, key)?),
                "Da" => aperture = Some(f(value, key)?),
                "dT" => transmitter_depth = Some(f(value, key)?),
                "dL" => link_depth = Some(f(value, key)?),
                "Np" => n_screens = Some(value.parse().map_err(|_| bad(key, value))?),
                "epsilon" => epsilon = Some(f(value, key)?),
                "KT" => k_t = Some(f(value, key)?),
                "beta0" => beta0 = f(value, key)?,
                "realizations" => {
                    realizations = Some(value.parse().map_err(|_| bad(key, value))?)
                }
                "seed" => seed = value.parse().map_err(|_| bad(key, value))?,
                "subharmonics" => subharmonics = value.parse().map_err(|_| bad(key, value))?,
                "workers" => workers = value.parse().map_err(|_| bad(key, value))?,
                "D1" => source_extent = Some(f(value, key)?),
                "sample_mode" => {
                    sample_mode = match value {
                        "aperture_power" => SampleMode::AperturePower,
                        "pixel_intensity" => SampleMode::PixelIntensity,
                        _ => return Err(bad(key, value)),
                    }
                }
                "snr_db" => snr = SnrSweep::parse(value).ok_or_else(|| bad(key, value))?,
                "models" => {
                    if value == "all" {
                        models = Family::ALL.to_vec();
                    } else {
                        models = value
                            .split(',')
                            .map(|name| {
                                Family::from_name(name.trim()).ok_or_else(|| bad(key, name))
                            })
                            .collect::<Result<_, _>>()?;
                    }
                }
                "constants" => constants = Some(PathBuf::from(value)),
                "dump_fields" => dump_fields = value.parse().map_err(|_| bad(key, value))?,
                "emit_spot_stats" => {
                    emit_spot_stats = value.parse().map_err(|_| bad(key, value))?
                }
                _ => return Err(ConfigError::UnknownKey { line: lineno + 1, key: key.into() }),
            }
        }

        let config = Self {
            profile: profile.ok_or(ConfigError::Missing("profile"))?,
            n_points: n_points.ok_or(ConfigError::Missing("N"))?,
            delta1: delta1.ok_or(ConfigError::Missing("delta1"))?,
            delta2: delta2.unwrap_or(delta1.unwrap()),
            wavelength: wavelength.ok_or(ConfigError::Missing("lambda"))?,
            w0: w0.ok_or(ConfigError::Missing("w0"))?,
            aperture: aperture.ok_or(ConfigError::Missing("Da"))?,
            transmitter_depth: transmitter_depth.ok_or(ConfigError::Missing("dT"))?,
            link_depth: link_depth.ok_or(ConfigError::Missing("dL"))?,
            n_screens: n_screens.ok_or(ConfigError::Missing("Np"))?,
            epsilon: epsilon.ok_or(ConfigError::Missing("epsilon"))?,
            k_t: k_t.ok_or(ConfigError::Missing("KT"))?,
            beta0,
            realizations: realizations.ok_or(ConfigError::Missing("realizations"))?,
            seed,
            subharmonics,
            workers: workers.max(1),
            source_extent,
            sample_mode,
            snr,
            models,
            constants,
            dump_fields,
            emit_spot_stats,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("lambda", self.wavelength),
            ("w0", self.w0),
            ("Da", self.aperture),
            ("dL", self.link_depth),
            ("epsilon", self.epsilon),
            ("KT", self.k_t),
            ("beta0", self.beta0),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid {
                    field: "config",
                    message: format!("{field} must be positive, got {v}"),
                });
            }
        }
        if self.transmitter_depth < 0.0 {
            return Err(ConfigError::Invalid {
                field: "dT",
                message: "transmitter depth cannot be negative".into(),
            });
        }
        if self.realizations < 1 {
            return Err(ConfigError::Invalid {
                field: "realizations",
                message: "need at least 1 realization".into(),
            });
        }
        if self.n_screens < 1 {
            return Err(ConfigError::Invalid {
                field: "Np",
                message: "need at least 1 screen".into(),
            });
        }
        Ok(())
    }

    /// Effective source extent: D1 or the 4 w0 default.
    pub fn effective_source_extent(&self) -> f64 {
        self.source_extent.unwrap_or(4.0 * self.w0)
    }

    /// Canonical serialization (stable key order) used for hashing and the
    /// provenance block.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "profile = {}", self.profile.display());
        let _ = writeln!(s, "N = {}", self.n_points);
        let _ = writeln!(s, "delta1 = {}", self.delta1);
        let _ = writeln!(s, "delta2 = {}", self.delta2);
        let _ = writeln!(s, "lambda = {}", self.wavelength);
        let _ = writeln!(s, "w0 = {}", self.w0);
        let _ = writeln!(s, "Da = {}", self.aperture);
        let _ = writeln!(s, "dT = {}", self.transmitter_depth);
        let _ = writeln!(s, "dL = {}", self.link_depth);
        let _ = writeln!(s, "Np = {}", self.n_screens);
        let _ = writeln!(s, "epsilon = {}", self.epsilon);
        let _ = writeln!(s, "KT = {}", self.k_t);
        let _ = writeln!(s, "beta0 = {}", self.beta0);
        let _ = writeln!(s, "realizations = {}", self.realizations);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "subharmonics = {}", self.subharmonics);
        let _ = writeln!(s, "D1 = {}", self.effective_source_extent());
        let _ = writeln!(s, "sample_mode = {}", self.sample_mode.name());
        let _ = writeln!(
            s,
            "snr_db = {}:{}:{}",
            self.snr.start_db, self.snr.stop_db, self.snr.step_db
        );
        let _ = writeln!(
            s,
            "models = {}",
            self.models.iter().map(|m| m.name()).collect::<Vec<_>>().join(",")
        );
        s
    }

    /// FNV-1a hash of the canonical text; workers and output paths do not
    /// participate (they cannot change results).
    pub fn content_hash(&self) -> u64 {
        let mut hash = 0xcbf2_9ce4_8422_2325u64;
        for byte in self.canonical_text().bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
        }
        hash
    }
}
