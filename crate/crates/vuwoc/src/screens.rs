//! Random phase screen synthesis from a phase PSD.
//!
//! FFT power-spectrum inversion with low-frequency subharmonic compensation:
//! each FFT bin gets an independent complex Gaussian weighted by
//! sqrt(F_phi(kappa)) * dkappa, the unnormalized inverse transform is taken
//! and the real part kept (the imaginary part would be an independent screen;
//! it is discarded). Each subharmonic level adds a 3x3 patch of modes at
//! frequencies scaled by 3^-level covering the DC cell of the level above.
//! The DC bin itself carries no power and the grid mean (piston) is removed.
//!
//! With per-component unit-variance draws (E|h|^2 = 2) the ensemble variance
//! of the synthesized screen reproduces the discrete spectral integral
//! sum F_phi(kappa) dkappa^2 over all carried modes.

use crate::numerics::fft2::{freq_index, ifft2_unnormalized};
use crate::planner::GridSpec;
use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum ScreenError {
    #[error("need at least 2 screens, got {0}")]
    TooFewScreens(usize),
    #[error("screen geometry mismatch: {0}")]
    GeometryMismatch(String),
    #[error("phase PSD returned a non-finite value at kappa = {0}")]
    NonFinitePsd(f64),
}

/// One synthesized phase screen.
#[derive(Debug, Clone)]
pub struct PhaseScreen {
    /// Phase grid (radians), mean-free.
    pub phase: Array2<f64>,
    /// Grid spacing (m).
    pub spacing: f64,
    /// Absolute depth of the screen (m).
    pub depth: f64,
    /// Seed used to generate this screen (reproducibility token).
    pub seed_tag: u64,
}

impl PhaseScreen {
    pub fn n(&self) -> usize {
        self.phase.nrows()
    }

    fn same_geometry(&self, other: &PhaseScreen) -> bool {
        self.n() == other.n() && self.spacing == other.spacing
    }
}

/// Synthesize one screen at `depth` from the radial phase PSD `psd` (m^2 as a
/// function of kappa in rad/m). Negative PSD values are clamped to zero
/// before the square root; the DC bin is zero by construction.
pub fn generate_screen<F: Fn(f64) -> f64>(
    grid: &GridSpec,
    psd: F,
    seed: u64,
    n_subharmonic_levels: usize,
    depth: f64,
) -> Result<PhaseScreen, ScreenError> {
    let n = grid.n_points;
    let delta = grid.delta1;
    let dkappa = 2.0 * PI / (n as f64 * delta);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = StandardNormal;

    // FFT-grid term
    let mut coeffs: Array2<Complex64> = Array2::zeros((n, n));
    for u in 0..n {
        for v in 0..n {
            // fixed draw order keeps screens bit-identical for a given seed
            let re: f64 = normal.sample(&mut rng);
            let im: f64 = normal.sample(&mut rng);
            let kx = dkappa * freq_index(u, n) as f64;
            let ky = dkappa * freq_index(v, n) as f64;
            let kappa = (kx * kx + ky * ky).sqrt();
            if kappa == 0.0 {
                continue; // DC carries no power
            }
            let f = psd(kappa);
            if !f.is_finite() {
                return Err(ScreenError::NonFinitePsd(kappa));
            }
            let scale = f.max(0.0).sqrt() * dkappa;
            coeffs[[u, v]] = Complex64::new(re, im) * scale;
        }
    }
    ifft2_unnormalized(&mut coeffs);
    let mut phase = coeffs.mapv(|c| c.re);

    // subharmonic patches: 3x3 modes at dkappa / 3^level
    for level in 1..=n_subharmonic_levels {
        let dk_l = dkappa / 3f64.powi(level as i32);
        for iu in -1i64..=1 {
            for iv in -1i64..=1 {
                let re: f64 = normal.sample(&mut rng);
                let im: f64 = normal.sample(&mut rng);
                if iu == 0 && iv == 0 {
                    continue; // refined by the next level; final DC is piston
                }
                let kx = dk_l * iu as f64;
                let ky = dk_l * iv as f64;
                let kappa = (kx * kx + ky * ky).sqrt();
                let f = psd(kappa);
                if !f.is_finite() {
                    return Err(ScreenError::NonFinitePsd(kappa));
                }
                let c = Complex64::new(re, im) * (f.max(0.0).sqrt() * dk_l);
                // separable kernel exp[i 2 pi (u' u + v' v) / (3^l N)]
                let step = 2.0 * PI / (3f64.powi(level as i32) * n as f64);
                let row: Vec<Complex64> = (0..n)
                    .map(|u| c * Complex64::from_polar(1.0, step * iu as f64 * u as f64))
                    .collect();
                let col: Vec<Complex64> = (0..n)
                    .map(|v| Complex64::from_polar(1.0, step * iv as f64 * v as f64))
                    .collect();
                for u in 0..n {
                    let r = row[u];
                    for v in 0..n {
                        phase[[u, v]] += (r * col[v]).re;
                    }
                }
            }
        }
    }

    // piston removal
    let mean = phase.sum() / (n * n) as f64;
    phase.mapv_inplace(|p| p - mean);

    Ok(PhaseScreen { phase, spacing: delta, depth, seed_tag: seed })
}

/// Ensemble statistics over a set of screens of identical geometry.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleStats {
    /// Grand mean over all pixels and screens (rad).
    pub mean: f64,
    /// Pooled unbiased ensemble variance: pixelwise mean across screens is
    /// removed, residuals pooled over pixels, Bessel-corrected in the
    /// ensemble dimension (rad^2). Identical screens give exactly zero.
    pub variance: f64,
}

/// Grand mean and pooled pixelwise ensemble variance.
pub fn screen_ensemble_stats(screens: &[PhaseScreen]) -> Result<EnsembleStats, ScreenError> {
    if screens.len() < 2 {
        return Err(ScreenError::TooFewScreens(screens.len()));
    }
    for s in screens.iter().skip(1) {
        if !s.same_geometry(&screens[0]) {
            return Err(ScreenError::GeometryMismatch(format!(
                "screen of size {} spacing {} vs {} spacing {}",
                s.n(),
                s.spacing,
                screens[0].n(),
                screens[0].spacing
            )));
        }
    }
    let m = screens.len();
    let n = screens[0].n();
    let count = (m * n * n) as f64;
    let mean: f64 = screens.iter().map(|s| s.phase.sum()).sum::<f64>() / count;
    // pixelwise ensemble mean
    let mut pixel_mean: Array2<f64> = Array2::zeros((n, n));
    for s in screens {
        pixel_mean += &s.phase;
    }
    pixel_mean.mapv_inplace(|v| v / m as f64);
    let mut ss = 0.0;
    for s in screens {
        for (p, pm) in s.phase.iter().zip(pixel_mean.iter()) {
            let d = p - pm;
            ss += d * d;
        }
    }
    let variance = ss / ((n * n) as f64 * (m as f64 - 1.0));
    Ok(EnsembleStats { mean, variance })
}

/// Structure function D(lag) = <[phi(x + lag) - phi(x)]^2> at an integer pixel
/// lag, averaged over both axes, positions and screens (rad^2).
pub fn structure_function(screens: &[PhaseScreen], lag: usize) -> Result<f64, ScreenError> {
    if screens.len() < 2 {
        return Err(ScreenError::TooFewScreens(screens.len()));
    }
    let n = screens[0].n();
    if lag == 0 || lag >= n {
        return Err(ScreenError::GeometryMismatch(format!("lag {lag} out of range for N={n}")));
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for s in screens {
        if !s.same_geometry(&screens[0]) {
            return Err(ScreenError::GeometryMismatch("mixed geometries".into()));
        }
        let p = &s.phase;
        for u in 0..n {
            for v in 0..(n - lag) {
                let dx = p[[u, v + lag]] - p[[u, v]];
                acc += dx * dx;
                let dy = p[[v + lag, u]] - p[[v, u]];
                acc += dy * dy;
                count += 2;
            }
        }
    }
    Ok(acc / count as f64)
}

/// Binary grid dump: 16-byte header (magic `VOS1`, N as u32 LE, spacing as
/// f64 LE) followed by N*N row-major little-endian f64 values. Shared by the
/// screen dumps and the intensity-slice dumps.
pub fn write_grid_binary(
    path: &std::path::Path,
    grid: &Array2<f64>,
    spacing: f64,
) -> std::io::Result<()> {
    use std::io::Write;
    let n = grid.nrows() as u32;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(b"VOS1")?;
    out.write_all(&n.to_le_bytes())?;
    out.write_all(&spacing.to_le_bytes())?;
    for v in grid.iter() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()
}

/// Read a grid written by `write_grid_binary`.
pub fn read_grid_binary(path: &std::path::Path) -> std::io::Result<(Array2<f64>, f64)> {
    use std::io::Read;
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut header = [0u8; 16];
    file.read_exact(&mut header)?;
    if &header[0..4] != b"VOS1" {
        return Err(std::io::Error::new(std::io::ErrorKind::InvalidData, "bad magic"));
    }
    let n = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let spacing = f64::from_le_bytes(header[8..16].try_into().unwrap());
    let mut buf = vec![0u8; n * n * 8];
    file.read_exact(&mut buf)?;
    let values: Vec<f64> =
        buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let grid = Array2::from_shape_vec((n, n), values)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
    Ok((grid, spacing))
}

/// Mean-square spatial average of the kernel exp(i 2 pi j u / (3^level N))
/// over u = 0..N: the piston fraction retained by a subharmonic mode.
/// Used by variance oracles accounting for mean removal.
pub fn subharmonic_mean_kernel(j: i64, level: usize, n: usize) -> Complex64 {
    if j == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let theta = 2.0 * PI * j as f64 / (3f64.powi(level as i32) * n as f64);
    // (1/N) sum_{u=0}^{N-1} e^{i theta u}
    let num = Complex64::from_polar(1.0, theta * n as f64) - 1.0;
    let den = Complex64::from_polar(1.0, theta) - 1.0;
    num / den / n as f64
}
