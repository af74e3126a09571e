//! Sampling constraints and phase-screen placement.
//!
//! The grid geometry fixes a maximum step between screens (aliasing limit of
//! the propagation kernel's quadratic phase); from it follows the minimum
//! screen count for a link, and an equal-interval plan with screens at layer
//! centers.

use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum PlanError {
    #[error("grid dimension {0} must be a power of two >= 64")]
    BadGridSize(usize),
    #[error("non-positive grid parameter {name}: {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("source extent D1 = {d1} m exceeds grid span {span} m")]
    SourceTooLarge { d1: f64, span: f64 },
    #[error(
        "{requested} screens violate the sampling constraint: link depth {link_depth} m over \
         max spacing {max_spacing:.4} m requires at least {minimum} screens"
    )]
    TooFewScreens { requested: usize, minimum: usize, link_depth: f64, max_spacing: f64 },
    #[error("inconsistent plan: {0}")]
    Inconsistent(String),
}

/// Simulation grid geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Grid dimension per axis (power of two, >= 64).
    pub n_points: usize,
    /// Source-plane grid spacing (m).
    pub delta1: f64,
    /// Receiver-plane grid spacing (m).
    pub delta2: f64,
    /// Optical wavelength (m).
    pub wavelength: f64,
    /// Maximum spatial extent of the source field (m).
    pub source_extent: f64,
}

impl GridSpec {
    pub fn new(
        n_points: usize,
        delta1: f64,
        delta2: f64,
        wavelength: f64,
        source_extent: f64,
    ) -> Result<Self, PlanError> {
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(PlanError::BadGridSize(n_points));
        }
        for (name, v) in [
            ("delta1", delta1),
            ("delta2", delta2),
            ("wavelength", wavelength),
            ("source_extent", source_extent),
        ] {
            if v <= 0.0 {
                return Err(PlanError::NonPositive { name, value: v });
            }
        }
        if source_extent > n_points as f64 * delta1 {
            return Err(PlanError::SourceTooLarge {
                d1: source_extent,
                span: n_points as f64 * delta1,
            });
        }
        Ok(Self { n_points, delta1, delta2, wavelength, source_extent })
    }

    /// Physical side length of the grid at the source plane.
    pub fn span(&self) -> f64 {
        self.n_points as f64 * self.delta1
    }

    /// Optical wavenumber 2 pi / lambda.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }
}

/// Maximum allowed spacing between adjacent screens: N d1 d2 / lambda.
pub fn max_screen_spacing(grid: &GridSpec) -> f64 {
    grid.n_points as f64 * grid.delta1 * grid.delta2 / grid.wavelength
}

/// Receiver-spacing interval allowed by the quadratic-phase sampling bound:
/// (d1 - lambda dz / D1, d1 + lambda dz / D1), floored at zero.
pub fn magnification_bounds(delta1: f64, delta_d: f64, d1: f64, wavelength: f64) -> (f64, f64) {
    let half_width = wavelength * delta_d / d1;
    ((delta1 - half_width).max(0.0), delta1 + half_width)
}

/// Minimum number of screens for a link: ceil(d_L / delta_d_max), at least 1.
pub fn min_screens(link_depth: f64, delta_d_max: f64) -> usize {
    ((link_depth / delta_d_max).ceil() as usize).max(1)
}

/// Validated screen placement for one link.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationPlan {
    /// Absolute depths of the interior screens (m).
    pub screen_depths: Vec<f64>,
    /// Step lengths between consecutive planes, entry through exit (m).
    pub step_lengths: Vec<f64>,
    /// Per-step magnification delta_out/delta_in.
    pub magnifications: Vec<f64>,
    /// Transmitter depth (m).
    pub transmitter_depth: f64,
    /// Link depth between transceivers (m).
    pub link_depth: f64,
}

impl PropagationPlan {
    /// Receiver depth d_T + d_L.
    pub fn receiver_depth(&self) -> f64 {
        self.transmitter_depth + self.link_depth
    }

    pub fn n_screens(&self) -> usize {
        self.screen_depths.len()
    }

    /// Re-check the plan invariants (sum of steps, spacing bound, consistency).
    pub fn validate(&self, grid: &GridSpec) -> Result<(), PlanError> {
        let total: f64 = self.step_lengths.iter().sum();
        if (total - self.link_depth).abs() > 1e-9 * self.link_depth {
            return Err(PlanError::Inconsistent(format!(
                "steps sum to {total} m, link depth {} m",
                self.link_depth
            )));
        }
        let dmax = max_screen_spacing(grid);
        for &dd in &self.step_lengths {
            if dd > dmax * (1.0 + 1e-12) {
                return Err(PlanError::Inconsistent(format!(
                    "step {dd} m exceeds max spacing {dmax} m"
                )));
            }
        }
        if self.step_lengths.len() != self.screen_depths.len() + 1 {
            return Err(PlanError::Inconsistent(
                "need exactly one more step than screens".into(),
            ));
        }
        let m = grid.delta2 / grid.delta1;
        for &mp in &self.magnifications {
            if (mp - m).abs() > 1e-12 * m {
                return Err(PlanError::Inconsistent(format!(
                    "stored magnification {mp} inconsistent with spacings ratio {m}"
                )));
            }
        }
        Ok(())
    }

    /// Plain-text report used by the CLI `plan` stage.
    pub fn report(&self, grid: &GridSpec) -> String {
        let dmax = max_screen_spacing(grid);
        let nmin = min_screens(self.link_depth, dmax);
        let mut out = String::new();
        out.push_str("propagation plan\n");
        out.push_str(&format!(
            "  grid: N={} delta1={} m delta2={} m lambda={} m\n",
            grid.n_points, grid.delta1, grid.delta2, grid.wavelength
        ));
        out.push_str(&format!(
            "  transmitter depth: {} m, link depth: {} m, receiver depth: {} m\n",
            self.transmitter_depth,
            self.link_depth,
            self.receiver_depth()
        ));
        out.push_str(&format!("  max screen spacing: {dmax:.6} m\n"));
        out.push_str(&format!("  minimum screens: {nmin}\n"));
        out.push_str(&format!("  screens: {}\n", self.n_screens()));
        out.push_str(&format!(
            "  constraint margin: {:.6} m\n",
            dmax - self.step_lengths.iter().cloned().fold(0.0, f64::max)
        ));
        for (i, z) in self.screen_depths.iter().enumerate() {
            out.push_str(&format!("  screen {:>3}: depth {z:.6} m\n", i + 1));
        }
        out
    }
}

/// Equal-interval plan: n screens at layer centers d_T + (p - 1/2) d_L/n.
pub fn plan_screens(
    grid: &GridSpec,
    transmitter_depth: f64,
    link_depth: f64,
    n_screens: usize,
) -> Result<PropagationPlan, PlanError> {
    if link_depth <= 0.0 {
        return Err(PlanError::NonPositive { name: "link_depth", value: link_depth });
    }
    let dmax = max_screen_spacing(grid);
    let minimum = min_screens(link_depth, dmax);
    if n_screens < minimum {
        return Err(PlanError::TooFewScreens {
            requested: n_screens,
            minimum,
            link_depth,
            max_spacing: dmax,
        });
    }
    let delta_d = link_depth / n_screens as f64;
    let screen_depths: Vec<f64> = (1..=n_screens)
        .map(|p| transmitter_depth + (p as f64 - 0.5) * delta_d)
        .collect();
    // half step to the first screen, full steps between, half step out
    let mut step_lengths = Vec::with_capacity(n_screens + 1);
    step_lengths.push(delta_d / 2.0);
    for _ in 1..n_screens {
        step_lengths.push(delta_d);
    }
    step_lengths.push(delta_d / 2.0);
    let m = grid.delta2 / grid.delta1;
    let plan = PropagationPlan {
        magnifications: vec![m; step_lengths.len()],
        screen_depths,
        step_lengths,
        transmitter_depth,
        link_depth,
    };
    plan.validate(grid)?;
    Ok(plan)
}

impl fmt::Display for PropagationPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "plan: {} screens over d_L = {} m from d_T = {} m",
            self.n_screens(),
            self.link_depth,
            self.transmitter_depth
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_grid() -> GridSpec {
        GridSpec::new(1024, 0.25e-3, 0.25e-3, 532e-9, 0.12).unwrap()
    }

    #[test]
    fn max_spacing_reference_values() {
        // N d1 d2 / lambda with N=1024, d1=d2=0.25 mm, lambda=532 nm
        let grid = reference_grid();
        assert_relative_eq!(max_screen_spacing(&grid), 120.30, epsilon = 0.01);
        // halving lambda doubles the bound
        let half = GridSpec::new(1024, 0.25e-3, 0.25e-3, 266e-9, 0.12).unwrap();
        assert_relative_eq!(
            max_screen_spacing(&half) / max_screen_spacing(&grid),
            2.0,
            max_relative = 1e-12
        );
        // doubling delta2 doubles the bound
        let wide = GridSpec::new(1024, 0.25e-3, 0.5e-3, 532e-9, 0.12).unwrap();
        assert_relative_eq!(
            max_screen_spacing(&wide) / max_screen_spacing(&grid),
            2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn magnification_bounds_reference() {
        // d1 = 0.25 mm, lambda = 532 nm, dz = 10 m, D1 = 0.12 m -> half width 44.33 um
        let (lo, hi) = magnification_bounds(0.25e-3, 10.0, 0.12, 532e-9);
        let half_width = 532e-9 * 10.0 / 0.12;
        assert_relative_eq!(half_width, 44.33e-6, max_relative = 1e-3);
        assert_relative_eq!(hi - lo, 2.0 * half_width, max_relative = 1e-12);
        // interval is centered on delta1
        assert_relative_eq!(0.5 * (hi + lo), 0.25e-3, max_relative = 1e-12);
        // floor at zero when the half width exceeds delta1
        let (lo, _) = magnification_bounds(1e-6, 10.0, 0.12, 532e-9);
        assert_eq!(lo, 0.0);
    }

    #[test]
    fn min_screens_ceiling() {
        assert_eq!(min_screens(70.0, 120.30), 1);
        assert_eq!(min_screens(120.30, 120.30), 1);
        assert_eq!(min_screens(2.5 * 120.30, 120.30), 3);
    }

    #[test]
    fn equal_interval_center_placement() {
        let grid = reference_grid();
        let plan = plan_screens(&grid, 20.0, 70.0, 10).unwrap();
        assert_eq!(plan.n_screens(), 10);
        assert_relative_eq!(plan.step_lengths[1], 7.0, epsilon = 1e-12);
        assert_relative_eq!(plan.screen_depths[0], 23.5, epsilon = 1e-12);
        assert_relative_eq!(plan.screen_depths[9], 86.5, epsilon = 1e-12);
        assert_relative_eq!(plan.receiver_depth(), 90.0, epsilon = 1e-12);
        // half steps at the ends
        assert_relative_eq!(plan.step_lengths[0], 3.5, epsilon = 1e-12);
        assert_relative_eq!(*plan.step_lengths.last().unwrap(), 3.5, epsilon = 1e-12);
        plan.validate(&grid).unwrap();
    }

    #[test]
    fn single_screen_at_midpoint() {
        let grid = reference_grid();
        let plan = plan_screens(&grid, 20.0, 70.0, 1).unwrap();
        assert_eq!(plan.n_screens(), 1);
        assert_relative_eq!(plan.screen_depths[0], 55.0, epsilon = 1e-12);
    }

    #[test]
    fn too_few_screens_is_rejected() {
        let grid = reference_grid();
        // a 500 m link needs ceil(500/120.3) = 5 screens
        match plan_screens(&grid, 0.0, 500.0, 2).unwrap_err() {
            PlanError::TooFewScreens { minimum, requested, .. } => {
                assert_eq!(minimum, 5);
                assert_eq!(requested, 2);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn plan_is_deterministic() {
        let grid = reference_grid();
        let a = plan_screens(&grid, 20.0, 70.0, 10).unwrap();
        let b = plan_screens(&grid, 20.0, 70.0, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(100, 1e-3, 1e-3, 532e-9, 0.01).is_err()); // not power of two
        assert!(GridSpec::new(32, 1e-3, 1e-3, 532e-9, 0.01).is_err()); // too small
        assert!(GridSpec::new(256, -1e-3, 1e-3, 532e-9, 0.01).is_err());
        assert!(GridSpec::new(256, 1e-3, 1e-3, 532e-9, 10.0).is_err()); // D1 > span
    }

    #[test]
    fn report_contains_key_numbers() {
        let grid = reference_grid();
        let plan = plan_screens(&grid, 20.0, 70.0, 10).unwrap();
        let report = plan.report(&grid);
        assert!(report.contains("max screen spacing: 120.30"));
        assert!(report.contains("minimum screens: 1"));
    }
}
