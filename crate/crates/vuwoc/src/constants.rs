//! Physical-fit constants for seawater thermodynamics and optics.
//!
//! Every numerical coefficient used by the environment layer lives in
//! `data/seawater_constants.txt` (embedded as the default set) so the fits
//! can be recalibrated without touching code. Formulas:
//!
//! - density: UNESCO EOS-80 polynomial with the secant-bulk-modulus pressure
//!   correction (p in bar, roughly 0.1 bar per metre of depth);
//! - dynamic viscosity: pure-water rational fit plus a quadratic salinity
//!   factor;
//! - molecular diffusivities of heat and salt: low-order polynomial fits;
//! - refractive index n(T, S, lambda): the Quan & Fry empirical fit, whose
//!   partial derivatives provide the linear coefficients used by the
//!   refractive-index spectrum.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

const DEFAULT_TABLE: &str = include_str!("../data/seawater_constants.txt");

/// Error while reading a constants table.
#[derive(Debug, thiserror::Error)]
pub enum ConstantsError {
    #[error("line {line}: expected `key = value`, found {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: could not parse value for {key:?}")]
    BadValue { line: usize, key: String },
    #[error("missing required key {0:?}")]
    Missing(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Parsed coefficient table. See the module docs for the formula shapes.
#[derive(Debug, Clone)]
pub struct PhysicalConstants {
    pub eos80_rho_w: [f64; 6],
    pub eos80_a: [f64; 5],
    pub eos80_b: [f64; 3],
    pub eos80_c: f64,
    pub eos80_kw: [f64; 5],
    pub eos80_ks: [f64; 4],
    pub eos80_kss: [f64; 3],
    pub eos80_aw: [f64; 4],
    pub eos80_as: [f64; 3],
    pub eos80_ass: f64,
    pub eos80_bw: [f64; 3],
    pub eos80_bs: [f64; 3],
    pub visc: [f64; 4],
    pub visc_a: [f64; 3],
    pub visc_b: [f64; 3],
    pub diff_heat: [f64; 2],
    pub diff_salt: [f64; 3],
    pub quanfry: [f64; 10],
    /// Oboukhov-Corrsin constant beta_0 (dimensionless, default 0.72).
    pub beta0: f64,
    /// Leading coefficient of the c_q chain: c_q = c^{4/3} beta_0 / Pr_q.
    pub spectrum_c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::parse(DEFAULT_TABLE).expect("embedded constants table must parse")
    }
}

impl PhysicalConstants {
    /// Load a table from a file with the same key=value layout as the default.
    pub fn from_path(path: &Path) -> Result<Self, ConstantsError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parse a key=value table.
    pub fn parse(text: &str) -> Result<Self, ConstantsError> {
        let mut map: HashMap<String, f64> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConstantsError::Malformed {
                    line: lineno + 1,
                    content: raw.to_string(),
                });
            };
            let key = key.trim().to_string();
            let value: f64 = value.trim().parse().map_err(|_| ConstantsError::BadValue {
                line: lineno + 1,
                key: key.clone(),
            })?;
            map.insert(key, value);
        }
        let get = |k: &str| -> Result<f64, ConstantsError> {
            map.get(k).copied().ok_or_else(|| ConstantsError::Missing(k.to_string()))
        };
        macro_rules! arr {
            ($prefix:expr, $n:expr) => {{
                let mut out = [0.0; $n];
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = get(&format!("{}.{}", $prefix, i))?;
                }
                out
            }};
        }
        Ok(Self {
            eos80_rho_w: arr!("eos80.rho_w", 6),
            eos80_a: arr!("eos80.a", 5),
            eos80_b: arr!("eos80.b", 3),
            eos80_c: get("eos80.c")?,
            eos80_kw: arr!("eos80.kw", 5),
            eos80_ks: arr!("eos80.ks", 4),
            eos80_kss: arr!("eos80.kss", 3),
            eos80_aw: arr!("eos80.aw", 4),
            eos80_as: arr!("eos80.as", 3),
            eos80_ass: get("eos80.ass")?,
            eos80_bw: arr!("eos80.bw", 3),
            eos80_bs: arr!("eos80.bs", 3),
            visc: [
                get("viscosity.c0")?,
                get("viscosity.c1")?,
                get("viscosity.c2")?,
                get("viscosity.c3")?,
            ],
            visc_a: arr!("viscosity.a", 3),
            visc_b: arr!("viscosity.b", 3),
            diff_heat: arr!("diffusivity.heat", 2),
            diff_salt: arr!("diffusivity.salt", 3),
            quanfry: arr!("quanfry", 10),
            beta0: get("spectrum.beta0")?,
            spectrum_c: get("spectrum.c")?,
        })
    }

    fn poly(coefs: &[f64], x: f64) -> f64 {
        coefs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Seawater density (kg/m^3) at temperature T (degC), salinity S (ppt)
    /// and pressure p (bar, gauge).
    pub fn density(&self, t: f64, s: f64, p_bar: f64) -> f64 {
        let rho0 = Self::poly(&self.eos80_rho_w, t)
            + Self::poly(&self.eos80_a, t) * s
            + Self::poly(&self.eos80_b, t) * s.powf(1.5)
            + self.eos80_c * s * s;
        if p_bar <= 0.0 {
            return rho0;
        }
        let kw = Self::poly(&self.eos80_kw, t);
        let k0 = kw
            + Self::poly(&self.eos80_ks, t) * s
            + Self::poly(&self.eos80_kss, t) * s.powf(1.5);
        let a = Self::poly(&self.eos80_aw, t)
            + Self::poly(&self.eos80_as, t) * s
            + self.eos80_ass * s.powf(1.5);
        let b = Self::poly(&self.eos80_bw, t) + Self::poly(&self.eos80_bs, t) * s;
        let k = k0 + a * p_bar + b * p_bar * p_bar;
        rho0 / (1.0 - p_bar / k)
    }

    /// Thermal expansion coefficient alpha_c = -(1/rho) d rho/dT (1/K),
    /// central difference on the density fit.
    pub fn thermal_expansion(&self, t: f64, s: f64, p_bar: f64) -> f64 {
        const DT: f64 = 1e-3;
        let hi = self.density(t + DT, s, p_bar);
        let lo = self.density(t - DT, s, p_bar);
        let rho = self.density(t, s, p_bar);
        -(hi - lo) / (2.0 * DT * rho)
    }

    /// Saline contraction coefficient beta_c = (1/rho) d rho/dS (1/ppt).
    pub fn haline_contraction(&self, t: f64, s: f64, p_bar: f64) -> f64 {
        const DS: f64 = 1e-3;
        let hi = self.density(t, s + DS, p_bar);
        let lo = self.density(t, (s - DS).max(0.0), p_bar);
        let rho = self.density(t, s, p_bar);
        (hi - lo) / ((s + DS - (s - DS).max(0.0)) * rho)
    }

    /// Dynamic viscosity of seawater (Pa s).
    pub fn dynamic_viscosity(&self, t: f64, s: f64) -> f64 {
        let mu_w = self.visc[0] + 1.0 / (self.visc[1] * (t + self.visc[2]).powi(2) - self.visc[3]);
        let s_kg = s / 1000.0;
        let a = Self::poly(&self.visc_a, t);
        let b = Self::poly(&self.visc_b, t);
        mu_w * (1.0 + a * s_kg + b * s_kg * s_kg)
    }

    /// Kinematic viscosity nu (m^2/s) at surface pressure.
    pub fn kinematic_viscosity(&self, t: f64, s: f64) -> f64 {
        self.dynamic_viscosity(t, s) / self.density(t, s, 0.0)
    }

    /// Molecular diffusivity of heat (m^2/s).
    pub fn heat_diffusivity(&self, t: f64) -> f64 {
        self.diff_heat[0] + self.diff_heat[1] * t
    }

    /// Molecular diffusivity of salt (m^2/s).
    pub fn salt_diffusivity(&self, t: f64) -> f64 {
        self.diff_salt[0] * (1.0 + self.diff_salt[1] * t + self.diff_salt[2] * t * t)
    }

    /// Refractive index n(T degC, S ppt, lambda m) per the Quan & Fry fit.
    pub fn refractive_index(&self, t: f64, s: f64, wavelength: f64) -> f64 {
        let n = &self.quanfry;
        let lam = wavelength * 1e9; // fit is in nm
        n[0] + (n[1] + n[2] * t + n[3] * t * t) * s
            + n[4] * t * t
            + (n[5] + n[6] * s + n[7] * t) / lam
            + n[8] / (lam * lam)
            + n[9] / (lam * lam * lam)
    }

    /// dn/dT (1/K) at fixed salinity: the temperature linear coefficient A.
    pub fn dn_dt(&self, t: f64, s: f64, wavelength: f64) -> f64 {
        let n = &self.quanfry;
        let lam = wavelength * 1e9;
        (n[2] + 2.0 * n[3] * t) * s + 2.0 * n[4] * t + n[7] / lam
    }

    /// dn/dS (1/ppt) at fixed temperature: the salinity linear coefficient B.
    pub fn dn_ds(&self, t: f64, _s: f64, wavelength: f64) -> f64 {
        let n = &self.quanfry;
        let lam = wavelength * 1e9;
        n[1] + n[2] * t + n[3] * t * t + n[6] / lam
    }
}

impl fmt::Display for PhysicalConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhysicalConstants(beta0={}, c={})", self.beta0, self.spectrum_c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_table_parses() {
        let c = PhysicalConstants::default();
        assert_eq!(c.beta0, 0.72);
    }

    #[test]
    fn eos80_check_values() {
        // UNESCO (1983) check values for the one-atmosphere polynomial
        let c = PhysicalConstants::default();
        assert_relative_eq!(c.density(5.0, 0.0, 0.0), 999.96675, epsilon = 5e-4);
        assert_relative_eq!(c.density(5.0, 35.0, 0.0), 1027.67547, epsilon = 5e-4);
        assert_relative_eq!(c.density(25.0, 35.0, 0.0), 1023.34306, epsilon = 5e-4);
        // density grows with depth via the bulk modulus
        let shallow = c.density(10.0, 35.0, 0.0);
        let deep = c.density(10.0, 35.0, 100.0);
        assert!(deep > shallow + 0.3);
    }

    #[test]
    fn expansion_and_contraction_signs() {
        let c = PhysicalConstants::default();
        // representative mid-latitude values
        let alpha = c.thermal_expansion(10.0, 35.0, 0.0);
        let beta = c.haline_contraction(10.0, 35.0, 0.0);
        assert!(alpha > 1.2e-4 && alpha < 2.2e-4, "alpha = {alpha}");
        assert!(beta > 7.0e-4 && beta < 8.3e-4, "beta = {beta}");
        // alpha grows with temperature
        assert!(c.thermal_expansion(25.0, 35.0, 0.0) > alpha);
    }

    #[test]
    fn viscosity_reference() {
        let c = PhysicalConstants::default();
        // fresh water at 20 degC: 1.002e-3 Pa s
        assert_relative_eq!(c.dynamic_viscosity(20.0, 0.0), 1.002e-3, max_relative = 5e-3);
        // salt increases viscosity
        assert!(c.dynamic_viscosity(20.0, 35.0) > c.dynamic_viscosity(20.0, 0.0));
        // kinematic viscosity near 1.19e-6 at (15, 35)
        let nu = c.kinematic_viscosity(15.0, 35.0);
        assert!(nu > 1.0e-6 && nu < 1.4e-6, "nu = {nu}");
    }

    #[test]
    fn refractive_index_reference() {
        let c = PhysicalConstants::default();
        let n = c.refractive_index(20.0, 35.0, 532e-9);
        assert!((n - 1.34).abs() < 0.005, "n = {n}");
        // A negative, B positive in ocean conditions
        assert!(c.dn_dt(15.0, 35.0, 532e-9) < 0.0);
        assert!(c.dn_ds(15.0, 35.0, 532e-9) > 0.0);
        // B magnitude near the commonly quoted 1.87e-4 at 15 degC
        assert_relative_eq!(c.dn_ds(15.0, 35.0, 532e-9), 1.87e-4, max_relative = 0.02);
    }

    #[test]
    fn missing_key_is_reported() {
        let err = PhysicalConstants::parse("eos80.c = 1.0").unwrap_err();
        assert!(matches!(err, ConstantsError::Missing(_)));
    }

    #[test]
    fn bad_value_is_reported_with_line() {
        let text = "eos80.c = not_a_number";
        match PhysicalConstants::parse(text).unwrap_err() {
            ConstantsError::BadValue { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
