//! Fit report: one record per fitted family with parameters in the family's
//! reporting order, goodness of fit and convergence state. Serializes to a
//! line-oriented text document that the pipeline stages can round-trip.

use super::dist::Family;
use super::FitError;

#[derive(Debug, Clone, PartialEq)]
pub struct FitRecord {
    pub family: Family,
    pub params: Vec<f64>,
    pub loglik: f64,
    pub r_squared: f64,
    pub mse: f64,
    pub iterations: u32,
    pub converged: bool,
    /// Present when the fit failed or degraded; the record then carries no
    /// usable parameters.
    pub note: Option<String>,
}

impl FitRecord {
    pub fn failed(family: Family, note: impl Into<String>) -> Self {
        Self {
            family,
            params: Vec::new(),
            loglik: f64::NEG_INFINITY,
            r_squared: f64::NAN,
            mse: f64::NAN,
            iterations: 0,
            converged: false,
            note: Some(note.into()),
        }
    }

    pub fn usable(&self) -> bool {
        self.note.is_none() && !self.params.is_empty()
    }
}

/// Full per-sample-set fit report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FitReport {
    pub records: Vec<FitRecord>,
}

impl FitReport {
    pub fn get(&self, family: Family) -> Option<&FitRecord> {
        self.records.iter().find(|r| r.family == family)
    }

    /// Serialize to the line format
    /// `family=<name> converged=<bool> iterations=<n> loglik=<v> r2=<v> mse=<v> params=<csv>`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# fit report: one record per family\n");
        for r in &self.records {
            let params = r
                .params
                .iter()
                .map(|p| format!("{p}"))
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "family={} converged={} iterations={} loglik={} r2={} mse={} params={}",
                r.family.name(),
                r.converged,
                r.iterations,
                r.loglik,
                r.r_squared,
                r.mse,
                params
            ));
            if let Some(note) = &r.note {
                out.push_str(&format!(" note={:?}", note));
            }
            out.push('\n');
        }
        out
    }

    /// Parse the serialized form back.
    pub fn from_text(text: &str) -> Result<Self, FitError> {
        let mut records = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut family = None;
            let mut params = Vec::new();
            let mut loglik = f64::NEG_INFINITY;
            let mut r2 = f64::NAN;
            let mut mse = f64::NAN;
            let mut iterations = 0u32;
            let mut converged = false;
            // the free-text note is always last and may contain spaces
            let (line, mut note) = match line.split_once(" note=") {
                Some((head, tail)) => (head, Some(tail.trim_matches('"').to_string())),
                None => (line, None),
            };
            for field in line.split_whitespace() {
                let Some((key, value)) = field.split_once('=') else {
                    return Err(FitError::Report(format!(
                        "line {}: malformed field {field:?}",
                        lineno + 1
                    )));
                };
                match key {
                    "family" => {
                        family = Family::from_name(value);
                        if family.is_none() {
                            return Err(FitError::Report(format!(
                                "line {}: unknown family {value:?}",
                                lineno + 1
                            )));
                        }
                    }
                    "converged" => converged = value == "true",
                    "iterations" => {
                        iterations = value.parse().map_err(|_| {
                            FitError::Report(format!("line {}: bad iterations", lineno + 1))
                        })?
                    }
                    "loglik" => {
                        loglik = value.parse().map_err(|_| {
                            FitError::Report(format!("line {}: bad loglik", lineno + 1))
                        })?
                    }
                    "r2" => r2 = value.parse().unwrap_or(f64::NAN),
                    "mse" => mse = value.parse().unwrap_or(f64::NAN),
                    "params" => {
                        if !value.is_empty() {
                            for piece in value.split(',') {
                                params.push(piece.parse().map_err(|_| {
                                    FitError::Report(format!(
                                        "line {}: bad parameter {piece:?}",
                                        lineno + 1
                                    ))
                                })?);
                            }
                        }
                    }
                    "note" => note = Some(value.trim_matches('"').to_string()),
                    _ => {
                        return Err(FitError::Report(format!(
                            "line {}: unknown field {key:?}",
                            lineno + 1
                        )))
                    }
                }
            }
            let family = family.ok_or_else(|| {
                FitError::Report(format!("line {}: missing family", lineno + 1))
            })?;
            records.push(FitRecord {
                family,
                params,
                loglik,
                r_squared: r2,
                mse,
                iterations,
                converged,
                note,
            });
        }
        Ok(Self { records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let report = FitReport {
            records: vec![
                FitRecord {
                    family: Family::Wgg,
                    params: vec![0.7531, 19.581, 1.029, 1.014, 12.0169, 23.8298],
                    loglik: -1234.5678,
                    r_squared: 0.989,
                    mse: 1.05e-4,
                    iterations: 41,
                    converged: true,
                    note: None,
                },
                FitRecord::failed(Family::K, "variance below exponential floor"),
            ],
        };
        let text = report.to_text();
        let back = FitReport::from_text(&text).unwrap();
        assert_eq!(back.records.len(), 2);
        assert_eq!(back.records[0].family, Family::Wgg);
        assert_eq!(back.records[0].params, report.records[0].params);
        assert!(back.records[1].note.is_some());
        assert!(!back.records[1].usable());
    }

    #[test]
    fn unknown_family_is_an_error() {
        assert!(FitReport::from_text("family=zeta params=1.0").is_err());
    }
}
