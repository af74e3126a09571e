//! Goodness-of-fit measures: coefficient of determination on histogram
//! densities and mean squared error between empirical and model CDFs.

use super::sample::{Histogram, SampleSet};
use super::FitError;

/// R^2 = 1 - sum (f_m - f_p)^2 / sum (f_m - mean f_m)^2, with the model
/// density evaluated at bin centers. Can be negative for a bad fit.
pub fn r_squared<F: Fn(f64) -> f64>(hist: &Histogram, model_pdf: F) -> Result<f64, FitError> {
    let m = hist.n_bins();
    if m < 2 {
        return Err(FitError::DegenerateData("histogram needs at least 2 bins".into()));
    }
    let mean: f64 = hist.densities.iter().sum::<f64>() / m as f64;
    let ss_tot: f64 = hist.densities.iter().map(|f| (f - mean) * (f - mean)).sum();
    if ss_tot == 0.0 {
        return Err(FitError::DegenerateData("zero-variance histogram".into()));
    }
    let ss_res: f64 = (0..m)
        .map(|i| {
            let fp = model_pdf(hist.bin_center(i));
            let d = hist.densities[i] - fp;
            d * d
        })
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// MSE = mean over samples of (F_e(I) - F(I))^2 with the empirical CDF in the
/// rank/Num convention on the sorted samples.
pub fn mse<F: Fn(f64) -> f64>(samples: &SampleSet, model_cdf: F) -> Result<f64, FitError> {
    let num = samples.len();
    if num < 2 {
        return Err(FitError::DegenerateData("need at least 2 samples for MSE".into()));
    }
    let sum: f64 = samples
        .sorted()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let fe = (i + 1) as f64 / num as f64;
            let d = fe - model_cdf(x);
            d * d
        })
        .sum();
    Ok(sum / num as f64)
}

/// MSE against model CDF values already evaluated at the sorted samples
/// (one entry per sorted sample).
pub fn mse_from_values(samples: &SampleSet, cdf_at_sorted: &[f64]) -> Result<f64, FitError> {
    let num = samples.len();
    if num < 2 {
        return Err(FitError::DegenerateData("need at least 2 samples for MSE".into()));
    }
    if cdf_at_sorted.len() != num {
        return Err(FitError::DegenerateData(format!(
            "CDF vector length {} does not match sample count {num}",
            cdf_at_sorted.len()
        )));
    }
    let sum: f64 = cdf_at_sorted
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let fe = (i + 1) as f64 / num as f64;
            (fe - f) * (fe - f)
        })
        .sum();
    Ok(sum / num as f64)
}
