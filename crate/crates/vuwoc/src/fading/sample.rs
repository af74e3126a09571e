//! Normalized intensity samples and their histogram.

use super::FitError;

/// Intensity sample set normalized to unit mean.
#[derive(Debug, Clone)]
pub struct SampleSet {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl SampleSet {
    /// Normalize raw nonnegative intensities by their mean.
    pub fn from_raw(raw: &[f64]) -> Result<Self, FitError> {
        if raw.is_empty() {
            return Err(FitError::Empty);
        }
        if let Some(&bad) = raw.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(FitError::InvalidSample(bad));
        }
        let mean: f64 = raw.iter().sum::<f64>() / raw.len() as f64;
        if mean <= 0.0 {
            return Err(FitError::DegenerateData("all-zero intensities".into()));
        }
        let values: Vec<f64> = raw.iter().map(|v| v / mean).collect();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { values, sorted })
    }

    /// Values in the original order (mean exactly normalized to 1).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values in ascending order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance; equals the scintillation index for
    /// unit-mean samples.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (self.len() as f64 - 1.0)
    }

    /// True when every sample is strictly positive (required by the
    /// log-likelihood machinery).
    pub fn all_positive(&self) -> bool {
        self.sorted.first().is_some_and(|&v| v > 0.0)
    }
}

/// Equal-width density histogram over [0, max sample].
#[derive(Debug, Clone)]
pub struct Histogram {
    /// M + 1 ascending bin edges.
    pub edges: Vec<f64>,
    /// Probability density per bin.
    pub densities: Vec<f64>,
}

impl Histogram {
    /// Bin count rule: clamp(ceil(sqrt(Num)), 50, 200) equal-width bins.
    pub fn from_samples(samples: &SampleSet) -> Self {
        let num = samples.len();
        let m = ((num as f64).sqrt().ceil() as usize).clamp(50, 200);
        let max = samples.sorted().last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
        let width = max / m as f64;
        let mut counts = vec![0usize; m];
        for &v in samples.values() {
            let mut bin = (v / width) as usize;
            if bin >= m {
                bin = m - 1; // the maximum sample lands in the last bin
            }
            counts[bin] += 1;
        }
        let edges: Vec<f64> = (0..=m).map(|i| i as f64 * width).collect();
        let densities: Vec<f64> =
            counts.iter().map(|&c| c as f64 / (num as f64 * width)).collect();
        Self { edges, densities }
    }

    pub fn n_bins(&self) -> usize {
        self.densities.len()
    }

    pub fn bin_width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }

    /// Total integrated density (1 within rounding for any sample set).
    pub fn total_mass(&self) -> f64 {
        (0..self.n_bins()).map(|i| self.densities[i] * self.bin_width(i)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normalizes_to_unit_mean() {
        let s = SampleSet::from_raw(&[2.0, 4.0, 6.0]).unwrap();
        assert_relative_eq!(s.mean(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.values()[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SampleSet::from_raw(&[]).is_err());
        assert!(SampleSet::from_raw(&[1.0, -0.5]).is_err());
        assert!(SampleSet::from_raw(&[1.0, f64::NAN]).is_err());
        assert!(SampleSet::from_raw(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn histogram_integrates_to_one() {
        let raw: Vec<f64> = (1..=5000).map(|i| (i as f64 * 0.7).sin().abs() + 0.1).collect();
        let s = SampleSet::from_raw(&raw).unwrap();
        let h = Histogram::from_samples(&s);
        assert!(h.n_bins() >= 50 && h.n_bins() <= 200);
        assert_relative_eq!(h.total_mass(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn bin_count_clamps() {
        let small = SampleSet::from_raw(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(Histogram::from_samples(&small).n_bins(), 50);
        let big = SampleSet::from_raw(&(1..=100_000).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        assert_eq!(Histogram::from_samples(&big).n_bins(), 200);
    }
}
