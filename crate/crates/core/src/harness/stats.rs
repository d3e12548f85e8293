use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::geometry::cmp_f64;

/// A sorted sample with its first two moments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    pub mean: f64,
    /// Unbiased; 0 for a single sample.
    pub variance: f64,
    pub stderr: f64,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample {bad}")));
        }
        samples.sort_by(cmp_f64);
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let variance = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Ok(Self {
            samples,
            mean,
            variance,
            stderr: (variance / n).sqrt(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn min(&self) -> f64 {
        self.samples[0]
    }

    pub fn max(&self) -> f64 {
        self.samples[self.samples.len() - 1]
    }

    /// Linear interpolation between order statistics.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let h = p * (self.samples.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(self.samples.len() - 1);
        self.samples[lo] + (h - lo as f64) * (self.samples[hi] - self.samples[lo])
    }

    fn central_moment(&self, k: i32) -> f64 {
        self.samples.iter().map(|x| (x - self.mean).powi(k)).sum::<f64>() / self.samples.len() as f64
    }

    /// Moment skewness; 0 for a degenerate sample.
    pub fn skewness(&self) -> f64 {
        let m2 = self.central_moment(2);
        if m2 == 0.0 {
            0.0
        } else {
            self.central_moment(3) / m2.powf(1.5)
        }
    }

    /// Moment kurtosis minus 3; 0 for a degenerate sample.
    pub fn excess_kurtosis(&self) -> f64 {
        let m2 = self.central_moment(2);
        if m2 == 0.0 {
            0.0
        } else {
            self.central_moment(4) / (m2 * m2) - 3.0
        }
    }

    /// Samples minus the sample mean.
    pub fn centered(&self) -> Self {
        Self::new(self.samples.iter().map(|x| x - self.mean).collect()).expect("nonempty")
    }

    /// Centered and divided by the sample standard deviation (only centered
    /// if that is zero).
    pub fn studentized(&self) -> Self {
        let sd = self.std_dev();
        let sd = if sd > 0.0 { sd } else { 1.0 };
        Self::new(self.samples.iter().map(|x| (x - self.mean) / sd).collect()).expect("nonempty")
    }
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let (x, y) = (a.samples(), b.samples());
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < x.len() && j < y.len() {
        // step past every copy of the smaller current value in both samples
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] == v {
            i += 1;
        }
        while j < y.len() && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// [`ks_two_sample`] on raw slices.
pub fn ks_two_sample_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok(ks_two_sample(
        &EmpiricalDistribution::new(a.to_vec())?,
        &EmpiricalDistribution::new(b.to_vec())?,
    ))
}

pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Sup-distance between the empirical CDF and the standard normal CDF.
pub fn ks_standard_normal(a: &EmpiricalDistribution) -> f64 {
    let n = a.len() as f64;
    let mut d = 0.0f64;
    let s = a.samples();
    let mut i = 0;
    while i < s.len() {
        let v = s[i];
        let below = i as f64 / n;
        while i < s.len() && s[i] == v {
            i += 1;
        }
        let f = standard_normal_cdf(v);
        d = d.max((f - below).abs()).max((i as f64 / n - f).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample statistic at significance
/// `level`: `sqrt(-ln(level/2)/2) · sqrt((n+m)/(nm))`.
pub fn ks_two_sample_critical(n: usize, m: usize, level: f64) -> f64 {
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}
