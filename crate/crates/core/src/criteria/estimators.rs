//! Sample statistics, regression gains and inferred variances.

use serde::{Deserialize, Serialize};

use super::CriteriaError;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance (`m − 1`).
pub fn sample_variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Unbiased sample covariance (`m − 1`).
pub fn sample_covariance(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / (x.len() as f64 - 1.0)
}

fn check_pairs(a: &[f64], b: &[f64], needed: usize) -> Result<(), CriteriaError> {
    if a.len() != b.len() {
        return Err(CriteriaError::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < needed {
        return Err(CriteriaError::TooFewSamples {
            needed,
            got: a.len(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainEstimate {
    pub g: f64,
    /// True when the noise-corrected variance of A was not positive and the
    /// gain fell back to zero.
    pub fallback: bool,
}

/// Noise-corrected regression gain `g* = −Cov(A,B) / (Var(A) − Var(Δ^A))`,
/// which minimizes the noise-subtracted variance of `g A + B`.
pub fn optimal_gain(a: &[f64], b: &[f64], noise_var_a: f64) -> Result<GainEstimate, CriteriaError> {
    check_pairs(a, b, 3)?;
    let denom = sample_variance(a) - noise_var_a;
    if !(denom > 0.0) {
        return Ok(GainEstimate {
            g: 0.0,
            fallback: true,
        });
    }
    Ok(GainEstimate {
        g: -sample_covariance(a, b) / denom,
        fallback: false,
    })
}

/// `Σ [(g aⱼ + bⱼ) − (g ā + b̄)]² / (m − lost_dof)`.
pub fn residual_variance(a: &[f64], b: &[f64], g: f64, lost_dof: usize) -> Result<f64, CriteriaError> {
    check_pairs(a, b, lost_dof + 1)?;
    let r: Vec<f64> = a.iter().zip(b).map(|(x, y)| g * x + y).collect();
    let m = mean(&r);
    Ok(r.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (r.len() - lost_dof) as f64)
}

/// Inferred variance with the `m − 2` normalization that makes it unbiased
/// when `g` is itself estimated from the same samples.
pub fn inferred_variance(a: &[f64], b: &[f64], g: f64) -> Result<f64, CriteriaError> {
    residual_variance(a, b, g, 2)
}

/// Removes the detection-noise contribution `g² Var(Δ^A) + Var(Δ^B)`. The
/// result may be negative.
pub fn subtract_noise(raw_var: f64, g: f64, noise_var_a: f64, noise_var_b: f64) -> f64 {
    raw_var - g * g * noise_var_a - noise_var_b
}

/// Unweighted mean over subsets with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub sem: f64,
    pub n: usize,
}

impl Aggregate {
    /// How many standard errors the mean lies below `threshold`.
    pub fn sigmas_below(&self, threshold: f64) -> f64 {
        (threshold - self.mean) / self.sem
    }
}

pub fn aggregate_subsets(values: &[f64]) -> Result<Aggregate, CriteriaError> {
    if values.len() < 2 {
        return Err(CriteriaError::TooFewSubsets(values.len()));
    }
    let n = values.len();
    Ok(Aggregate {
        mean: mean(values),
        sem: (sample_variance(values) / n as f64).sqrt(),
        n,
    })
}
