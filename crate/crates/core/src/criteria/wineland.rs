//! Wineland squeezing parameter `ξ² = N Var(S_⊥,min) / |⟨S⟩|²`.

use serde::{Deserialize, Serialize};

use super::{mean_sx, sample_variance, CriteriaError, SubsetBlock};
use crate::regions::RegionLabel;
use crate::spin::SpinMoments;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wineland {
    pub xi2: f64,
    pub db: f64,
}

impl Wineland {
    pub fn from_xi2(xi2: f64) -> Self {
        Self {
            xi2,
            db: 10.0 * xi2.log10(),
        }
    }
}

/// Exact value from moments, minimizing over directions orthogonal to the
/// mean spin.
pub fn wineland_parameter(moments: &SpinMoments, n_atoms: usize) -> Result<Wineland, CriteriaError> {
    let p = moments.polarization();
    let t = moments
        .transverse_extremes()
        .filter(|_| p > 0.0)
        .ok_or(CriteriaError::ZeroPolarization)?;
    Ok(Wineland::from_xi2(n_atoms as f64 * t.min / (p * p)))
}

/// Estimate from region A of a block whose `z` readout holds the squeezed
/// quadrature, with `n_atoms` the mean atom number behind the samples.
/// The detection-noise variance of region A is subtracted.
pub fn wineland_from_samples(block: &SubsetBlock, n_atoms: f64) -> Result<Wineland, CriteriaError> {
    let z = &block.z.a;
    if z.len() < 2 {
        return Err(CriteriaError::TooFewSamples {
            needed: 2,
            got: z.len(),
        });
    }
    let sx = mean_sx(block, RegionLabel::A)?;
    if sx == 0.0 {
        return Err(CriteriaError::ZeroPolarization);
    }
    let var = sample_variance(z) - block.noise_var_a;
    Ok(Wineland::from_xi2(n_atoms * var / (sx * sx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{coherent_state, spin_moments, squeezed_state};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn coherent_state_is_zero_db() {
        let w = wineland_parameter(&spin_moments(&coherent_state(100, FRAC_PI_2, 0.3).unwrap()), 100).unwrap();
        assert!((w.xi2 - 1.0).abs() < 1e-9 && w.db.abs() < 1e-8);
    }

    #[test]
    fn matches_squeezing_module() {
        let s = squeezed_state(200, 0.02, None).unwrap();
        let w = wineland_parameter(&s.moments, 200).unwrap();
        assert!((w.xi2 - s.wineland()).abs() < 1e-12);
        assert!(w.db < 0.0);
    }

    #[test]
    fn unpolarized_rejected() {
        let m = SpinMoments {
            mean: [0.0; 3],
            covariance: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        };
        assert_eq!(wineland_parameter(&m, 4), Err(CriteriaError::ZeroPolarization));
    }
}
