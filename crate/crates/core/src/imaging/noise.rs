//! Additive detection noise of the absorption images.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_non_negative, ImagingError, StateLabel};

/// Gaussian per-pixel noise, scaled so that the sum over a whole frame has
/// rms `sigma_frame[state]` atoms. Index 0 is state |1⟩, index 1 state |2⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionNoiseModel {
    pub sigma_frame: [f64; 2],
}

impl DetectionNoiseModel {
    pub fn new(sigma_state1: f64, sigma_state2: f64) -> Result<Self, ImagingError> {
        let m = Self {
            sigma_frame: [sigma_state1, sigma_state2],
        };
        m.validate()?;
        Ok(m)
    }

    pub fn off() -> Self {
        Self {
            sigma_frame: [0.0; 2],
        }
    }

    pub fn validate(&self) -> Result<(), ImagingError> {
        check_non_negative("noise sigma", self.sigma_frame[0])?;
        check_non_negative("noise sigma", self.sigma_frame[1])
    }

    pub fn is_off(&self) -> bool {
        self.sigma_frame == [0.0; 2]
    }

    pub fn pixel_sigma(&self, state: StateLabel, n_pixels: usize) -> f64 {
        self.sigma_frame[state.index()] / (n_pixels as f64).sqrt()
    }

    /// Variance of the noise summed over `mask_pixels` of an `n_pixels` frame.
    pub fn region_variance(&self, state: StateLabel, mask_pixels: usize, n_pixels: usize) -> f64 {
        self.sigma_frame[state.index()].powi(2) * mask_pixels as f64 / n_pixels as f64
    }

    pub fn add_to<R: Rng + ?Sized>(&self, state: StateLabel, frame: &mut [f64], rng: &mut R) {
        let s = self.pixel_sigma(state, frame.len());
        if s == 0.0 {
            return;
        }
        for px in frame.iter_mut() {
            let z: f64 = StandardNormal.sample(rng);
            *px += s * z;
        }
    }
}

impl Default for DetectionNoiseModel {
    /// 3.5 atoms (|1⟩) and 3.3 atoms (|2⟩) per whole picture.
    fn default() -> Self {
        Self {
            sigma_frame: [3.5, 3.3],
        }
    }
}
