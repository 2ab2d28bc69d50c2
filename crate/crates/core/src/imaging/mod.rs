//! Absorption-image synthesis: cloud densities, imaging kernels, noise.

mod blur;
mod density;
mod noise;
mod psf;
mod render;

pub use blur::{
    blur_rms, quadrature_sum, saturation_for_blur, BlurBudget, RB87_GAMMA, RB87_RECOIL_VELOCITY,
};
pub use density::{sample_positions, CloudDensity, DensityGrid, DensityShape};
pub use noise::DetectionNoiseModel;
pub use psf::{normal_cdf, PixelProfile, PsfModel};
pub use render::{render_shot, ImagePair, RenderedShot};

use serde::{Deserialize, Serialize};

/// Camera pixel size in metres.
pub const PIXEL_SIZE: f64 = 1.3e-6;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ImagingError {
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("{positions} positions but {outcomes} outcomes")]
    LengthMismatch { positions: usize, outcomes: usize },
    #[error("blur of {target} m exceeds the saturated limit {limit} m")]
    UnattainableBlur { target: f64, limit: f64 },
    #[error("image geometry must be non-empty")]
    EmptyGeometry,
    #[error("density grid has {got} cells, geometry needs {expected}")]
    GridSize { got: usize, expected: usize },
    #[error("density grid carries no weight")]
    EmptyDensity,
}

/// Internal state imaged in a frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateLabel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl StateLabel {
    pub const BOTH: [StateLabel; 2] = [StateLabel::One, StateLabel::Two];

    /// Array index used for per-state parameters: `One → 0`, `Two → 1`.
    pub fn index(self) -> usize {
        match self {
            StateLabel::One => 0,
            StateLabel::Two => 1,
        }
    }

    /// State of an atom with outcome `+1/2` (|2⟩) or `-1/2` (|1⟩).
    pub fn from_outcome(outcome: f64) -> StateLabel {
        if outcome > 0.0 {
            StateLabel::Two
        } else {
            StateLabel::One
        }
    }
}

/// Image size in pixels. Pixel `(col, row)` covers `[col, col+1) × [row, row+1)`
/// in coordinates `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub width: usize,
    pub height: usize,
}

impl Geometry {
    pub fn new(width: usize, height: usize) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 {
            return Err(ImagingError::EmptyGeometry);
        }
        Ok(Self { width, height })
    }

    pub fn n_pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn center(&self) -> [f64; 2] {
        [self.width as f64 / 2.0, self.height as f64 / 2.0]
    }

    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            width: 49,
            height: 49,
        }
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<(), ImagingError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ImagingError::InvalidParameter { name, value })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<(), ImagingError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ImagingError::InvalidParameter { name, value })
    }
}
