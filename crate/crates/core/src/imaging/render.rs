//! Rendering atoms into the two-frame absorption image pair.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{DetectionNoiseModel, Geometry, ImagingError, PixelProfile, PsfModel, StateLabel};

/// Detected atom-number density per pixel for state |2⟩ (first frame) and
/// state |1⟩ (second frame). Frames are row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImagePair<T = f64> {
    pub geometry: Geometry,
    pub frame2: Vec<T>,
    pub frame1: Vec<T>,
}

impl<T: Copy + Default> ImagePair<T> {
    pub fn zeros(geometry: Geometry) -> Self {
        Self {
            geometry,
            frame2: vec![T::default(); geometry.n_pixels()],
            frame1: vec![T::default(); geometry.n_pixels()],
        }
    }

    pub fn frame(&self, state: StateLabel) -> &[T] {
        match state {
            StateLabel::One => &self.frame1,
            StateLabel::Two => &self.frame2,
        }
    }

    pub fn frame_mut(&mut self, state: StateLabel) -> &mut [T] {
        match state {
            StateLabel::One => &mut self.frame1,
            StateLabel::Two => &mut self.frame2,
        }
    }
}

impl ImagePair<f64> {
    /// Rounds to single precision, the storage format of datasets.
    pub fn to_f32(&self) -> ImagePair<f32> {
        ImagePair {
            geometry: self.geometry,
            frame2: self.frame2.iter().map(|&v| v as f32).collect(),
            frame1: self.frame1.iter().map(|&v| v as f32).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.frame1.iter().chain(&self.frame2).all(|v| v.is_finite())
    }
}

impl<T: Copy + Default + Into<f64>> ImagePair<T> {
    pub fn total(&self, state: StateLabel) -> f64 {
        self.frame(state).iter().map(|&v| v.into()).sum()
    }
}

#[derive(Clone, Debug)]
pub struct RenderedShot {
    pub images: ImagePair<f64>,
    /// Kernel mass that fell outside the field of view, summed over atoms.
    pub lost_mass: f64,
}

/// Deposits each atom's pixel-integrated kernel into the frame of its
/// state, then adds detection noise.
///
/// `positions[i]` is in the coordinate frame of atom `i`'s own state.
pub fn render_shot<R: Rng + ?Sized>(
    positions: &[[f64; 2]],
    outcomes: &[f64],
    psf: &PsfModel,
    noise: &DetectionNoiseModel,
    geometry: Geometry,
    rng: &mut R,
) -> Result<RenderedShot, ImagingError> {
    if positions.len() != outcomes.len() {
        return Err(ImagingError::LengthMismatch {
            positions: positions.len(),
            outcomes: outcomes.len(),
        });
    }
    let mut images = ImagePair::<f64>::zeros(geometry);
    let mut lost_mass = 0.0;
    let (mut px, mut py) = (PixelProfile::default(), PixelProfile::default());
    for (pos, &o) in positions.iter().zip(outcomes) {
        let state = StateLabel::from_outcome(o);
        let [sx, sy] = psf.sigma(state);
        px.fill(pos[0], sx, geometry.width, false);
        py.fill(pos[1], sy, geometry.height, false);
        lost_mass += 1.0 - px.total() * py.total();
        let frame = images.frame_mut(state);
        for (r, &wy) in py.weights.iter().enumerate() {
            let row = (py.start + r) * geometry.width + px.start;
            let dst = &mut frame[row..row + px.weights.len()];
            for (d, &wx) in dst.iter_mut().zip(&px.weights) {
                *d += wx * wy;
            }
        }
    }
    for state in StateLabel::BOTH {
        noise.add_to(state, images.frame_mut(state), rng);
    }
    Ok(RenderedShot { images, lost_mass })
}
