//! Gaussian point spread function integrated over square pixels.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{check_non_negative, ImagingError, StateLabel};

/// Kernel support in standard deviations; the mass outside is below 1e-15.
const WINDOW_SIGMAS: f64 = 8.0;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

const TABLE_STEP: f64 = 1.0 / 64.0;
const TABLE_RANGE: f64 = 9.0;

struct CdfTable {
    cdf: Vec<f64>,
    pdf: Vec<f64>,
}

fn table() -> &'static CdfTable {
    static TABLE: OnceLock<CdfTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = (2.0 * TABLE_RANGE / TABLE_STEP).round() as usize + 1;
        let z = |i: usize| -TABLE_RANGE + i as f64 * TABLE_STEP;
        let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        CdfTable {
            cdf: (0..n).map(|i| normal_cdf(z(i))).collect(),
            pdf: (0..n).map(|i| norm * (-0.5 * z(i) * z(i)).exp()).collect(),
        }
    })
}

/// Normal CDF by cubic Hermite interpolation of a table with exact
/// derivatives; absolute error below 1e-9.
fn normal_cdf_fast(z: f64) -> f64 {
    if z <= -TABLE_RANGE {
        return 0.0;
    }
    if z >= TABLE_RANGE {
        return 1.0;
    }
    let t = table();
    let u = (z + TABLE_RANGE) / TABLE_STEP;
    let i = (u as usize).min(t.cdf.len() - 2);
    let s = u - i as f64;
    let (s2, s3) = (s * s, s * s * s);
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * t.cdf[i] + h10 * TABLE_STEP * t.pdf[i] + h01 * t.cdf[i + 1] + h11 * TABLE_STEP * t.pdf[i + 1]
}

/// One-dimensional pixel masses of a kernel: `weights[i]` belongs to pixel
/// `start + i`.
#[derive(Clone, Debug, Default)]
pub struct PixelProfile {
    pub start: usize,
    pub weights: Vec<f64>,
}

impl PixelProfile {
    /// Mass of a Gaussian centred at `center` with width `sigma` inside each
    /// pixel `[i, i+1)`, `0 ≤ i < n_pixels`, restricted to the kernel window.
    /// `sigma = 0` is a point kernel.
    pub fn compute(center: f64, sigma: f64, n_pixels: usize, exact: bool) -> Self {
        let mut p = PixelProfile::default();
        p.fill(center, sigma, n_pixels, exact);
        p
    }

    pub fn fill(&mut self, center: f64, sigma: f64, n_pixels: usize, exact: bool) {
        self.weights.clear();
        self.start = 0;
        if sigma == 0.0 {
            let c = center.floor();
            if c >= 0.0 && (c as usize) < n_pixels {
                self.start = c as usize;
                self.weights.push(1.0);
            }
            return;
        }
        let lo = (center - WINDOW_SIGMAS * sigma).floor().max(0.0);
        let hi = (center + WINDOW_SIGMAS * sigma).ceil().min(n_pixels as f64);
        if hi <= lo {
            return;
        }
        let (lo, hi) = (lo as usize, hi as usize);
        let cdf = if exact { normal_cdf } else { normal_cdf_fast };
        self.start = lo;
        let mut prev = cdf((lo as f64 - center) / sigma);
        for i in lo..hi {
            let next = cdf((i as f64 + 1.0 - center) / sigma);
            self.weights.push(next - prev);
            prev = next;
        }
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn get(&self, pixel: usize) -> f64 {
        pixel
            .checked_sub(self.start)
            .and_then(|i| self.weights.get(i))
            .copied()
            .unwrap_or(0.0)
    }
}

/// Per-state Gaussian imaging kernel widths `[horizontal, vertical]` in pixels.
///
/// Index 0 holds state |1⟩, index 1 state |2⟩. A width of zero stands for a
/// perfectly localized atom.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsfModel {
    pub sigma: [[f64; 2]; 2],
}

impl PsfModel {
    pub fn new(sigma_state1: [f64; 2], sigma_state2: [f64; 2]) -> Result<Self, ImagingError> {
        let m = Self {
            sigma: [sigma_state1, sigma_state2],
        };
        m.validate()?;
        Ok(m)
    }

    /// Same kernel for both states.
    pub fn uniform(hor: f64, vert: f64) -> Result<Self, ImagingError> {
        Self::new([hor, vert], [hor, vert])
    }

    pub fn delta() -> Self {
        Self {
            sigma: [[0.0; 2]; 2],
        }
    }

    pub fn validate(&self) -> Result<(), ImagingError> {
        for s in self.sigma.iter().flatten() {
            check_non_negative("psf sigma", *s)?;
        }
        Ok(())
    }

    pub fn sigma(&self, state: StateLabel) -> [f64; 2] {
        self.sigma[state.index()]
    }
}

impl Default for PsfModel {
    /// Effective resolution including recoil blur and the fall during the
    /// pulse: 1.4 px horizontally, 2.1 px (|1⟩) and 2.0 px (|2⟩) vertically.
    fn default() -> Self {
        Self {
            sigma: [[1.4, 2.1], [1.4, 2.0]],
        }
    }
}
