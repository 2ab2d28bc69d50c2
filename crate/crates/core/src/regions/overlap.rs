//! Mode overlaps `f^U(x)` and the effective coupling `η_eff`.

use super::{RegionError, RegionMask};
use crate::imaging::{CloudDensity, Geometry, PixelProfile, PsfModel, StateLabel};

/// Quadrature points per pixel along each axis.
pub const DEFAULT_SUPERSAMPLING: usize = 4;

/// Density-weighted quadrature points over the image for one state.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub state: StateLabel,
    pub geometry: Geometry,
    pub points: Vec<[f64; 2]>,
    /// `ρ(x) dA` per point; sums to the density mass inside the image.
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(
        density: &CloudDensity,
        state: StateLabel,
        geometry: Geometry,
        supersampling: usize,
    ) -> Self {
        let q = supersampling.max(1);
        let h = 1.0 / q as f64;
        let mut raw = Vec::with_capacity(geometry.n_pixels() * q * q);
        for j in 0..geometry.height * q {
            let y = (j as f64 + 0.5) * h;
            for i in 0..geometry.width * q {
                let x = (i as f64 + 0.5) * h;
                raw.push(([x, y], density.value(state, x, y) * h * h));
            }
        }
        let max = raw.iter().map(|r| r.1).fold(0.0, f64::max);
        let (points, weights) = raw.into_iter().filter(|r| r.1 > max * 1e-16).unzip();
        Self {
            state,
            geometry,
            points,
            weights,
        }
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn overlap_at(
    psf: &PsfModel,
    mask: &RegionMask,
    state: StateLabel,
    x: [f64; 2],
    exact: bool,
    px: &mut PixelProfile,
    py: &mut PixelProfile,
) -> f64 {
    let g = mask.geometry;
    let [sx, sy] = psf.sigma(state);
    px.fill(x[0], sx, g.width, exact);
    py.fill(x[1], sy, g.height, exact);
    let grid = mask.grid(state);
    let mut f = 0.0;
    for (r, &wy) in py.weights.iter().enumerate() {
        let row = (py.start + r) * g.width + px.start;
        let cells = &grid[row..row + px.weights.len()];
        let inner: f64 = cells
            .iter()
            .zip(&px.weights)
            .filter(|(m, _)| **m)
            .map(|(_, w)| w)
            .sum();
        f += wy * inner;
    }
    f
}

/// Kernel mass of an atom at `x` (in `state`'s frame) that lands inside the
/// mask, evaluated with exact error functions.
pub fn mode_overlap(psf: &PsfModel, mask: &RegionMask, state: StateLabel, x: [f64; 2]) -> f64 {
    let (mut px, mut py) = (PixelProfile::default(), PixelProfile::default());
    overlap_at(psf, mask, state, x, true, &mut px, &mut py)
}

/// Mode overlaps at many points, using the tabulated CDF (error below 1e-9).
pub fn mode_overlap_grid(
    psf: &PsfModel,
    mask: &RegionMask,
    state: StateLabel,
    points: &[[f64; 2]],
) -> Vec<f64> {
    let (mut px, mut py) = (PixelProfile::default(), PixelProfile::default());
    points
        .iter()
        .map(|&x| overlap_at(psf, mask, state, x, false, &mut px, &mut py))
        .collect()
}

/// `f^U` on a quadrature grid with its density moments.
#[derive(Clone, Debug)]
pub struct OverlapProfile {
    pub state: StateLabel,
    pub f: Vec<f64>,
    /// `⟨f⟩ = ∫ρ f`.
    pub mean_f: f64,
    /// `⟨f²⟩ = ∫ρ f²`.
    pub mean_f2: f64,
}

impl OverlapProfile {
    pub fn new(grid: &QuadratureGrid, psf: &PsfModel, mask: &RegionMask) -> Self {
        let f = mode_overlap_grid(psf, mask, grid.state, &grid.points);
        let mean_f = f.iter().zip(&grid.weights).map(|(f, w)| w * f).sum();
        let mean_f2 = f.iter().zip(&grid.weights).map(|(f, w)| w * f * f).sum();
        Self {
            state: grid.state,
            f,
            mean_f,
            mean_f2,
        }
    }

    /// `⟨f²⟩/⟨f⟩`, or `None` when the region carries no density.
    pub fn eta(&self) -> Option<f64> {
        (self.mean_f > 1e-300).then(|| self.mean_f2 / self.mean_f)
    }
}

/// Density moments of two overlap profiles on the same grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairStatistics {
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_aa: f64,
    pub mean_bb: f64,
    pub mean_ab: f64,
}

impl PairStatistics {
    pub fn new(grid: &QuadratureGrid, a: &OverlapProfile, b: &OverlapProfile) -> Self {
        let mean_ab = a
            .f
            .iter()
            .zip(&b.f)
            .zip(&grid.weights)
            .map(|((fa, fb), w)| w * fa * fb)
            .sum();
        Self {
            mean_a: a.mean_f,
            mean_b: b.mean_f,
            mean_aa: a.mean_f2,
            mean_bb: b.mean_f2,
            mean_ab,
        }
    }

    pub fn eta_a(&self) -> f64 {
        self.mean_aa / self.mean_a
    }

    pub fn eta_b(&self) -> f64 {
        self.mean_bb / self.mean_b
    }
}

/// Conservative `η_eff` of a mask: the smaller of the two per-state values.
pub fn eta_eff(
    density: &CloudDensity,
    psf: &PsfModel,
    mask: &RegionMask,
) -> Result<f64, RegionError> {
    let mut eta = f64::INFINITY;
    for state in StateLabel::BOTH {
        let grid = QuadratureGrid::new(density, state, mask.geometry, DEFAULT_SUPERSAMPLING);
        let e = OverlapProfile::new(&grid, psf, mask)
            .eta()
            .ok_or(RegionError::UndefinedRegion(mask.label))?;
        eta = eta.min(e);
    }
    Ok(eta)
}

/// Predicted `Var(N₁−N₂)/⟨N₁+N₂⟩` inside a region for an equatorial
/// coherent state, from the per-state overlap moments `(⟨f⟩, ⟨f²⟩)`.
///
/// Each atom lands in either state with probability 1/2 and contributes
/// `+f₁` or `−f₂`; with atom number mean `n_mean` and variance `n_var`,
/// `Var = n̄ Var(c) + Var(N) E[c]²`.
pub fn css_raw_fluctuation_ratio(
    state1: (f64, f64),
    state2: (f64, f64),
    n_mean: f64,
    n_var: f64,
) -> f64 {
    let (m1, q1) = state1;
    let (m2, q2) = state2;
    let ec = 0.5 * (m1 - m2);
    let ec2 = 0.5 * (q1 + q2);
    let var = n_mean * (ec2 - ec * ec) + n_var * ec * ec;
    var / (n_mean * 0.5 * (m1 + m2))
}
