//! Spatial density of the expanded cloud, per internal state.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_positive, Geometry, ImagingError, PsfModel, StateLabel};

/// A sampled density on the pixel grid, piecewise constant per pixel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridData", into = "GridData")]
pub struct DensityGrid {
    pub geometry: Geometry,
    /// Row-major non-negative weights; normalized on construction.
    pub values: Vec<f64>,
    cdf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridData {
    geometry: Geometry,
    values: Vec<f64>,
}

impl TryFrom<GridData> for DensityGrid {
    type Error = ImagingError;
    fn try_from(d: GridData) -> Result<Self, Self::Error> {
        DensityGrid::new(d.geometry, d.values)
    }
}

impl From<DensityGrid> for GridData {
    fn from(g: DensityGrid) -> Self {
        GridData {
            geometry: g.geometry,
            values: g.values,
        }
    }
}

impl DensityGrid {
    pub fn new(geometry: Geometry, values: Vec<f64>) -> Result<Self, ImagingError> {
        if values.len() != geometry.n_pixels() {
            return Err(ImagingError::GridSize {
                got: values.len(),
                expected: geometry.n_pixels(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(ImagingError::InvalidParameter {
                name: "density value",
                value: *v,
            });
        }
        let total: f64 = values.iter().sum();
        if total <= 0.0 {
            return Err(ImagingError::EmptyDensity);
        }
        let values: Vec<f64> = values.iter().map(|v| v / total).collect();
        let mut acc = 0.0;
        let cdf = values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        Ok(Self {
            geometry,
            values,
            cdf,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        let u: f64 = rng.gen::<f64>() * self.cdf.last().copied().unwrap_or(1.0);
        let i = self.cdf.partition_point(|&c| c <= u).min(self.values.len() - 1);
        let (col, row) = (i % self.geometry.width, i / self.geometry.width);
        [col as f64 + rng.gen::<f64>(), row as f64 + rng.gen::<f64>()]
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        if x < 0.0 || y < 0.0 {
            return 0.0;
        }
        let (c, r) = (x as usize, y as usize);
        if c >= self.geometry.width || r >= self.geometry.height {
            return 0.0;
        }
        self.values[self.geometry.index(c, r)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityShape {
    Gaussian,
    /// User-supplied grids for state |1⟩ and |2⟩.
    Grid { grids: Box<[DensityGrid; 2]> },
}

/// Per-state cloud density. Index 0 is state |1⟩, index 1 state |2⟩; each
/// state has its own coordinate frame centred at `center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudDensity {
    pub center: [[f64; 2]; 2],
    pub sigma: [[f64; 2]; 2],
    pub shape: DensityShape,
}

impl CloudDensity {
    pub fn gaussian(center: [[f64; 2]; 2], sigma: [[f64; 2]; 2]) -> Result<Self, ImagingError> {
        let d = Self {
            center,
            sigma,
            shape: DensityShape::Gaussian,
        };
        d.validate()?;
        Ok(d)
    }

    /// Cloud with per-state sizes of the default experiment, centred in `geometry`.
    pub fn centered(geometry: Geometry) -> Self {
        let c = geometry.center();
        Self {
            center: [c, c],
            sigma: [[3.06, 4.0], [3.0, 3.2]],
            shape: DensityShape::Gaussian,
        }
    }

    pub fn from_grids(grid1: DensityGrid, grid2: DensityGrid) -> Self {
        let stats = |g: &DensityGrid| {
            let (mut m, mut s) = ([0.0; 2], [0.0; 2]);
            for (i, v) in g.values.iter().enumerate() {
                let (x, y) = ((i % g.geometry.width) as f64 + 0.5, (i / g.geometry.width) as f64 + 0.5);
                m[0] += v * x;
                m[1] += v * y;
                s[0] += v * x * x;
                s[1] += v * y * y;
            }
            (m, [(s[0] - m[0] * m[0]).sqrt(), (s[1] - m[1] * m[1]).sqrt()])
        };
        let (c1, s1) = stats(&grid1);
        let (c2, s2) = stats(&grid2);
        Self {
            center: [c1, c2],
            sigma: [s1, s2],
            shape: DensityShape::Grid {
                grids: Box::new([grid1, grid2]),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ImagingError> {
        for s in self.sigma.iter().flatten() {
            check_positive("cloud sigma", *s)?;
        }
        Ok(())
    }

    /// Probability density at `(x, y)` for atoms in `state`.
    pub fn value(&self, state: StateLabel, x: f64, y: f64) -> f64 {
        let i = state.index();
        match &self.shape {
            DensityShape::Gaussian => {
                let [cx, cy] = self.center[i];
                let [sx, sy] = self.sigma[i];
                let (u, v) = ((x - cx) / sx, (y - cy) / sy);
                (-0.5 * (u * u + v * v)).exp() / (2.0 * std::f64::consts::PI * sx * sy)
            }
            DensityShape::Grid { grids } => grids[i].value(x, y),
        }
    }

    /// Whether the cloud blurred by the kernel fits in `geometry` out to
    /// `n_sigma` combined standard deviations, for both states.
    pub fn fits(&self, geometry: Geometry, psf: &PsfModel, n_sigma: f64) -> bool {
        StateLabel::BOTH.iter().all(|&s| {
            let i = s.index();
            let k = psf.sigma(s);
            let extent = [geometry.width as f64, geometry.height as f64];
            (0..2).all(|a| {
                let r = n_sigma * self.sigma[i][a].hypot(k[a]);
                self.center[i][a] - r >= 0.0 && self.center[i][a] + r <= extent[a]
            })
        })
    }
}

/// Draws `n_atoms` independent positions from the density of `state`.
pub fn sample_positions<R: Rng + ?Sized>(
    density: &CloudDensity,
    n_atoms: usize,
    state: StateLabel,
    rng: &mut R,
) -> Vec<[f64; 2]> {
    let i = state.index();
    match &density.shape {
        DensityShape::Gaussian => {
            let [cx, cy] = density.center[i];
            let [sx, sy] = density.sigma[i];
            (0..n_atoms)
                .map(|_| {
                    let u: f64 = StandardNormal.sample(rng);
                    let v: f64 = StandardNormal.sample(rng);
                    [cx + sx * u, cy + sy * v]
                })
                .collect()
        }
        DensityShape::Grid { grids } => (0..n_atoms).map(|_| grids[i].sample(rng)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_atoms() {
        let d = CloudDensity::centered(Geometry::default());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_positions(&d, 0, StateLabel::Two, &mut rng).is_empty());
    }

    #[test]
    fn gaussian_rms() {
        let d = CloudDensity::gaussian([[0.0; 2]; 2], [[3.0, 3.0]; 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = sample_positions(&d, 100_000, StateLabel::One, &mut rng);
        let rms = (p.iter().map(|q| q[0] * q[0]).sum::<f64>() / p.len() as f64).sqrt();
        assert!((rms / 3.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn default_state_sizes() {
        let d = CloudDensity::centered(Geometry::default());
        assert!((d.sigma[0][0] - d.sigma[1][0] - 0.06).abs() < 1e-12);
        assert!((d.sigma[0][1] - d.sigma[1][1] - 0.8).abs() < 1e-12);
        assert!(d.fits(Geometry::default(), &PsfModel::default(), 5.0));
        assert!(!d.fits(Geometry::new(20, 20).unwrap(), &PsfModel::default(), 5.0));
    }

    #[test]
    fn grid_sampling_stays_in_support() {
        let g = Geometry::new(4, 3).unwrap();
        let mut v = vec![0.0; 12];
        v[g.index(2, 1)] = 1.0;
        let grid = DensityGrid::new(g, v).unwrap();
        let d = CloudDensity::from_grids(grid.clone(), grid);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in sample_positions(&d, 100, StateLabel::Two, &mut rng) {
            assert!((2.0..3.0).contains(&p[0]) && (1.0..2.0).contains(&p[1]));
        }
        assert!((d.center[1][0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn bad_grid_rejected() {
        let g = Geometry::new(2, 2).unwrap();
        assert!(DensityGrid::new(g, vec![0.0; 3]).is_err());
        assert!(DensityGrid::new(g, vec![0.0; 4]).is_err());
        assert!(DensityGrid::new(g, vec![1.0, -1.0, 0.0, 0.0]).is_err());
    }
}
