//! Atom counting inside masks and local spin samples.

use serde::{Deserialize, Serialize};

use super::{eta_eff, RegionError, RegionLabel, RegionMask};
use crate::imaging::{CloudDensity, DetectionNoiseModel, Geometry, ImagePair, PsfModel, StateLabel};
use crate::spin::MeasurementAxis;

/// Sums of the two frames over the mask, `(N₁^U, N₂^U)`.
pub fn count_atoms<T: Copy + Into<f64>>(
    images: &ImagePair<T>,
    mask: &RegionMask,
) -> Result<(f64, f64), RegionError> {
    if images.geometry != mask.geometry {
        return Err(RegionError::GeometryMismatch {
            got: mask.geometry,
            expected: images.geometry,
        });
    }
    let sum = |frame: &[T], idx: &[u32]| idx.iter().map(|&i| frame[i as usize].into()).sum::<f64>();
    Ok((
        sum(&images.frame1, mask.indices(StateLabel::One)),
        sum(&images.frame2, mask.indices(StateLabel::Two)),
    ))
}

/// Local spin measured in one region of one shot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinSample {
    /// `(N₁ − N₂) / (2 η_eff)`.
    pub value: f64,
    pub axis: MeasurementAxis,
    pub region: RegionLabel,
    pub n1: f64,
    pub n2: f64,
    /// Detection-noise variance of `value`.
    pub noise_var: f64,
}

/// Builds a sample from counts; `eta` must be positive.
pub fn extract_spin_sample(
    counts: (f64, f64),
    region: RegionLabel,
    eta: f64,
    noise_var: f64,
    axis: MeasurementAxis,
) -> SpinSample {
    SpinSample {
        value: (counts.0 - counts.1) / (2.0 * eta),
        axis,
        region,
        n1: counts.0,
        n2: counts.1,
        noise_var,
    }
}

/// Column totals of both frames of a shot; counts in masks made of whole
/// columns follow without touching every pixel again.
#[derive(Clone, Debug)]
pub struct ColumnSums {
    pub frame1: Vec<f64>,
    pub frame2: Vec<f64>,
}

impl ColumnSums {
    pub fn new<T: Copy + Into<f64>>(images: &ImagePair<T>) -> Self {
        let g = images.geometry;
        let cols = |frame: &[T]| {
            let mut out = vec![0.0; g.width];
            for row in frame.chunks_exact(g.width) {
                for (o, &v) in out.iter_mut().zip(row) {
                    *o += v.into();
                }
            }
            out
        };
        Self {
            frame1: cols(&images.frame1),
            frame2: cols(&images.frame2),
        }
    }
}

/// A mask with its calibration: `η_eff` and the detection-noise variance of
/// the local spin.
#[derive(Clone, Debug)]
pub struct Region {
    pub mask: RegionMask,
    pub eta: f64,
    pub noise_var: f64,
    columns: Option<[Vec<usize>; 2]>,
}

impl Region {
    pub fn new(mask: RegionMask, eta: f64, noise: &DetectionNoiseModel) -> Self {
        let n = mask.geometry.n_pixels();
        let noise_counts: f64 = StateLabel::BOTH
            .iter()
            .map(|&s| noise.region_variance(s, mask.pixel_count(s), n))
            .sum();
        let noise_var = noise_counts / (4.0 * eta * eta);
        let columns = match (
            mask.full_columns(StateLabel::One),
            mask.full_columns(StateLabel::Two),
        ) {
            (Some(a), Some(b)) => Some([a, b]),
            _ => None,
        };
        Self {
            mask,
            eta,
            noise_var,
            columns,
        }
    }

    /// Computes `η_eff` from the density and kernel, then calibrates.
    pub fn calibrate(
        mask: RegionMask,
        density: &CloudDensity,
        psf: &PsfModel,
        noise: &DetectionNoiseModel,
    ) -> Result<Self, RegionError> {
        let eta = eta_eff(density, psf, &mask)?;
        Ok(Self::new(mask, eta, noise))
    }

    pub fn label(&self) -> RegionLabel {
        self.mask.label
    }

    pub fn geometry(&self) -> Geometry {
        self.mask.geometry
    }

    pub fn extract<T: Copy + Into<f64>>(
        &self,
        images: &ImagePair<T>,
        axis: MeasurementAxis,
    ) -> Result<SpinSample, RegionError> {
        let counts = count_atoms(images, &self.mask)?;
        Ok(extract_spin_sample(counts, self.label(), self.eta, self.noise_var, axis))
    }

    /// Counts from column totals when the mask is made of whole columns.
    pub fn counts_from_columns(&self, sums: &ColumnSums) -> Option<(f64, f64)> {
        let [c1, c2] = self.columns.as_ref()?;
        Some((
            c1.iter().map(|&c| sums.frame1[c]).sum(),
            c2.iter().map(|&c| sums.frame2[c]).sum(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{make_split_masks, Orientation};

    #[test]
    fn uniform_image_counts_pixels() {
        let g = Geometry::new(10, 10).unwrap();
        let mut img = ImagePair::<f64>::zeros(g);
        img.frame1.iter_mut().for_each(|v| *v = 1.0);
        let mut grid = vec![false; 100];
        grid[..10].iter_mut().for_each(|b| *b = true);
        let pat = crate::regions::PatternDescriptor::Pixels {
            a: vec![],
            b: vec![],
        };
        let m = RegionMask::from_grids(RegionLabel::A, g, pat.clone(), grid.clone(), grid);
        assert_eq!(count_atoms(&img, &m).unwrap(), (10.0, 0.0));
        let empty = RegionMask::from_grids(RegionLabel::A, g, pat, vec![false; 100], vec![false; 100]);
        assert_eq!(count_atoms(&img, &empty).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn sample_arithmetic() {
        let s = extract_spin_sample((6.0, 4.0), RegionLabel::A, 1.0, 0.0, MeasurementAxis::Z);
        assert_eq!(s.value, 1.0);
    }

    #[test]
    fn column_path_matches_pixel_path() {
        let g = Geometry::default();
        let mut img = ImagePair::<f32>::zeros(g);
        for (i, v) in img.frame1.iter_mut().enumerate() {
            *v = (i % 7) as f32 * 0.25;
        }
        for (i, v) in img.frame2.iter_mut().enumerate() {
            *v = (i % 5) as f32 * 0.5;
        }
        let m = make_split_masks(g, Orientation::Horizontal, 20, 2).unwrap();
        let r = Region::new(m.b, 0.9, &DetectionNoiseModel::default());
        let direct = count_atoms(&img, &r.mask).unwrap();
        let fast = r.counts_from_columns(&ColumnSums::new(&img)).unwrap();
        assert!((direct.0 - fast.0).abs() < 1e-9 && (direct.1 - fast.1).abs() < 1e-9);
    }

    #[test]
    fn noise_variance_scales_with_area_and_eta() {
        let g = Geometry::default();
        let m = make_split_masks(g, Orientation::Horizontal, 24, 1).unwrap();
        let noise = DetectionNoiseModel::default();
        let r = Region::new(m.a, 0.5, &noise);
        let frac = 24.0 / 49.0;
        let expected = (3.5f64.powi(2) + 3.3f64.powi(2)) * frac / (4.0 * 0.25);
        assert!((r.noise_var - expected).abs() < 1e-12);
    }
}
