//! Projection-noise calibration with coherent states.
//!
//! Only `z` readouts of horizontally split masks are needed, so shots are
//! rendered straight into column totals: an atom's kernel is integrated
//! over each column and the noise of a column total is drawn directly. This
//! has the same distribution as rendering the full frames and summing them.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::acquisition::{draw_atom_number, shot_rng};
use super::{HarnessError, RunConfig, StateKind, StatePreparer};
use crate::imaging::{
    normal_cdf, sample_positions, DetectionNoiseModel, Geometry, ImagingError, PixelProfile,
    PsfModel, StateLabel,
};
use crate::regions::{
    css_raw_fluctuation_ratio, make_pattern_masks, ColumnSums, Orientation, OverlapProfile,
    PatternDescriptor, QuadratureGrid, Region, DEFAULT_SUPERSAMPLING,
};
use crate::spin::{assign_outcomes, MeasurementAxis};

/// Column totals of a rendered shot without forming the frames.
pub fn render_column_sums<R: Rng + ?Sized>(
    positions: &[[f64; 2]],
    outcomes: &[f64],
    psf: &PsfModel,
    noise: &DetectionNoiseModel,
    geometry: Geometry,
    rng: &mut R,
) -> Result<ColumnSums, ImagingError> {
    if positions.len() != outcomes.len() {
        return Err(ImagingError::LengthMismatch {
            positions: positions.len(),
            outcomes: outcomes.len(),
        });
    }
    let mut sums = ColumnSums {
        frame1: vec![0.0; geometry.width],
        frame2: vec![0.0; geometry.width],
    };
    let mut px = PixelProfile::default();
    let h = geometry.height as f64;
    for (p, &o) in positions.iter().zip(outcomes) {
        let state = StateLabel::from_outcome(o);
        let [sx, sy] = psf.sigma(state);
        px.fill(p[0], sx, geometry.width, false);
        let rows = if sy > 0.0 {
            normal_cdf((h - p[1]) / sy) - normal_cdf(-p[1] / sy)
        } else if (0.0..h).contains(&p[1]) {
            1.0
        } else {
            0.0
        };
        let cols = match state {
            StateLabel::One => &mut sums.frame1,
            StateLabel::Two => &mut sums.frame2,
        };
        for (c, w) in cols[px.start..px.start + px.weights.len()].iter_mut().zip(&px.weights) {
            *c += w * rows;
        }
    }
    if !noise.is_off() {
        for state in StateLabel::BOTH {
            let sigma = noise.pixel_sigma(state, geometry.n_pixels()) * h.sqrt();
            let cols = match state {
                StateLabel::One => &mut sums.frame1,
                StateLabel::Two => &mut sums.frame2,
            };
            for c in cols.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *c += sigma * z;
            }
        }
    }
    Ok(sums)
}

/// Coherent-state fluctuations in region A of one horizontal split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub gap_offset: i64,
    pub splitting_ratio: f64,
    /// Mean detected atoms per shot in A.
    pub atoms_a: f64,
    pub eta_a: f64,
    /// `4 Var(S^A_z) / N^A_eff` with `N^A_eff = ⟨N₁+N₂⟩/η`.
    pub normalized_variance: f64,
    pub normalized_sem: f64,
    /// `Var(N₁−N₂)/⟨N₁+N₂⟩`, detection noise subtracted.
    pub raw_ratio: f64,
    pub raw_ratio_sem: f64,
    /// Analytic raw ratio from the per-state overlap moments.
    pub predicted_ratio: f64,
    pub shots: usize,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    d: [f64; 4],
    s: [f64; 2],
    s_b: f64,
}

impl Moments {
    fn add(&mut self, d: f64, s: f64, s_b: f64) {
        let mut p = 1.0;
        for m in self.d.iter_mut() {
            p *= d;
            *m += p;
        }
        self.s[0] += s;
        self.s[1] += s * s;
        self.s_b += s_b;
    }

    fn merge(&mut self, o: &Moments) {
        for i in 0..4 {
            self.d[i] += o.d[i];
        }
        self.s[0] += o.s[0];
        self.s[1] += o.s[1];
        self.s_b += o.s_b;
    }
}

const CHUNK: usize = 2048;

/// Streams `shots` coherent-state `z` shots and measures region-A
/// fluctuations for each horizontal gap offset. Masks are anchored on the
/// centroid of the first `pilot` shots.
pub fn css_calibration(
    config: &RunConfig,
    shots: usize,
    offsets: &[i64],
    pilot: usize,
) -> Result<Vec<CalibrationPoint>, HarnessError> {
    config.validate()?;
    if shots < 2 {
        return Err(HarnessError::Config("calibration needs at least 2 shots".into()));
    }
    let spec = {
        let mut s = config.state.clone();
        s.kind = StateKind::Coherent;
        s
    };
    let seed = config.seed;
    let (psf, noise, g) = (config.imaging.psf, config.imaging.noise, config.imaging.geometry);
    let density = config.cloud();
    let atom_numbers: Vec<usize> = (0..shots).map(|i| draw_atom_number(&spec, &mut shot_rng(seed, i as u64))).collect();
    let mut prep = StatePreparer::new(&spec, 0.0);
    let keys: Vec<_> = atom_numbers.iter().map(|&n| (n, MeasurementAxis::Z)).collect();
    prep.build(&keys)?;

    let shot = |i: usize| -> Result<ColumnSums, HarnessError> {
        let mut rng = shot_rng(seed, i as u64);
        let n = draw_atom_number(&spec, &mut rng);
        let k = prep.sample(n, MeasurementAxis::Z, 0.0, &mut rng)?;
        let outcomes = assign_outcomes(k, n, &mut rng)?;
        let mut pos2 = sample_positions(&density, k, StateLabel::Two, &mut rng).into_iter();
        let mut pos1 = sample_positions(&density, n - k, StateLabel::One, &mut rng).into_iter();
        let positions: Vec<[f64; 2]> = outcomes
            .iter()
            .map(|&o| if o > 0.0 { pos2.next() } else { pos1.next() })
            .collect::<Option<_>>()
            .expect("one position per atom");
        Ok(render_column_sums(&positions, &outcomes, &psf, &noise, g, &mut rng)?)
    };

    // anchor from the pilot's mean column profile
    let pilot = pilot.clamp(1, shots);
    let pilot_sums: Vec<ColumnSums> = (0..pilot).into_par_iter().map(shot).collect::<Result<_, _>>()?;
    let mut centroids = [[0.0, g.center()[1]]; 2];
    for state in StateLabel::BOTH {
        let (mut m, mut x) = (0.0, 0.0);
        for c in 0..g.width {
            let v: f64 = pilot_sums
                .iter()
                .map(|s| match state {
                    StateLabel::One => s.frame1[c],
                    StateLabel::Two => s.frame2[c],
                })
                .sum();
            m += v;
            x += v * (c as f64 + 0.5);
        }
        centroids[state.index()][0] = x / m;
    }

    struct Setup {
        offset: i64,
        a: Region,
        b: Region,
        predicted_moments: [(f64, f64); 2],
    }
    let setups: Vec<Setup> = offsets
        .iter()
        .map(|&offset| {
            let pattern = PatternDescriptor::Split {
                orientation: Orientation::Horizontal,
                gap_offset: offset,
                gap_width: 1,
            };
            let masks = make_pattern_masks(g, &pattern, centroids)?;
            let mut pm = [(0.0, 0.0); 2];
            for state in StateLabel::BOTH {
                let grid = QuadratureGrid::new(&density, state, g, DEFAULT_SUPERSAMPLING);
                let p = OverlapProfile::new(&grid, &psf, &masks.a);
                pm[state.index()] = (p.mean_f, p.mean_f2);
            }
            Ok(Setup {
                offset,
                a: Region::calibrate(masks.a, &density, &psf, &noise)?,
                b: Region::calibrate(masks.b, &density, &psf, &noise)?,
                predicted_moments: pm,
            })
        })
        .collect::<Result<_, HarnessError>>()?;

    let chunks: Vec<Vec<Moments>> = (0..shots.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Moments::default(); setups.len()];
            for i in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                let sums = shot(i)?;
                for (m, s) in acc.iter_mut().zip(&setups) {
                    let (a1, a2) = s.a.counts_from_columns(&sums).expect("column mask");
                    let (b1, b2) = s.b.counts_from_columns(&sums).expect("column mask");
                    m.add(a1 - a2, a1 + a2, b1 + b2);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut total = vec![Moments::default(); setups.len()];
    for c in &chunks {
        for (t, m) in total.iter_mut().zip(c) {
            t.merge(m);
        }
    }

    let nf = shots as f64;
    let n_mean = atom_numbers.iter().sum::<usize>() as f64 / nf;
    let n_var = atom_numbers.iter().map(|&n| (n as f64 - n_mean).powi(2)).sum::<f64>() / (nf - 1.0);
    Ok(setups
        .iter()
        .zip(&total)
        .map(|(s, m)| {
            let mu = m.d[0] / nf;
            let raw2 = m.d[1] / nf;
            let m2 = raw2 - mu * mu;
            let m4 = m.d[3] / nf - 4.0 * mu * m.d[2] / nf + 6.0 * mu * mu * raw2 - 3.0 * mu.powi(4);
            let var = m2 * nf / (nf - 1.0);
            let var_se = ((m4 - m2 * m2).max(0.0) / nf).sqrt();
            let noise_counts = s.a.noise_var * 4.0 * s.a.eta * s.a.eta;
            let corrected = var - noise_counts;
            let s_mean = m.s[0] / nf;
            let s_se = ((m.s[1] / nf - s_mean * s_mean).max(0.0) / nf).sqrt();
            let raw_ratio = corrected / s_mean;
            let raw_ratio_sem = raw_ratio.abs() * ((var_se / corrected).powi(2) + (s_se / s_mean).powi(2)).sqrt();
            let [p1, p2] = s.predicted_moments;
            CalibrationPoint {
                gap_offset: s.offset,
                splitting_ratio: m.s[0] / (m.s[0] + m.s_b),
                atoms_a: s_mean,
                eta_a: s.a.eta,
                normalized_variance: raw_ratio / s.a.eta,
                normalized_sem: raw_ratio_sem / s.a.eta,
                raw_ratio,
                raw_ratio_sem,
                predicted_ratio: css_raw_fluctuation_ratio(p1, p2, n_mean, n_var),
                shots,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::render_shot;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn column_render_matches_full_render() {
        let g = Geometry::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let positions: Vec<[f64; 2]> = (0..50).map(|_| [rng.gen_range(5.0..44.0), rng.gen_range(-1.0..50.0)]).collect();
        let outcomes: Vec<f64> = (0..50).map(|i| if i % 3 == 0 { 0.5 } else { -0.5 }).collect();
        let psf = PsfModel::default();
        let off = DetectionNoiseModel::off();
        let full = render_shot(&positions, &outcomes, &psf, &off, g, &mut rng).unwrap();
        let direct = ColumnSums::new(&full.images);
        let fast = render_column_sums(&positions, &outcomes, &psf, &off, g, &mut rng).unwrap();
        for c in 0..g.width {
            assert!((direct.frame1[c] - fast.frame1[c]).abs() < 1e-8);
            assert!((direct.frame2[c] - fast.frame2[c]).abs() < 1e-8);
        }
    }

    #[test]
    fn column_noise_matches_frame_noise() {
        let g = Geometry::default();
        let noise = DetectionNoiseModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 4000;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let s = render_column_sums(&[], &[], &PsfModel::default(), &noise, g, &mut rng).unwrap();
            let t: f64 = s.frame1.iter().sum();
            sum2 += t * t;
        }
        let rms = (sum2 / n as f64).sqrt();
        assert!((rms - 3.5).abs() < 0.1, "{rms}");
    }

    #[test]
    fn small_calibration_is_flat() {
        let mut c = RunConfig::coherent();
        c.state.n_mean = 200.0;
        c.state.n_sigma = 10.0;
        let pts = css_calibration(&c, 6000, &[-2, 0, 2], 500).unwrap();
        for p in &pts {
            assert!((p.normalized_variance - 1.0).abs() < 5.0 * p.normalized_sem + 0.01, "{p:?}");
            assert!(p.splitting_ratio > 0.2 && p.splitting_ratio < 0.8);
        }
        assert!(pts[0].splitting_ratio < pts[2].splitting_ratio);
    }
}
