//! Synthetic acquisition: state preparation, readout, rendering.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AcquisitionSpec, HarnessError, RunConfig, StateKind, StateSpec};
use crate::imaging::{render_shot, sample_positions, Geometry, ImagePair, StateLabel};
use crate::spin::{
    assign_outcomes, coherent_state, squeezed_state, DickeState, ExcitationSampler,
    MeasurementAxis, SpinRotation,
};

/// Per-shot random stream: the master seed with the shot index as stream id.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// `(subset, axis)` of every shot, subsets in order, each as ±x, y, z.
pub fn acquisition_schedule(spec: &AcquisitionSpec) -> Vec<(usize, MeasurementAxis)> {
    let block = [
        (MeasurementAxis::PlusX, spec.plus_x),
        (MeasurementAxis::MinusX, spec.minus_x),
        (MeasurementAxis::Y, spec.y),
        (MeasurementAxis::Z, spec.z),
    ];
    (0..spec.subsets)
        .flat_map(|s| {
            block
                .iter()
                .flat_map(move |&(axis, count)| std::iter::repeat((s, axis)).take(count))
        })
        .collect()
}

enum Readout {
    Fixed(ExcitationSampler),
    /// Phase noise requires rotating each shot's state separately.
    Noisy(DickeState, SpinRotation),
}

/// Prepared states and readout distributions, cached per atom number and axis.
pub struct StatePreparer {
    kind: StateKind,
    mu: f64,
    tilt: Option<f64>,
    phase_noise: f64,
    readouts: HashMap<(usize, MeasurementAxis), Readout>,
}

impl StatePreparer {
    pub fn new(spec: &StateSpec, mu: f64) -> Self {
        Self {
            kind: spec.kind,
            mu,
            tilt: spec.tilt_deg.map(f64::to_radians),
            phase_noise: spec.phase_noise,
            readouts: HashMap::new(),
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The state before readout, mean spin along `+x`.
    pub fn prepare(&self, n_atoms: usize) -> Result<DickeState, HarnessError> {
        Ok(match self.kind {
            StateKind::Coherent => coherent_state(n_atoms, std::f64::consts::FRAC_PI_2, 0.0)?,
            StateKind::Squeezed => squeezed_state(n_atoms, self.mu, self.tilt)?.state,
        })
    }

    /// Builds the readouts for the given keys (skipping cached ones).
    pub fn build(&mut self, keys: &[(usize, MeasurementAxis)]) -> Result<(), HarnessError> {
        let mut by_n: HashMap<usize, Vec<MeasurementAxis>> = HashMap::new();
        for &(n, axis) in keys {
            if n > 0 && !self.readouts.contains_key(&(n, axis)) {
                let axes = by_n.entry(n).or_default();
                if !axes.contains(&axis) {
                    axes.push(axis);
                }
            }
        }
        let mut work: Vec<_> = by_n.into_iter().collect();
        work.sort_unstable_by_key(|w| w.0);
        let built: Vec<Vec<((usize, MeasurementAxis), Readout)>> = work
            .par_iter()
            .map(|(n, axes)| {
                let state = self.prepare(*n)?;
                axes.iter()
                    .map(|&axis| {
                        let readout = match axis.spin_rotation(*n)? {
                            None => Readout::Fixed(ExcitationSampler::new(&state)),
                            Some(r) if self.phase_noise > 0.0 => Readout::Noisy(state.clone(), r),
                            Some(r) => Readout::Fixed(ExcitationSampler::new(&r.apply(&state))),
                        };
                        Ok(((*n, axis), readout))
                    })
                    .collect::<Result<Vec<_>, HarnessError>>()
            })
            .collect::<Result<_, _>>()?;
        self.readouts.extend(built.into_iter().flatten());
        Ok(())
    }

    /// Draws the excitation count of one readout; `phase` is the shot's
    /// extra rotation about `z` before the readout pulse.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        n_atoms: usize,
        axis: MeasurementAxis,
        phase: f64,
        rng: &mut R,
    ) -> Result<usize, HarnessError> {
        if n_atoms == 0 {
            return Ok(0);
        }
        let readout = self
            .readouts
            .get(&(n_atoms, axis))
            .ok_or_else(|| HarnessError::Config(format!("readout for N={n_atoms} {axis} not built")))?;
        Ok(match readout {
            Readout::Fixed(s) => s.sample(rng),
            Readout::Noisy(state, r) => ExcitationSampler::new(&r.apply_with_z_phase(state, phase)).sample(rng),
        })
    }
}

/// Per-atom ground truth of a shot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotTruth {
    pub positions: Vec<[f64; 2]>,
    pub outcomes: Vec<f64>,
}

/// Manifest line for one shot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotEntry {
    pub index: usize,
    pub subset: usize,
    pub axis: MeasurementAxis,
    pub n_atoms: usize,
    /// Atoms found in `|2⟩`.
    pub k: usize,
    /// The cloud does not fit the image at 5σ; counts are biased low.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShotRecord {
    pub entry: ShotEntry,
    pub images: ImagePair<f32>,
    pub truth: Option<ShotTruth>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    #[serde(with = "seed_string")]
    pub seed: u64,
    pub geometry: Geometry,
    pub mu: f64,
    /// Exact Wineland value of the prepared state at the mean atom number.
    pub wineland_db: f64,
    pub has_truth: bool,
    pub config: RunConfig,
    pub shots: Vec<ShotEntry>,
}

mod seed_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&seed.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShotDataset {
    pub manifest: Manifest,
    pub shots: Vec<ShotRecord>,
}

impl ShotDataset {
    pub fn config(&self) -> &RunConfig {
        &self.manifest.config
    }

    pub fn geometry(&self) -> Geometry {
        self.manifest.geometry
    }
}

pub(crate) fn draw_atom_number<R: Rng + ?Sized>(spec: &StateSpec, rng: &mut R) -> usize {
    let n = if spec.n_sigma > 0.0 {
        Normal::new(spec.n_mean, spec.n_sigma)
            .expect("validated spread")
            .sample(rng)
    } else {
        spec.n_mean
    };
    n.round().max(0.0) as usize
}

/// Generates the dataset described by `config`. Shots are independent and
/// generated in parallel; the result depends only on the configuration.
pub fn run_acquisition(config: &RunConfig) -> Result<ShotDataset, HarnessError> {
    config.validate()?;
    let schedule = acquisition_schedule(&config.acquisition);
    let seed = config.seed;
    let spec = &config.state;
    let atom_numbers: Vec<usize> = (0..schedule.len())
        .map(|i| draw_atom_number(spec, &mut shot_rng(seed, i as u64)))
        .collect();
    let mu = config.resolve_twist()?;
    let mut prep = StatePreparer::new(spec, mu);
    let keys: Vec<_> = atom_numbers
        .iter()
        .zip(&schedule)
        .map(|(&n, &(_, axis))| (n, axis))
        .collect();
    prep.build(&keys)?;

    let density = config.cloud();
    let (psf, noise, geometry) = (config.imaging.psf, config.imaging.noise, config.imaging.geometry);
    let truncated = !density.fits(geometry, &psf, 5.0);
    let store_truth = config.acquisition.store_truth;
    let phase = Normal::new(0.0, spec.phase_noise.max(f64::MIN_POSITIVE)).expect("finite");

    let shots = schedule
        .par_iter()
        .enumerate()
        .map(|(i, &(subset, axis))| {
            let mut rng = shot_rng(seed, i as u64);
            let n = draw_atom_number(spec, &mut rng);
            let phi = if spec.phase_noise > 0.0 { phase.sample(&mut rng) } else { 0.0 };
            let k = prep.sample(n, axis, phi, &mut rng)?;
            let outcomes = assign_outcomes(k, n, &mut rng)?;
            let mut pos2 = sample_positions(&density, k, StateLabel::Two, &mut rng).into_iter();
            let mut pos1 = sample_positions(&density, n - k, StateLabel::One, &mut rng).into_iter();
            let positions: Vec<[f64; 2]> = outcomes
                .iter()
                .map(|&o| match StateLabel::from_outcome(o) {
                    StateLabel::Two => pos2.next(),
                    StateLabel::One => pos1.next(),
                })
                .collect::<Option<_>>()
                .expect("one position per atom");
            let rendered = render_shot(&positions, &outcomes, &psf, &noise, geometry, &mut rng)?;
            Ok(ShotRecord {
                entry: ShotEntry {
                    index: i,
                    subset,
                    axis,
                    n_atoms: n,
                    k,
                    truncated,
                },
                images: rendered.images.to_f32(),
                truth: store_truth.then_some(ShotTruth { positions, outcomes }),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let n_ref = (spec.n_mean.round() as usize).max(1);
    let wineland_db = match spec.kind {
        StateKind::Coherent => 0.0,
        StateKind::Squeezed => 10.0 * squeezed_state(n_ref, mu, prep.tilt)?.wineland().log10(),
    };
    Ok(ShotDataset {
        manifest: Manifest {
            format_version: 1,
            seed,
            geometry,
            mu,
            wineland_db,
            has_truth: store_truth,
            config: config.clone(),
            shots: shots.iter().map(|s| s.entry.clone()).collect(),
        },
        shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: StateKind) -> RunConfig {
        let mut c = RunConfig::default();
        c.state.kind = kind;
        c.state.n_mean = 60.0;
        c.state.n_sigma = 3.0;
        c.state.mu = Some(0.05);
        c.acquisition = AcquisitionSpec {
            plus_x: 1,
            minus_x: 1,
            y: 3,
            z: 3,
            subsets: 2,
            store_truth: true,
        };
        c
    }

    #[test]
    fn schedule_order_and_counts() {
        let s = acquisition_schedule(&AcquisitionSpec::default());
        assert_eq!(s.len(), 40 * 138);
        assert_eq!(s[0], (0, MeasurementAxis::PlusX));
        assert_eq!(s[4], (0, MeasurementAxis::MinusX));
        assert_eq!(s[8], (0, MeasurementAxis::Y));
        assert_eq!(s[78], (0, MeasurementAxis::Z));
        assert_eq!(s[138], (1, MeasurementAxis::PlusX));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let c = small(StateKind::Squeezed);
        let a = run_acquisition(&c).unwrap();
        assert_eq!(a, run_acquisition(&c).unwrap());
        let mut d = c.clone();
        d.seed += 1;
        assert_ne!(a.shots[0].images, run_acquisition(&d).unwrap().shots[0].images);
    }

    #[test]
    fn truth_is_consistent() {
        let ds = run_acquisition(&small(StateKind::Coherent)).unwrap();
        for s in &ds.shots {
            let t = s.truth.as_ref().unwrap();
            assert_eq!(t.outcomes.len(), s.entry.n_atoms);
            assert_eq!(t.outcomes.iter().filter(|&&o| o > 0.0).count(), s.entry.k);
            assert!(!s.entry.truncated);
        }
    }

    #[test]
    fn phase_noise_path_runs() {
        let mut c = small(StateKind::Squeezed);
        c.state.phase_noise = 0.05;
        let ds = run_acquisition(&c).unwrap();
        assert_eq!(ds.shots.len(), 16);
    }
}
