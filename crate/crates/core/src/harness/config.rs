//! Run configuration, read from and written to TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::criteria::{EvaluationOptions, GainMode};
use crate::imaging::{CloudDensity, DetectionNoiseModel, Geometry, PsfModel};
use crate::regions::{Orientation, PatternDescriptor};
use crate::spin::tune_twist;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Coherent,
    Squeezed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StateSpec {
    pub kind: StateKind,
    pub n_mean: f64,
    /// Shot-to-shot spread of the atom number (Gaussian, truncated at 0).
    pub n_sigma: f64,
    /// Wineland target used to tune the twist when `mu` is absent.
    pub target_db: f64,
    pub mu: Option<f64>,
    /// Fixed rotation about the mean spin after twisting; when absent the
    /// squeezed quadrature is aligned with `z`.
    pub tilt_deg: Option<f64>,
    /// Rms of a per-shot phase rotation about `z` before readout (rad).
    pub phase_noise: f64,
}

impl Default for StateSpec {
    fn default() -> Self {
        Self {
            kind: StateKind::Squeezed,
            n_mean: 590.0,
            n_sigma: 30.0,
            target_db: -3.8,
            mu: None,
            tilt_deg: None,
            phase_noise: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ImagingSpec {
    pub geometry: Geometry,
    /// Defaults to the centred per-state Gaussian cloud.
    pub cloud: Option<CloudDensity>,
    pub psf: PsfModel,
    pub noise: DetectionNoiseModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcquisitionSpec {
    pub plus_x: usize,
    pub minus_x: usize,
    pub y: usize,
    pub z: usize,
    pub subsets: usize,
    /// Keep per-atom positions and outcomes alongside the images.
    pub store_truth: bool,
}

impl Default for AcquisitionSpec {
    fn default() -> Self {
        Self {
            plus_x: 4,
            minus_x: 4,
            y: 70,
            z: 60,
            subsets: 40,
            store_truth: false,
        }
    }
}

impl AcquisitionSpec {
    pub fn shots_per_subset(&self) -> usize {
        self.plus_x + self.minus_x + self.y + self.z
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub orientation: Orientation,
    /// Gap positions relative to each state's centroid pixel.
    pub gap_offsets: Vec<i64>,
    pub gap_widths: Vec<usize>,
    /// Splitting ratio at which the width sweep is centred.
    pub target_ratio: f64,
    pub subtract_noise: bool,
    pub gains: GainMode,
    pub patterns: Vec<PatternDescriptor>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            orientation: Orientation::Horizontal,
            gap_offsets: (-4..=4).collect(),
            gap_widths: (1..=11).collect(),
            target_ratio: 0.40,
            subtract_noise: true,
            gains: GainMode::Auto,
            patterns: PatternDescriptor::library(),
        }
    }
}

impl SweepSpec {
    pub fn options(&self) -> EvaluationOptions {
        EvaluationOptions {
            gains: self.gains,
            subtract_noise: self.subtract_noise,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(with = "seed_format")]
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub state: StateSpec,
    pub imaging: ImagingSpec,
    pub acquisition: AcquisitionSpec,
    pub sweep: SweepSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20180426,
            out: None,
            state: StateSpec::default(),
            imaging: ImagingSpec::default(),
            acquisition: AcquisitionSpec::default(),
            sweep: SweepSpec::default(),
        }
    }
}

impl RunConfig {
    pub fn coherent() -> Self {
        let mut c = Self::default();
        c.state.kind = StateKind::Coherent;
        c
    }

    pub fn from_toml_str(s: &str) -> Result<Self, HarnessError> {
        let c: RunConfig = toml::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let s = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
        Self::from_toml_str(&s)
    }

    pub fn to_toml(&self) -> Result<String, HarnessError> {
        toml::to_string(self).map_err(|e| HarnessError::Serialize(e.to_string()))
    }

    pub fn cloud(&self) -> CloudDensity {
        self.imaging
            .cloud
            .clone()
            .unwrap_or_else(|| CloudDensity::centered(self.imaging.geometry))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        let s = &self.state;
        if !(s.n_mean.is_finite() && s.n_mean >= 1.0) {
            return bad(format!("state.n_mean must be at least 1, got {}", s.n_mean));
        }
        if !(s.n_sigma.is_finite() && s.n_sigma >= 0.0) {
            return bad(format!("state.n_sigma must be non-negative, got {}", s.n_sigma));
        }
        if !(s.phase_noise.is_finite() && s.phase_noise >= 0.0) {
            return bad(format!("state.phase_noise must be non-negative, got {}", s.phase_noise));
        }
        if let Some(mu) = s.mu {
            if !(mu.is_finite() && mu >= 0.0) {
                return bad(format!("state.mu must be non-negative, got {mu}"));
            }
        }
        if s.tilt_deg.is_some_and(|t| !t.is_finite()) || !s.target_db.is_finite() {
            return bad("state.tilt_deg and state.target_db must be finite".into());
        }
        self.imaging.psf.validate()?;
        self.imaging.noise.validate()?;
        self.cloud().validate()?;
        let a = &self.acquisition;
        if a.plus_x == 0 || a.minus_x == 0 || a.y < 3 || a.z < 3 {
            return bad("each subset needs ±x samples and at least 3 y and 3 z samples".into());
        }
        if a.subsets < 2 {
            return bad(format!("at least 2 subsets are needed, got {}", a.subsets));
        }
        let w = &self.sweep;
        if w.gap_widths.contains(&0) {
            return bad("gap widths must be positive".into());
        }
        if !(w.target_ratio > 0.0 && w.target_ratio < 1.0) {
            return bad(format!("sweep.target_ratio must lie in (0, 1), got {}", w.target_ratio));
        }
        Ok(())
    }

    /// Twist strength: the configured `mu`, otherwise tuned to `target_db` at
    /// the mean atom number. Zero for coherent states.
    pub fn resolve_twist(&self) -> Result<f64, HarnessError> {
        match (self.state.kind, self.state.mu) {
            (StateKind::Coherent, _) => Ok(0.0),
            (StateKind::Squeezed, Some(mu)) => Ok(mu),
            (StateKind::Squeezed, None) => {
                Ok(tune_twist(self.state.n_mean.round() as usize, self.state.target_db)?.mu)
            }
        }
    }
}

/// TOML integers are signed 64-bit; larger seeds are written as strings.
mod seed_format {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*seed) {
            Ok(v) => v.serialize(s),
            Err(_) => seed.to_string().serialize(s),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => u64::try_from(v).map_err(serde::de::Error::custom),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
