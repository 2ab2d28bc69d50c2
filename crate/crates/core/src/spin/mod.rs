//! Collective spin states of N two-level bosons.

mod moments;
mod partition;
mod rotation;
mod sampling;
mod squeezing;
mod state;

pub use moments::{spin_moments, SpinMoments, TransverseVariances};
pub use partition::{partitioned_moments_exact, PartitionedMoments};
pub use rotation::{rotate, rotation_matrix, zyz_euler, SpinRotation, WignerD, AXIS_TOLERANCE};
pub use sampling::{assign_outcomes, sample_excitation_count, ExcitationSampler, Outcome};
pub use squeezing::{
    kitagawa_ueda, squeezed_state, tune_twist, KitagawaUeda, SqueezedState, TwistTuning,
};
pub use state::{coherent_state, one_axis_twist, DickeState, NORM_TOLERANCE};

pub(crate) use moments::{cross, dot, norm, scale};

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("a spin state needs at least one atom")]
    NoAtoms,
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("excitation count {k} outside 0..={n_atoms}")]
    ExcitationOutOfRange { k: usize, n_atoms: usize },
    #[error("rotation axis has length {0}, expected 1")]
    NonUnitAxis(f64),
    #[error("overlap weight {value} at atom {index} outside [0, 1]")]
    WeightOutOfRange { index: usize, value: f64 },
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("state has zero polarization")]
    ZeroPolarization,
    #[error("squeezing target {target_db} dB not reachable (best {best_db} dB)")]
    TargetUnreachable { target_db: f64, best_db: f64 },
}

/// Spin component read out by a shot.
///
/// States are prepared with the mean spin along `+x` and the squeezed
/// quadrature along `z`; the readout rotation maps the chosen component onto
/// the measured `z` axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementAxis {
    PlusX,
    MinusX,
    Y,
    Z,
}

impl MeasurementAxis {
    pub const ALL: [MeasurementAxis; 4] = [Self::PlusX, Self::MinusX, Self::Y, Self::Z];

    pub fn label(self) -> &'static str {
        match self {
            Self::PlusX => "plus_x",
            Self::MinusX => "minus_x",
            Self::Y => "y",
            Self::Z => "z",
        }
    }

    /// Rotation axis and angle applied before projection; `None` for `z`.
    pub fn rotation(self) -> Option<([f64; 3], f64)> {
        match self {
            Self::Z => None,
            Self::Y => Some(([1.0, 0.0, 0.0], FRAC_PI_2)),
            Self::PlusX => Some(([0.0, 1.0, 0.0], FRAC_PI_2)),
            Self::MinusX => Some(([0.0, 1.0, 0.0], -FRAC_PI_2)),
        }
    }

    pub fn spin_rotation(self, n_atoms: usize) -> Result<Option<SpinRotation>, SpinError> {
        self.rotation()
            .map(|(axis, angle)| SpinRotation::new(n_atoms, axis, angle))
            .transpose()
    }
}

impl std::fmt::Display for MeasurementAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for MeasurementAxis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| format!("unknown measurement axis `{s}`"))
    }
}
