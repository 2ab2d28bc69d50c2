//! Entanglement and EPR-steering criteria from local spin samples.

mod block;
mod crosstalk;
mod estimators;
mod evaluate;
mod model;
mod wineland;

pub use block::{AxisSamples, SubsetBlock};
pub use crosstalk::{crosstalk_floor, crosstalk_from_statistics, CrosstalkFloor};
pub use estimators::{
    aggregate_subsets, inferred_variance, mean, optimal_gain, residual_variance,
    sample_covariance, sample_variance, subtract_noise, Aggregate, GainEstimate,
};
pub use evaluate::{
    entanglement_criterion, epr_criterion, evaluate_block, mean_sx, BlockCriteria, Direction,
    EvaluationOptions, GainMode, GainPair,
};
pub use model::{region_covariance, ModelCriteria};
pub use wineland::{wineland_from_samples, wineland_parameter, Wineland};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample vectors differ in length ({a} vs {b})")]
    LengthMismatch { a: usize, b: usize },
    #[error("no samples for axis {0}")]
    MissingAxis(&'static str),
    #[error("criterion denominator is zero")]
    ZeroDenominator,
    #[error("need at least 2 subsets to aggregate, got {0}")]
    TooFewSubsets(usize),
    #[error("zero polarization")]
    ZeroPolarization,
    #[error("noise variance {0} is negative")]
    NegativeNoise(f64),
    #[error(transparent)]
    Region(#[from] crate::regions::RegionError),
}
