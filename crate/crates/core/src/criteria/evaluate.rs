//! Per-subset entanglement and EPR criteria.

use serde::{Deserialize, Serialize};

use super::estimators::{mean, optimal_gain, residual_variance, sample_variance, subtract_noise};
use super::{CriteriaError, SubsetBlock};
use crate::regions::RegionLabel;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GainPair {
    pub g_z: f64,
    pub g_y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainMode {
    /// Closed-form noise-corrected regression gains per subset.
    Auto,
    Fixed(GainPair),
}

/// Which region is steered: `AToB` infers B's spin from A's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AToB,
    BToA,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationOptions {
    pub gains: GainMode,
    pub subtract_noise: bool,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        Self {
            gains: GainMode::Auto,
            subtract_noise: true,
        }
    }
}

/// `|⟨S^U_x⟩| = |mean(+x) − mean(−x)| / 2`.
pub fn mean_sx(block: &SubsetBlock, region: RegionLabel) -> Result<f64, CriteriaError> {
    if block.plus_x.is_empty() {
        return Err(CriteriaError::MissingAxis("plus_x"));
    }
    if block.minus_x.is_empty() {
        return Err(CriteriaError::MissingAxis("minus_x"));
    }
    Ok((mean(block.plus_x.get(region)) - mean(block.minus_x.get(region))).abs() / 2.0)
}

/// Inferred variances for one steering direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InferredPair {
    pub gains: GainPair,
    pub fallbacks: usize,
    pub var_z_raw: f64,
    pub var_y_raw: f64,
    pub var_z: f64,
    pub var_y: f64,
}

fn inferred(
    steering: (&[f64], &[f64]),
    steered: (&[f64], &[f64]),
    noise: (f64, f64),
    opts: &EvaluationOptions,
) -> Result<InferredPair, CriteriaError> {
    let (nz_a, nz_b) = if opts.subtract_noise { noise } else { (0.0, 0.0) };
    let (mut gains, mut fallbacks, dof) = match opts.gains {
        GainMode::Fixed(g) => (g, 0, 1),
        GainMode::Auto => (GainPair::default(), 0, 2),
    };
    if let GainMode::Auto = opts.gains {
        let gz = optimal_gain(steering.0, steered.0, nz_a)?;
        let gy = optimal_gain(steering.1, steered.1, nz_a)?;
        gains = GainPair { g_z: gz.g, g_y: gy.g };
        fallbacks = gz.fallback as usize + gy.fallback as usize;
    }
    let var_z_raw = residual_variance(steering.0, steered.0, gains.g_z, dof)?;
    let var_y_raw = residual_variance(steering.1, steered.1, gains.g_y, dof)?;
    Ok(InferredPair {
        gains,
        fallbacks,
        var_z_raw,
        var_y_raw,
        var_z: subtract_noise(var_z_raw, gains.g_z, nz_a, nz_b),
        var_y: subtract_noise(var_y_raw, gains.g_y, nz_a, nz_b),
    })
}

/// All criteria of one subset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCriteria {
    pub subset: usize,
    pub sx_a: f64,
    pub sx_b: f64,
    pub a_to_b: InferredPair,
    pub b_to_a: InferredPair,
    pub e_ent: f64,
    pub e_epr_ab: f64,
    pub e_epr_ba: f64,
    /// Non-inferred uncertainty products `4 Var(S_z) Var(S_y) / ⟨S_x⟩²`.
    pub product_a: f64,
    pub product_b: f64,
    /// A noise-subtracted variance came out negative.
    pub negative_variance: bool,
}

fn product(z: &[f64], y: &[f64], noise: f64, sx: f64) -> Result<f64, CriteriaError> {
    if z.len() < 2 || y.len() < 2 {
        return Err(CriteriaError::TooFewSamples {
            needed: 2,
            got: z.len().min(y.len()),
        });
    }
    if sx == 0.0 {
        return Err(CriteriaError::ZeroDenominator);
    }
    Ok(4.0 * (sample_variance(z) - noise) * (sample_variance(y) - noise) / (sx * sx))
}

pub fn evaluate_block(block: &SubsetBlock, opts: &EvaluationOptions) -> Result<BlockCriteria, CriteriaError> {
    if block.z.is_empty() {
        return Err(CriteriaError::MissingAxis("z"));
    }
    if block.y.is_empty() {
        return Err(CriteriaError::MissingAxis("y"));
    }
    let sx_a = mean_sx(block, RegionLabel::A)?;
    let sx_b = mean_sx(block, RegionLabel::B)?;
    let (na, nb) = (block.noise_var_a, block.noise_var_b);
    let a_to_b = inferred((&block.z.a, &block.y.a), (&block.z.b, &block.y.b), (na, nb), opts)?;
    let b_to_a = inferred((&block.z.b, &block.y.b), (&block.z.a, &block.y.a), (nb, na), opts)?;
    let ratio = |num: f64, den: f64| {
        if den == 0.0 {
            Err(CriteriaError::ZeroDenominator)
        } else {
            Ok(num / (den * den))
        }
    };
    let num_ab = 4.0 * a_to_b.var_z * a_to_b.var_y;
    let num_ba = 4.0 * b_to_a.var_z * b_to_a.var_y;
    let ent_den = (a_to_b.gains.g_z * a_to_b.gains.g_y).abs() * sx_a + sx_b;
    let (pna, pnb) = if opts.subtract_noise { (na, nb) } else { (0.0, 0.0) };
    Ok(BlockCriteria {
        subset: block.subset,
        sx_a,
        sx_b,
        e_ent: ratio(num_ab, ent_den)?,
        e_epr_ab: ratio(num_ab, sx_b)?,
        e_epr_ba: ratio(num_ba, sx_a)?,
        product_a: product(&block.z.a, &block.y.a, pna, sx_a)?,
        product_b: product(&block.z.b, &block.y.b, pnb, sx_b)?,
        negative_variance: [a_to_b.var_z, a_to_b.var_y, b_to_a.var_z, b_to_a.var_y]
            .iter()
            .any(|v| *v < 0.0),
        a_to_b,
        b_to_a,
    })
}

/// `E_Ent = 4 Var_inf(z) Var_inf(y) / (|g_z g_y| |⟨S^A_x⟩| + |⟨S^B_x⟩|)²`.
pub fn entanglement_criterion(block: &SubsetBlock, opts: &EvaluationOptions) -> Result<f64, CriteriaError> {
    Ok(evaluate_block(block, opts)?.e_ent)
}

/// EPR criterion for `direction` and the steered region's non-inferred product.
pub fn epr_criterion(
    block: &SubsetBlock,
    direction: Direction,
    opts: &EvaluationOptions,
) -> Result<(f64, f64), CriteriaError> {
    let c = evaluate_block(block, opts)?;
    Ok(match direction {
        Direction::AToB => (c.e_epr_ab, c.product_b),
        Direction::BToA => (c.e_epr_ba, c.product_a),
    })
}
