//! Analytic criteria from exact state moments and overlap statistics.

use serde::{Deserialize, Serialize};

use super::{CriteriaError, GainPair};
use crate::regions::PairStatistics;
use crate::spin::SpinMoments;

/// Covariance of the raw weighted spins `X_U = Σᵢ sᵢ f_U(xᵢ)` and `X_V` for
/// `n` exchangeable atoms with i.i.d. positions, where `var_j` is the
/// variance of the collective component.
pub fn region_covariance(n_atoms: f64, var_j: f64, mean_u: f64, mean_v: f64, mean_uv: f64) -> f64 {
    n_atoms / 4.0 * (mean_uv - mean_u * mean_v) + var_j * mean_u * mean_v
}

/// Population values of the criteria.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelCriteria {
    pub gains_ab: GainPair,
    pub gains_ba: GainPair,
    pub sx_a: f64,
    pub sx_b: f64,
    pub e_ent: f64,
    pub e_epr_ab: f64,
    pub e_epr_ba: f64,
    pub product_a: f64,
    pub product_b: f64,
}

impl ModelCriteria {
    /// `cov_z`, `cov_y` are the 2×2 covariance matrices of `(S^A, S^B)`.
    pub fn from_covariances(
        cov_z: [[f64; 2]; 2],
        cov_y: [[f64; 2]; 2],
        sx_a: f64,
        sx_b: f64,
    ) -> Result<Self, CriteriaError> {
        if sx_a == 0.0 || sx_b == 0.0 {
            return Err(CriteriaError::ZeroDenominator);
        }
        if cov_z[0][0] <= 0.0 || cov_z[1][1] <= 0.0 || cov_y[0][0] <= 0.0 || cov_y[1][1] <= 0.0 {
            return Err(CriteriaError::ZeroDenominator);
        }
        // steering region index s, steered region t
        let infer = |c: [[f64; 2]; 2], s: usize, t: usize| {
            let g = -c[s][t] / c[s][s];
            (g, c[t][t] - c[s][t] * c[s][t] / c[s][s])
        };
        let (gz_ab, vz_ab) = infer(cov_z, 0, 1);
        let (gy_ab, vy_ab) = infer(cov_y, 0, 1);
        let (gz_ba, vz_ba) = infer(cov_z, 1, 0);
        let (gy_ba, vy_ba) = infer(cov_y, 1, 0);
        let ent_den = (gz_ab * gy_ab).abs() * sx_a.abs() + sx_b.abs();
        Ok(Self {
            gains_ab: GainPair { g_z: gz_ab, g_y: gy_ab },
            gains_ba: GainPair { g_z: gz_ba, g_y: gy_ba },
            sx_a,
            sx_b,
            e_ent: 4.0 * vz_ab * vy_ab / (ent_den * ent_den),
            e_epr_ab: 4.0 * vz_ab * vy_ab / (sx_b * sx_b),
            e_epr_ba: 4.0 * vz_ba * vy_ba / (sx_a * sx_a),
            product_a: 4.0 * cov_z[0][0] * cov_y[0][0] / (sx_a * sx_a),
            product_b: 4.0 * cov_z[1][1] * cov_y[1][1] / (sx_b * sx_b),
        })
    }

    /// Predictions for a state with mean spin along `x`, using the same
    /// overlap statistics for both image frames and local spins scaled by
    /// `1/η`.
    pub fn predict(
        moments: &SpinMoments,
        n_atoms: f64,
        stats: &PairStatistics,
        eta_a: f64,
        eta_b: f64,
    ) -> Result<Self, CriteriaError> {
        let eta = [eta_a, eta_b];
        let means = [stats.mean_a, stats.mean_b];
        let second = [[stats.mean_aa, stats.mean_ab], [stats.mean_ab, stats.mean_bb]];
        let cov = |axis: usize| {
            let v = moments.covariance[axis][axis];
            let mut c = [[0.0; 2]; 2];
            for u in 0..2 {
                for w in 0..2 {
                    c[u][w] = region_covariance(n_atoms, v, means[u], means[w], second[u][w])
                        / (eta[u] * eta[w]);
                }
            }
            c
        };
        let sx = |u: usize| moments.mean[0] * means[u] / eta[u];
        Self::from_covariances(cov(2), cov(1), sx(0), sx(1))
    }
}
