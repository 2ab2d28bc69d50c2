//! Exact moments of region-weighted local spins of a symmetric state.
//!
//! For a symmetric state every atom has the same single-atom marginal and
//! every pair the same two-atom marginal, so weighted sums `Σ wᵢ sᵢ` only
//! need `E[sᵢ]` and `E[sᵢ sⱼ]` (i ≠ j), both fixed by `⟨Jz⟩` and `⟨Jz²⟩`.

use super::{DickeState, SpinError};

/// Moments of `S^U = Σᵢ wᵢ^U sᵢ` for two weight vectors, with `sᵢ = ±1/2`
/// and `+1/2` for `|2⟩` (the `Jz` sign convention).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionedMoments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub cov_ab: f64,
    /// `Σw² / Σw`; `NaN` when the weights sum to zero.
    pub eta_a: f64,
    pub eta_b: f64,
    /// `Σw`, the expected number of atoms the region collects.
    pub weight_a: f64,
    pub weight_b: f64,
}

impl PartitionedMoments {
    /// `Σw / η`, the atom number a normalized local spin represents.
    pub fn effective_atoms_a(&self) -> f64 {
        self.weight_a / self.eta_a
    }

    pub fn effective_atoms_b(&self) -> f64 {
        self.weight_b / self.eta_b
    }

    /// Moments of the normalized spins `S^U / η^U`.
    pub fn normalized(&self) -> PartitionedMoments {
        let (ea, eb) = (self.eta_a, self.eta_b);
        PartitionedMoments {
            mean_a: self.mean_a / ea,
            mean_b: self.mean_b / eb,
            var_a: self.var_a / (ea * ea),
            var_b: self.var_b / (eb * eb),
            cov_ab: self.cov_ab / (ea * eb),
            eta_a: 1.0,
            eta_b: 1.0,
            ..*self
        }
    }
}

fn check_weights(w: &[f64], n: usize) -> Result<(), SpinError> {
    if w.len() != n {
        return Err(SpinError::WeightLength {
            got: w.len(),
            expected: n,
        });
    }
    match w.iter().position(|x| !(0.0..=1.0).contains(x)) {
        Some(index) => Err(SpinError::WeightOutOfRange {
            index,
            value: w[index],
        }),
        None => Ok(()),
    }
}

/// Exact `z` moments of the weighted local spins; rotate the state first to
/// obtain another component.
pub fn partitioned_moments_exact(
    state: &DickeState,
    overlaps_a: &[f64],
    overlaps_b: &[f64],
) -> Result<PartitionedMoments, SpinError> {
    let n = state.n_atoms();
    check_weights(overlaps_a, n)?;
    check_weights(overlaps_b, n)?;
    let nf = n as f64;
    let j = state.j();
    let (mut jz, mut jz2) = (0.0, 0.0);
    for (k, p) in state.probabilities().into_iter().enumerate() {
        let m = k as f64 - j;
        jz += p * m;
        jz2 += p * m * m;
    }
    let e1 = jz / nf;
    let e2 = if n > 1 {
        (jz2 - nf / 4.0) / (nf * (nf - 1.0))
    } else {
        0.0
    };

    let sum = |w: &[f64]| w.iter().sum::<f64>();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let (sa, sb) = (sum(overlaps_a), sum(overlaps_b));
    let (aa, bb, ab) = (
        dot(overlaps_a, overlaps_a),
        dot(overlaps_b, overlaps_b),
        dot(overlaps_a, overlaps_b),
    );
    // E[S^U S^V] = Σ uᵢvᵢ/4 + (ΣuΣv − Σuᵢvᵢ) E[sᵢsⱼ]
    let second = |uv: f64, su: f64, sv: f64| uv / 4.0 + (su * sv - uv) * e2;
    let (mean_a, mean_b) = (sa * e1, sb * e1);
    Ok(PartitionedMoments {
        mean_a,
        mean_b,
        var_a: second(aa, sa, sa) - mean_a * mean_a,
        var_b: second(bb, sb, sb) - mean_b * mean_b,
        cov_ab: second(ab, sa, sb) - mean_a * mean_b,
        eta_a: aa / sa,
        eta_b: bb / sb,
        weight_a: sa,
        weight_b: sb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{coherent_state, one_axis_twist, spin_moments};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn binomial(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    /// Enumerates all 2^N outcome strings with `P(string) = |c_k|² / C(N,k)`.
    fn enumerate(state: &DickeState, wa: &[f64], wb: &[f64]) -> [f64; 5] {
        let n = state.n_atoms();
        let p = state.probabilities();
        let mut acc = [0.0; 5];
        for bits in 0u32..(1 << n) {
            let k = bits.count_ones() as usize;
            let prob = p[k] / binomial(n, k);
            let s = |i: usize| if bits >> i & 1 == 1 { 0.5 } else { -0.5 };
            let a: f64 = (0..n).map(|i| wa[i] * s(i)).sum();
            let b: f64 = (0..n).map(|i| wb[i] * s(i)).sum();
            acc[0] += prob * a;
            acc[1] += prob * b;
            acc[2] += prob * a * a;
            acc[3] += prob * b * b;
            acc[4] += prob * a * b;
        }
        [
            acc[0],
            acc[1],
            acc[2] - acc[0] * acc[0],
            acc[3] - acc[1] * acc[1],
            acc[4] - acc[0] * acc[1],
        ]
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> DickeState {
        let amps = (0..=n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        DickeState::from_unnormalized(amps).unwrap()
    }

    #[test]
    fn whole_region_is_global_moment() {
        let s = one_axis_twist(&coherent_state(50, 1.2, 0.4).unwrap(), 0.03);
        let m = partitioned_moments_exact(&s, &[1.0; 50], &[0.0; 50]).unwrap();
        let g = spin_moments(&s);
        assert!((m.mean_a - g.mean[2]).abs() < 1e-10);
        assert!((m.var_a - g.covariance[2][2]).abs() < 1e-10);
        assert_eq!(m.var_b, 0.0);
        assert_eq!(m.eta_a, 1.0);
    }

    #[test]
    fn css_local_variance_equals_eta() {
        let n = 40;
        let s = coherent_state(n, PI / 2.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let wa: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let wb: Vec<f64> = wa.iter().map(|w| (1.0 - w) * 0.7).collect();
        let m = partitioned_moments_exact(&s, &wa, &wb).unwrap();
        assert!((4.0 * m.var_a / m.weight_a - m.eta_a).abs() < 1e-10);
        let norm = m.normalized();
        assert!((4.0 * norm.var_a / m.effective_atoms_a() - 1.0).abs() < 1e-10);
        assert!((4.0 * norm.var_b / m.effective_atoms_b() - 1.0).abs() < 1e-10);
        // product state: only atoms seen by both regions correlate them
        let shared: f64 = wa.iter().zip(&wb).map(|(a, b)| a * b).sum();
        assert!((m.cov_ab - shared / 4.0).abs() < 1e-10);
    }

    #[test]
    fn matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [1usize, 2, 4, 7] {
            let s = random_state(n, &mut rng);
            let wa: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let wb: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let m = partitioned_moments_exact(&s, &wa, &wb).unwrap();
            let e = enumerate(&s, &wa, &wb);
            let got = [m.mean_a, m.mean_b, m.var_a, m.var_b, m.cov_ab];
            for (g, w) in got.iter().zip(e) {
                assert!((g - w).abs() < 1e-10, "n={n}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn bad_weights_rejected() {
        let s = coherent_state(3, 0.3, 0.0).unwrap();
        assert!(matches!(
            partitioned_moments_exact(&s, &[0.1, 1.2, 0.0], &[0.0; 3]),
            Err(SpinError::WeightOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            partitioned_moments_exact(&s, &[0.1], &[0.0; 3]),
            Err(SpinError::WeightLength { .. })
        ));
    }
}
