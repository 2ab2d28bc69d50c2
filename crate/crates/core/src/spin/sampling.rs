//! Projective measurement of `Jz` and per-atom outcome assignment.

use rand::Rng;

use super::{DickeState, SpinError};

/// Cumulative distribution of the excitation count, for repeated sampling.
#[derive(Clone, Debug)]
pub struct ExcitationSampler {
    cdf: Vec<f64>,
}

impl ExcitationSampler {
    pub fn new(state: &DickeState) -> Self {
        Self::from_probabilities(&state.probabilities())
    }

    pub fn from_probabilities(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let total = acc;
        cdf.iter_mut().for_each(|c| *c /= total);
        Self { cdf }
    }

    pub fn n_atoms(&self) -> usize {
        self.cdf.len() - 1
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let k = self.cdf.partition_point(|&c| c <= u);
        // guard against u landing above a cdf that rounds to just below 1
        k.min(self.cdf.len() - 1)
    }
}

/// Draws `k` with probability `|c_k|²`.
pub fn sample_excitation_count<R: Rng + ?Sized>(state: &DickeState, rng: &mut R) -> usize {
    ExcitationSampler::new(state).sample(rng)
}

/// Per-atom outcome of a `Jz` measurement: `+1/2` for `|2⟩`, `-1/2` for `|1⟩`.
pub type Outcome = f64;

/// Marks exactly `k` of `n_atoms` atoms `+1/2` (state `|2⟩`), uniformly over
/// all `C(N, k)` subsets, using only the supplied random stream.
pub fn assign_outcomes<R: Rng + ?Sized>(
    k: usize,
    n_atoms: usize,
    rng: &mut R,
) -> Result<Vec<Outcome>, SpinError> {
    if k > n_atoms {
        return Err(SpinError::ExcitationOutOfRange { k, n_atoms });
    }
    let mut out = vec![-0.5; n_atoms];
    for i in rand::seq::index::sample(rng, n_atoms, k) {
        out[i] = 0.5;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::coherent_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pole_always_n() {
        let s = coherent_state(12, 0.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| sample_excitation_count(&s, &mut rng) == 12));
    }

    #[test]
    fn outcome_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(assign_outcomes(0, 5, &mut rng).unwrap().iter().all(|&o| o == -0.5));
        assert!(assign_outcomes(5, 5, &mut rng).unwrap().iter().all(|&o| o == 0.5));
        assert!(matches!(
            assign_outcomes(6, 5, &mut rng),
            Err(SpinError::ExcitationOutOfRange { .. })
        ));
    }

    #[test]
    fn outcome_count_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let o = assign_outcomes(37, 100, &mut rng).unwrap();
        assert_eq!(o.iter().filter(|&&x| x > 0.0).count(), 37);
    }
}
