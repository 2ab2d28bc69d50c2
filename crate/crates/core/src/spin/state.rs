//! Symmetric N-atom states in the excitation-number (Dicke) basis.

use num_complex::Complex64;

use super::SpinError;

/// Tolerance on `Σ|c_k|² = 1` accepted by [`DickeState::new`].
pub const NORM_TOLERANCE: f64 = 1e-10;

/// A symmetric state of `n_atoms` two-level atoms.
///
/// `amplitudes[k]` is the amplitude of the Dicke state with `k` atoms in
/// state `|2⟩`, so `Jz = k - N/2`. The pole `k = N` points along `+z`.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeState {
    n_atoms: usize,
    amplitudes: Vec<Complex64>,
}

impl DickeState {
    /// Wraps amplitudes after checking length and normalization.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, SpinError> {
        if amplitudes.len() < 2 {
            return Err(SpinError::NoAtoms);
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SpinError::NotNormalized(norm));
        }
        Ok(Self {
            n_atoms: amplitudes.len() - 1,
            amplitudes,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self, SpinError> {
        if amplitudes.len() < 2 {
            return Err(SpinError::NoAtoms);
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(SpinError::NotNormalized(norm * norm));
        }
        amplitudes.iter_mut().for_each(|c| *c /= norm);
        Ok(Self {
            n_atoms: amplitudes.len() - 1,
            amplitudes,
        })
    }

    /// The Dicke state with exactly `k` atoms in `|2⟩`.
    pub fn dicke(n_atoms: usize, k: usize) -> Result<Self, SpinError> {
        if n_atoms == 0 {
            return Err(SpinError::NoAtoms);
        }
        if k > n_atoms {
            return Err(SpinError::ExcitationOutOfRange { k, n_atoms });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_atoms + 1];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { n_atoms, amplitudes })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Total spin quantum number `j = N/2`.
    pub fn j(&self) -> f64 {
        self.n_atoms as f64 / 2.0
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Excitation-count distribution `|c_k|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn overlap(&self, other: &DickeState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Multiplies each amplitude by `exp(-i angle m)`, a rotation about `z`.
    pub fn rotate_z(&self, angle: f64) -> DickeState {
        let j = self.j();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, -angle * (k as f64 - j)))
            .collect();
        DickeState {
            n_atoms: self.n_atoms,
            amplitudes,
        }
    }

    pub(crate) fn from_parts_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self {
            n_atoms: amplitudes.len() - 1,
            amplitudes,
        }
    }
}

/// Natural logarithms of `0!..=n!`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// Spin-coherent state pointing along `(polar, azimuth)` on the Bloch sphere.
///
/// Amplitudes are `√C(N,k) cos^k(θ/2) sin^(N-k)(θ/2) e^{-iφ(k-N/2)}`,
/// evaluated in log space so large `N` does not underflow.
pub fn coherent_state(n_atoms: usize, polar: f64, azimuth: f64) -> Result<DickeState, SpinError> {
    if n_atoms == 0 {
        return Err(SpinError::NoAtoms);
    }
    let n = n_atoms;
    let lf = ln_factorials(n);
    let (c, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
    let j = n as f64 / 2.0;
    let mut amplitudes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // sign of cos/sin handles polar outside [0, π]
        let mut sign = 1.0;
        let mut ln_mag = 0.5 * (lf[n] - lf[k] - lf[n - k]);
        if k > 0 {
            if c == 0.0 {
                amplitudes.push(Complex64::new(0.0, 0.0));
                continue;
            }
            ln_mag += k as f64 * c.abs().ln();
            if c < 0.0 && k % 2 == 1 {
                sign = -sign;
            }
        }
        if n - k > 0 {
            if s == 0.0 {
                amplitudes.push(Complex64::new(0.0, 0.0));
                continue;
            }
            ln_mag += (n - k) as f64 * s.abs().ln();
            if s < 0.0 && (n - k) % 2 == 1 {
                sign = -sign;
            }
        }
        let phase = Complex64::from_polar(1.0, -azimuth * (k as f64 - j));
        amplitudes.push(phase * (sign * ln_mag.exp()));
    }
    DickeState::from_unnormalized(amplitudes)
}

/// One-axis twisting: multiplies `c_k` by `exp(-i mu k²/2)`.
///
/// The `k²` phase also contains a term linear in `Jz`, so the mean spin
/// precesses about `z` by roughly `mu N/2`.
pub fn one_axis_twist(state: &DickeState, mu: f64) -> DickeState {
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let k = k as f64;
            c * Complex64::from_polar(1.0, -mu * k * k / 2.0)
        })
        .collect();
    DickeState::from_parts_unchecked(amplitudes)
}
