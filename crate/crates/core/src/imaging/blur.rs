//! Position blur from random photon recoils during a resonant imaging pulse.

use super::{check_non_negative, ImagingError};

/// Natural linewidth of the Rb-87 D2 line, `2π × 6.0666 MHz`.
pub const RB87_GAMMA: f64 = 2.0 * std::f64::consts::PI * 6.0666e6;
/// Single-photon recoil velocity of Rb-87 at 780 nm, m/s.
pub const RB87_RECOIL_VELOCITY: f64 = 5.8845e-3;

/// Time-averaged rms transverse displacement after a pulse of length
/// `dt_pulse`: `sqrt((Γ/72) (s/(1+s)) v_rec² Δt³)`.
///
/// Each scattered photon gives a random transverse kick; the displacement
/// grows as a random walk in velocity and is averaged over the pulse. The
/// result is an upper bound (resonant two-level scattering throughout).
pub fn blur_rms(gamma: f64, s: f64, v_rec: f64, dt_pulse: f64) -> f64 {
    let sat = if s.is_infinite() { 1.0 } else { s / (1.0 + s) };
    (gamma / 72.0 * sat * v_rec * v_rec * dt_pulse.powi(3)).sqrt()
}

/// Saturation parameter giving a blur of `target` metres; inverts [`blur_rms`].
pub fn saturation_for_blur(
    target: f64,
    gamma: f64,
    v_rec: f64,
    dt_pulse: f64,
) -> Result<f64, ImagingError> {
    check_non_negative("target", target)?;
    let limit = blur_rms(gamma, f64::INFINITY, v_rec, dt_pulse);
    let q = (target / limit).powi(2);
    if q >= 1.0 {
        return Err(ImagingError::UnattainableBlur { target, limit });
    }
    Ok(q / (1.0 - q))
}

pub fn quadrature_sum(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Resolution budget: an optical width combined in quadrature with the
/// recoil blur of a pulse, everything in pixels.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BlurBudget {
    pub optical_px: f64,
    pub blur_px: f64,
    pub total_px: f64,
    pub saturation: f64,
}

impl BlurBudget {
    /// Chooses the saturation parameter so the total equals `total_px`.
    pub fn for_total(
        optical_px: f64,
        total_px: f64,
        pixel_size: f64,
        dt_pulse: f64,
    ) -> Result<Self, ImagingError> {
        let blur_px = (total_px * total_px - optical_px * optical_px).max(0.0).sqrt();
        let s = saturation_for_blur(blur_px * pixel_size, RB87_GAMMA, RB87_RECOIL_VELOCITY, dt_pulse)?;
        Ok(Self::for_saturation(optical_px, s, pixel_size, dt_pulse))
    }

    pub fn for_saturation(optical_px: f64, s: f64, pixel_size: f64, dt_pulse: f64) -> Self {
        let blur_px = blur_rms(RB87_GAMMA, s, RB87_RECOIL_VELOCITY, dt_pulse) / pixel_size;
        Self {
            optical_px,
            blur_px,
            total_px: quadrature_sum(optical_px, blur_px),
            saturation: s,
        }
    }
}
