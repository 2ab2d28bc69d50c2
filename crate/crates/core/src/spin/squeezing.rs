//! Squeezed-state preparation by one-axis twisting, and twist-strength tuning.

use std::f64::consts::FRAC_PI_2;

use super::{
    coherent_state, cross, norm, one_axis_twist, rotate, scale, spin_moments, DickeState,
    SpinError, SpinMoments,
};

/// A prepared state together with its exact moments.
#[derive(Clone, Debug)]
pub struct SqueezedState {
    pub state: DickeState,
    pub moments: SpinMoments,
    pub mu: f64,
}

impl SqueezedState {
    /// Wineland parameter `N Var(S_min,⊥) / |⟨S⟩|²`.
    pub fn wineland(&self) -> f64 {
        wineland_of(&self.moments, self.state.n_atoms())
    }
}

pub(crate) fn wineland_of(m: &SpinMoments, n_atoms: usize) -> f64 {
    let p = m.polarization();
    match m.transverse_extremes() {
        Some(t) => n_atoms as f64 * t.min / (p * p),
        None => f64::NAN,
    }
}

/// Twisted equatorial state with the mean spin along `+x`.
///
/// After twisting, the state is turned about its mean-spin axis by `tilt`
/// (or, when `tilt` is `None`, by the angle that brings the minimum-variance
/// quadrature onto `z`), then about `z` so the mean spin lies along `+x`.
/// The anti-squeezed quadrature ends up along `y`.
pub fn squeezed_state(
    n_atoms: usize,
    mu: f64,
    tilt: Option<f64>,
) -> Result<SqueezedState, SpinError> {
    let css = coherent_state(n_atoms, FRAC_PI_2, 0.0)?;
    if mu == 0.0 {
        let moments = spin_moments(&css);
        return Ok(SqueezedState {
            state: css,
            moments,
            mu,
        });
    }
    let twisted = one_axis_twist(&css, mu);
    let m = spin_moments(&twisted);
    let n = m.mean_direction().ok_or(SpinError::ZeroPolarization)?;
    let angle = match tilt {
        Some(t) => t,
        None => {
            let t = m.transverse_extremes().ok_or(SpinError::ZeroPolarization)?;
            let mut e1 = cross([0.0, 0.0, 1.0], n);
            e1 = scale(e1, 1.0 / norm(e1));
            let e2 = cross(n, e1);
            let d = t.min_direction;
            let theta = super::dot(d, e2).atan2(super::dot(d, e1));
            FRAC_PI_2 - theta
        }
    };
    let aligned = rotate(&twisted, n, angle)?;
    let am = spin_moments(&aligned);
    let azimuth = am.mean[1].atan2(am.mean[0]);
    let state = aligned.rotate_z(-azimuth);
    let moments = spin_moments(&state);
    Ok(SqueezedState { state, moments, mu })
}

/// Result of [`tune_twist`].
#[derive(Clone, Copy, Debug)]
pub struct TwistTuning {
    pub mu: f64,
    pub wineland_db: f64,
}

fn twisted_wineland(css: &DickeState, mu: f64) -> f64 {
    let s = one_axis_twist(css, mu);
    wineland_of(&spin_moments(&s), css.n_atoms())
}

/// Smallest twist strength whose exact Wineland parameter reaches
/// `target_db` (negative for squeezing), found by bracketing then bisection.
pub fn tune_twist(n_atoms: usize, target_db: f64) -> Result<TwistTuning, SpinError> {
    let css = coherent_state(n_atoms, FRAC_PI_2, 0.0)?;
    let db = |mu: f64| 10.0 * twisted_wineland(&css, mu).log10();
    if target_db >= 0.0 {
        return Ok(TwistTuning {
            mu: 0.0,
            wineland_db: db(0.0),
        });
    }
    // geometric scan from well below the optimal squeezing time
    let nf = n_atoms.max(2) as f64;
    let mut lo = 0.0;
    let mut hi = 0.01 / nf;
    let mut best = f64::INFINITY;
    loop {
        let d = db(hi);
        if d <= target_db {
            break;
        }
        if d > best + 1e-9 || hi > 2.0 {
            // passed the optimum without reaching the target
            return Err(SpinError::TargetUnreachable {
                target_db,
                best_db: best,
            });
        }
        best = best.min(d);
        lo = hi;
        hi *= 1.25;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if db(mid) <= target_db {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    Ok(TwistTuning {
        mu: hi,
        wineland_db: db(hi),
    })
}

/// Analytic one-axis-twisting statistics of Kitagawa and Ueda for an
/// equatorial coherent state twisted by `exp(-i mu Jz²/2)`.
#[derive(Clone, Copy, Debug)]
pub struct KitagawaUeda {
    pub var_min: f64,
    pub var_max: f64,
    pub polarization: f64,
}

impl KitagawaUeda {
    pub fn wineland(&self, n_atoms: usize) -> f64 {
        n_atoms as f64 * self.var_min / (self.polarization * self.polarization)
    }
}

pub fn kitagawa_ueda(n_atoms: usize, mu: f64) -> KitagawaUeda {
    let nf = n_atoms as f64;
    let a = 1.0 - mu.cos().powf(nf - 2.0);
    let b = 4.0 * (mu / 2.0).sin() * (mu / 2.0).cos().powf(nf - 2.0);
    let root = (a * a + b * b).sqrt();
    KitagawaUeda {
        var_min: nf / 4.0 * (1.0 + (nf - 1.0) / 4.0 * (a - root)),
        var_max: nf / 4.0 * (1.0 + (nf - 1.0) / 4.0 * (a + root)),
        polarization: nf / 2.0 * (mu / 2.0).cos().powf(nf - 1.0),
    }
}
