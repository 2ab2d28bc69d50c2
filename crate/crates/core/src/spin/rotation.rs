//! Rotations of symmetric states through the Wigner small-d matrix.
//!
//! Columns of `d^j(β)` are generated with the three-term recurrence that
//! follows from `⟨m'| e^{-iβJy} Jz |m⟩`:
//!
//! ```text
//! c₊(m') d_{m'+1,m} + c₋(m') d_{m'-1,m} = 2 (m - m' cos β) / sin β · d_{m',m}
//! ```
//!
//! Each column is recurred upward from `m' = -j` and downward from `m' = j`,
//! so both passes only ever run in the direction in which the wanted
//! solution grows or oscillates. The two halves are matched on three points
//! around `m' ≈ m cos β` and normalized to unit length. No factorials are
//! formed, which keeps the method usable at `N` in the thousands.

use num_complex::Complex64;

use super::{DickeState, SpinError};

/// Values above this are rescaled during recurrence to stay clear of overflow.
const RESCALE_ABOVE: f64 = 1e150;
/// Axis vectors whose length differs from one by more than this are rejected.
pub const AXIS_TOLERANCE: f64 = 1e-9;

/// A dense, real `(N+1) × (N+1)` Wigner small-d matrix for one angle.
///
/// Indexing is by excitation count: `get(a, b) = d^j_{a-j, b-j}(β)`.
#[derive(Clone, Debug)]
pub struct WignerD {
    n: usize,
    beta: f64,
    // column-major: column b occupies data[b*(n+1)..(b+1)*(n+1)]
    data: Vec<f64>,
}

impl WignerD {
    /// Builds `d^{N/2}(β)`. `β` is reduced to `[0, 2π)`; angles in `(π, 2π)`
    /// use `d(β) = (-1)^{...} d(2π - β)` via the transpose identity.
    pub fn new(n_atoms: usize, beta: f64) -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut b = beta.rem_euclid(two_pi);
        // d(-β) = d(β)^T and d(2π - β) = d(-β) up to the (-1)^{2j} sign.
        let mut transpose = false;
        let mut sign = 1.0;
        if b > std::f64::consts::PI {
            b = two_pi - b;
            transpose = true;
            if n_atoms % 2 == 1 {
                sign = -1.0;
            }
        }
        let dim = n_atoms + 1;
        let mut data = vec![0.0; dim * dim];
        for col in 0..dim {
            let column = small_d_column(n_atoms, col, b);
            for (row, v) in column.into_iter().enumerate() {
                let (r, c) = if transpose { (col, row) } else { (row, col) };
                data[c * dim + r] = sign * v;
            }
        }
        Self {
            n: n_atoms,
            beta,
            data,
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * (self.n + 1) + row]
    }

    pub fn column(&self, col: usize) -> &[f64] {
        let dim = self.n + 1;
        &self.data[col * dim..(col + 1) * dim]
    }

    /// `out = d · v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let dim = self.n + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (col, &x) in v.iter().enumerate() {
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            for (o, &d) in out.iter_mut().zip(self.column(col)) {
                *o += x * d;
            }
        }
        out
    }
}

/// Column `b` of `d^{N/2}(β)` for `β ∈ [0, π]`.
fn small_d_column(n: usize, b: usize, beta: f64) -> Vec<f64> {
    let dim = n + 1;
    let mut out = vec![0.0; dim];
    let (sb, cb) = beta.sin_cos();
    if sb.abs() < 1e-14 {
        if cb > 0.0 {
            out[b] = 1.0;
        } else {
            // d^j_{m',m}(π) = (-1)^{j-m} δ_{m',-m}
            out[n - b] = if (n - b) % 2 == 0 { 1.0 } else { -1.0 };
        }
        return out;
    }
    if n == 1 {
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        // rows: a = 0 (m' = -1/2), a = 1 (m' = +1/2)
        if b == 1 {
            out[0] = s;
            out[1] = c;
        } else {
            out[0] = c;
            out[1] = -s;
        }
        return out;
    }

    let j = n as f64 / 2.0;
    let m = b as f64 - j;
    let c_plus = |a: usize| (((a + 1) * (n - a)) as f64).sqrt();
    let c_minus = |a: usize| ((a * (n + 1 - a)) as f64).sqrt();
    let coef = |a: usize| 2.0 * (m - (a as f64 - j) * cb) / sb;

    let center = (j + m * cb).round().clamp(1.0, (n - 1) as f64) as usize;

    // Upward pass, seeded with the positive edge value d^j_{-j,m}(β).
    let mut up = vec![0.0; dim];
    up[0] = 1.0;
    let mut prev = 0.0;
    for a in 0..=center {
        let next = (coef(a) * up[a] - c_minus(a) * prev) / c_plus(a);
        prev = up[a];
        up[a + 1] = next;
        if next.abs() > RESCALE_ABOVE {
            for v in up[..=a + 1].iter_mut() {
                *v /= RESCALE_ABOVE;
            }
            prev /= RESCALE_ABOVE;
        }
    }

    // Downward pass from d^j_{j,m}(β), whose sign is (-1)^{j-m}.
    let mut down = vec![0.0; dim];
    down[n] = if (n - b) % 2 == 0 { 1.0 } else { -1.0 };
    let mut next_up = 0.0;
    let mut a = n;
    while a >= center {
        let lower = (coef(a) * down[a] - c_plus(a) * next_up) / c_minus(a);
        next_up = down[a];
        down[a - 1] = lower;
        if lower.abs() > RESCALE_ABOVE {
            for v in down[a - 1..].iter_mut() {
                *v /= RESCALE_ABOVE;
            }
            next_up /= RESCALE_ABOVE;
        }
        a -= 1;
    }

    let overlap = center - 1..=center + 1;
    let num: f64 = overlap.clone().map(|i| up[i] * down[i]).sum();
    let den: f64 = overlap.map(|i| down[i] * down[i]).sum();
    let scale = num / den;

    // The up pass may have been rescaled to tiny values at its start, which is
    // harmless: those entries are truly negligible next to the matching region.
    out[..=center].copy_from_slice(&up[..=center]);
    for i in center + 1..dim {
        out[i] = scale * down[i];
    }
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// Rotation matrix for a right-handed rotation by `angle` about unit `axis`.
pub fn rotation_matrix(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let [x, y, z] = axis;
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

/// ZYZ Euler angles `(α, β, γ)` with `R = Rz(α) Ry(β) Rz(γ)` and `β ∈ [0, π]`.
pub fn zyz_euler(r: &[[f64; 3]; 3]) -> (f64, f64, f64) {
    let sb = (r[0][2] * r[0][2] + r[1][2] * r[1][2]).sqrt();
    let beta = sb.atan2(r[2][2]);
    if sb < 1e-12 {
        if r[2][2] > 0.0 {
            (r[1][0].atan2(r[0][0]), 0.0, 0.0)
        } else {
            ((-r[0][1]).atan2(r[1][1]), std::f64::consts::PI, 0.0)
        }
    } else {
        let alpha = r[1][2].atan2(r[0][2]);
        let gamma = r[2][1].atan2(-r[2][0]);
        (alpha, beta, gamma)
    }
}

/// A rotation of spin-`N/2` states, precomputed so it can be applied to many
/// states with the same atom number.
#[derive(Clone, Debug)]
pub struct SpinRotation {
    alpha: f64,
    gamma: f64,
    d: Option<WignerD>,
}

impl SpinRotation {
    pub fn new(n_atoms: usize, axis: [f64; 3], angle: f64) -> Result<Self, SpinError> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !((len - 1.0).abs() <= AXIS_TOLERANCE) {
            return Err(SpinError::NonUnitAxis(len));
        }
        if angle == 0.0 {
            return Ok(Self {
                alpha: 0.0,
                gamma: 0.0,
                d: None,
            });
        }
        let (alpha, beta, gamma) = zyz_euler(&rotation_matrix(axis, angle));
        let d = if beta == 0.0 {
            None
        } else {
            Some(WignerD::new(n_atoms, beta))
        };
        Ok(Self { alpha, gamma, d })
    }

    /// Applies the rotation, optionally preceded by an extra `z` rotation
    /// (used for per-shot phase noise without rebuilding the d-matrix).
    pub fn apply_with_z_phase(&self, state: &DickeState, pre_z: f64) -> DickeState {
        let first = state.rotate_z(self.gamma + pre_z);
        let mid = match &self.d {
            Some(d) => {
                assert_eq!(d.n_atoms(), state.n_atoms(), "rotation built for another N");
                DickeState::from_parts_unchecked(d.apply(first.amplitudes()))
            }
            None => first,
        };
        mid.rotate_z(self.alpha)
    }

    pub fn apply(&self, state: &DickeState) -> DickeState {
        if self.d.is_none() && self.alpha == 0.0 && self.gamma == 0.0 {
            return state.clone();
        }
        self.apply_with_z_phase(state, 0.0)
    }
}

/// Rotates `state` by `angle` about the unit vector `axis`, i.e. applies
/// `exp(-i angle axis·J)` up to a global sign for odd `N`.
pub fn rotate(state: &DickeState, axis: [f64; 3], angle: f64) -> Result<DickeState, SpinError> {
    Ok(SpinRotation::new(state.n_atoms(), axis, angle)?.apply(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::coherent_state;
    use std::f64::consts::PI;

    /// Wigner's explicit sum, usable for small j:
    /// d_{m'm} = √((j+m')!(j-m')!(j+m)!(j-m)!) Σ_s (-1)^{m'-m+s}
    ///   cos^{2j+m-m'-2s}(β/2) sin^{m'-m+2s}(β/2) / ((j+m-s)! s! (m'-m+s)! (j-m'-s)!)
    fn wigner_explicit(n: usize, a: usize, b: usize, beta: f64) -> f64 {
        let fact = |k: i64| (1..=k).map(|i| i as f64).product::<f64>();
        let (n, a, b) = (n as i64, a as i64, b as i64);
        let pref = (fact(a) * fact(n - a) * fact(b) * fact(n - b)).sqrt();
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let mut sum = 0.0;
        for k in 0..=n {
            let (d1, d2, d3) = (b - k, a - b + k, n - a - k);
            if d1 < 0 || d2 < 0 || d3 < 0 {
                continue;
            }
            let sign = if (a - b + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sum += sign * c.powi((n + b - a - 2 * k) as i32) * s.powi((a - b + 2 * k) as i32)
                / (fact(d1) * fact(k) * fact(d2) * fact(d3));
        }
        pref * sum
    }

    #[test]
    fn matches_explicit_formula_small_j() {
        for n in [1usize, 2, 3, 4, 7, 12] {
            for &beta in &[0.3, 1.0, PI / 2.0, 2.5, 3.0] {
                let d = WignerD::new(n, beta);
                for a in 0..=n {
                    for b in 0..=n {
                        let want = wigner_explicit(n, a, b, beta);
                        let got = d.get(a, b);
                        assert!(
                            (want - got).abs() < 1e-11,
                            "n={n} beta={beta} a={a} b={b}: {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonal_at_large_n() {
        let n = 2000;
        let d = WignerD::new(n, 1.234);
        for &(p, q) in &[(0usize, 0usize), (1000, 1000), (1000, 1001), (5, 1999), (1500, 1500)] {
            let dot: f64 = d.column(p).iter().zip(d.column(q)).map(|(x, y)| x * y).sum();
            let want = if p == q { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-9, "({p},{q}) -> {dot}");
        }
    }

    #[test]
    fn reflection_angles() {
        let d = WignerD::new(5, 2.0 * PI - 0.7);
        let e = WignerD::new(5, 0.7);
        for a in 0..=5 {
            for b in 0..=5 {
                // d(2π-β) = (-1)^{2j} d(β)^T
                assert!((d.get(a, b) + e.get(b, a)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn euler_roundtrip() {
        let axis = [0.48, -0.6, 0.64];
        let r = rotation_matrix(axis, 2.2);
        let (a, b, g) = zyz_euler(&r);
        let rz = |t: f64| rotation_matrix([0.0, 0.0, 1.0], t);
        let ry = |t: f64| rotation_matrix([0.0, 1.0, 0.0], t);
        let mul = |x: [[f64; 3]; 3], y: [[f64; 3]; 3]| {
            let mut o = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    o[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
                }
            }
            o
        };
        let back = mul(mul(rz(a), ry(b)), rz(g));
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[i][j] - r[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_unit_axis_rejected() {
        let s = coherent_state(4, 0.0, 0.0).unwrap();
        assert!(matches!(
            rotate(&s, [1.0, 1.0, 0.0], 0.2),
            Err(SpinError::NonUnitAxis(_))
        ));
    }

    #[test]
    fn pole_flip_about_y() {
        let s = coherent_state(9, 0.0, 0.0).unwrap();
        let r = rotate(&s, [0.0, 1.0, 0.0], PI).unwrap();
        assert!((r.probabilities()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_angle_identity() {
        let s = coherent_state(9, 0.7, 0.4).unwrap();
        assert_eq!(rotate(&s, [0.0, 0.0, 1.0], 0.0).unwrap(), s);
    }

    #[test]
    fn x_css_quarter_turn_about_y_reaches_pole() {
        let s = coherent_state(30, PI / 2.0, 0.0).unwrap();
        // right-handed rotation about y takes +x to -z
        let r = rotate(&s, [0.0, 1.0, 0.0], PI / 2.0).unwrap();
        assert!((r.probabilities()[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rotation_matches_coherent_state_construction() {
        let pole = coherent_state(50, 0.0, 0.0).unwrap();
        let via_rot = rotate(&pole, [0.0, 1.0, 0.0], 1.1)
            .and_then(|s| rotate(&s, [0.0, 0.0, 1.0], 0.6))
            .unwrap();
        let direct = coherent_state(50, 1.1, 0.6).unwrap();
        assert!((via_rot.overlap(&direct) - 1.0).abs() < 1e-10);
    }
}
