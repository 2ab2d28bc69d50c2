//! Exact first and second moments of the collective spin.

use num_complex::Complex64;

use super::DickeState;

/// Mean spin vector and symmetric covariance matrix, in units of `ħ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMoments {
    pub mean: [f64; 3],
    pub covariance: [[f64; 3]; 3],
}

impl SpinMoments {
    /// Variance of `n·S` for a unit vector `n`.
    pub fn variance_along(&self, n: [f64; 3]) -> f64 {
        let mut v = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                v += n[i] * self.covariance[i][j] * n[j];
            }
        }
        v
    }

    pub fn polarization(&self) -> f64 {
        self.mean.iter().map(|m| m * m).sum::<f64>().sqrt()
    }

    /// Unit vector along the mean spin, if the polarization is nonzero.
    pub fn mean_direction(&self) -> Option<[f64; 3]> {
        let p = self.polarization();
        (p > 0.0).then(|| [self.mean[0] / p, self.mean[1] / p, self.mean[2] / p])
    }

    /// Eigenvalues of the covariance matrix, ascending.
    pub fn covariance_eigenvalues(&self) -> [f64; 3] {
        symmetric_eigenvalues(&self.covariance)
    }

    /// Smallest and largest variance in the plane orthogonal to the mean
    /// spin, with the unit vector achieving the minimum.
    pub fn transverse_extremes(&self) -> Option<TransverseVariances> {
        let n = self.mean_direction()?;
        // e1 orthogonal to n; prefer the equatorial direction z × n
        let mut e1 = cross([0.0, 0.0, 1.0], n);
        if norm(e1) < 1e-8 {
            e1 = cross([1.0, 0.0, 0.0], n);
        }
        let e1 = scale(e1, 1.0 / norm(e1));
        let e2 = cross(n, e1);
        let c11 = self.variance_along(e1);
        let c22 = self.variance_along(e2);
        let c12 = {
            let mut v = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    v += e1[i] * self.covariance[i][j] * e2[j];
                }
            }
            v
        };
        let mean = 0.5 * (c11 + c22);
        let half = (0.25 * (c11 - c22).powi(2) + c12 * c12).sqrt();
        let theta = 0.5 * (2.0 * c12).atan2(c11 - c22) + std::f64::consts::FRAC_PI_2;
        let min_dir = [
            theta.cos() * e1[0] + theta.sin() * e2[0],
            theta.cos() * e1[1] + theta.sin() * e2[1],
            theta.cos() * e1[2] + theta.sin() * e2[2],
        ];
        Some(TransverseVariances {
            min: mean - half,
            max: mean + half,
            min_direction: min_dir,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TransverseVariances {
    pub min: f64,
    pub max: f64,
    pub min_direction: [f64; 3],
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Closed-form eigenvalues of a real symmetric 3×3 matrix (trigonometric method).
fn symmetric_eigenvalues(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q, q, q];
    }
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|x, y| x.total_cmp(y));
    out
}

/// Exact spin moments from the Dicke amplitudes.
///
/// With `J₊|k⟩ = √((k+1)(N-k)) |k+1⟩`, all needed expectation values reduce
/// to sums over neighbouring amplitudes: `⟨J₊⟩`, `⟨J₊²⟩`, `⟨J₊(2Jz+1)⟩` and
/// diagonal terms.
pub fn spin_moments(state: &DickeState) -> SpinMoments {
    let n = state.n_atoms();
    let nf = n as f64;
    let j = state.j();
    let c = state.amplitudes();
    let zero = Complex64::new(0.0, 0.0);

    let mut jz = 0.0;
    let mut jz2 = 0.0;
    let mut pm_sum = 0.0; // ⟨J₊J₋ + J₋J₊⟩
    let mut jp = zero;
    let mut jp2 = zero;
    let mut jp_z = zero; // ⟨J₊(2Jz + 1)⟩
    for k in 0..=n {
        let p = c[k].norm_sqr();
        let kf = k as f64;
        let m = kf - j;
        jz += p * m;
        jz2 += p * m * m;
        pm_sum += p * (kf * (nf - kf + 1.0) + (kf + 1.0) * (nf - kf));
        if k < n {
            let amp = ((kf + 1.0) * (nf - kf)).sqrt();
            let t = c[k + 1].conj() * c[k] * amp;
            jp += t;
            jp_z += t * (2.0 * m + 1.0);
        }
        if k + 1 < n {
            let amp = ((kf + 1.0) * (nf - kf)).sqrt() * ((kf + 2.0) * (nf - kf - 1.0)).sqrt();
            jp2 += c[k + 2].conj() * c[k] * amp;
        }
    }
    let mean = [jp.re, jp.im, jz];
    let xx = (2.0 * jp2.re + pm_sum) / 4.0;
    let yy = (-2.0 * jp2.re + pm_sum) / 4.0;
    let xy = jp2.im / 2.0;
    let xz = jp_z.re / 2.0;
    let yz = jp_z.im / 2.0;
    let second = [[xx, xy, xz], [xy, yy, yz], [xz, yz, jz2]];
    let mut covariance = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            covariance[a][b] = second[a][b] - mean[a] * mean[b];
        }
    }
    SpinMoments { mean, covariance }
}
