//! Dense complex Hermitian eigensolver.
//!
//! Householder reflections reduce the matrix to Hermitian tridiagonal form, a
//! diagonal phase similarity makes the off-diagonal real, and implicit-shift
//! QL iteration diagonalizes the resulting real symmetric tridiagonal matrix
//! while accumulating the eigenvectors. Everything runs sequentially in a fixed
//! order, so equal inputs give bit-identical outputs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Contract tolerance, relative to the Frobenius norm of the input.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Sweep cap per eigenvalue in the QL stage.
pub const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` pairs with `eigenvalues[i]`; unit norm.
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `‖M·v_i − λ_i·v_i‖₂` per pair.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub max_offdiag_overlap: f64,
    pub tol: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when `M` departs from its adjoint by more
/// than `tol·‖M‖_F`, with [`Error::Convergence`] when QL needs more than
/// [`MAX_SWEEPS`] sweeps for one eigenvalue, and with [`Error::Accuracy`] if
/// the residual or orthogonality contract is missed.
pub fn eigh(m: &CMatrix, tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Dimension {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Dimension {
            expected: 1,
            found: 0,
        });
    }
    let fro = m.frobenius_norm();
    if !fro.is_finite() {
        return Err(Error::Accuracy("matrix has non-finite entries".into()));
    }
    let defect = m.hermiticity_defect();
    let limit = tol * fro;
    if defect > limit {
        return Err(Error::NotHermitian { defect, limit });
    }

    let mut a = CMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut q = CMatrix::identity(n);
    householder_tridiagonalize(&mut a, &mut q);

    let mut diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    // phase[i] rotates basis vector i so the sub-diagonal becomes |e_i| ≥ 0
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let e = a[(i + 1, i)];
        let mag = e.norm();
        off[i] = mag;
        phase[i + 1] = if mag > 0.0 {
            phase[i] * (e / mag)
        } else {
            phase[i]
        };
    }

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut diag, &mut off, &mut z, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    // eigenvector i = Q · diag(phase) · z[:, i]
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| {
            (0..n)
                .map(|row| {
                    (0..n)
                        .map(|k| q[(row, k)] * phase[k] * z[k * n + col])
                        .sum::<Complex64>()
                })
                .collect()
        })
        .collect();
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();

    let residuals: Vec<f64> = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&lam, v)| pair_residual(m, lam, v))
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let mut max_offdiag_overlap = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let overlap: Complex64 = eigenvectors[i]
                .iter()
                .zip(&eigenvectors[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            max_offdiag_overlap = max_offdiag_overlap.max(overlap.norm());
        }
    }
    if max_residual > limit.max(f64::MIN_POSITIVE) {
        return Err(Error::Accuracy(format!(
            "residual {max_residual:e} exceeds {limit:e}"
        )));
    }
    if max_offdiag_overlap > tol {
        return Err(Error::Accuracy(format!(
            "eigenvector overlap {max_offdiag_overlap:e} exceeds {tol:e}"
        )));
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
        max_residual,
        max_offdiag_overlap,
        tol,
    })
}

/// `‖M·v − λ·v‖₂`.
pub fn residual(m: &CMatrix, lambda: f64, v: &[Complex64]) -> Result<f64> {
    if m.cols() != v.len() || m.rows() != v.len() {
        return Err(Error::Dimension {
            expected: m.cols(),
            found: v.len(),
        });
    }
    Ok(pair_residual(m, lambda, v))
}

fn pair_residual(m: &CMatrix, lambda: f64, v: &[Complex64]) -> f64 {
    m.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(mv, x)| (mv - lambda * x).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// In-place reduction `a ← Q†·a·Q` to Hermitian tridiagonal form, with `Q`
/// accumulated into `q`.
fn householder_tridiagonalize(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.rows();
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let head_phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -head_phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let tau = 2.0 / vnorm2;

        // rows k+1.. : a ← H·a
        for c in 0..n {
            let w: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * a[(k + 1 + i, c)])
                .sum();
            if w == zero {
                continue;
            }
            for (i, vi) in v.iter().enumerate() {
                a[(k + 1 + i, c)] -= tau * vi * w;
            }
        }
        // columns k+1.. : a ← a·H, and q ← q·H
        for mat in [&mut *a, &mut *q] {
            for row in 0..n {
                let u: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(i, vi)| mat[(row, k + 1 + i)] * vi)
                    .sum();
                if u == zero {
                    continue;
                }
                for (i, vi) in v.iter().enumerate() {
                    mat[(row, k + 1 + i)] -= tau * u * vi.conj();
                }
            }
        }

        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = zero;
            a[(k, i)] = zero;
        }
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix. `off[i]` couples
/// `i` and `i+1`; `z` (row-major `n×n`) accumulates the rotations.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale || off[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::Convergence {
                    index: l,
                    sweeps: MAX_SWEEPS,
                });
            }

            // Wilkinson-type shift from the leading 2×2 block
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for row in 0..n {
                    let zi = z[row * n + i];
                    let zi1 = z[row * n + i + 1];
                    z[row * n + i + 1] = s * zi + c * zi1;
                    z[row * n + i] = c * zi - s * zi1;
                }
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
