//! Gauge invariance of the momentum spectrum, and the gauge dependence of the
//! momentum/wavelength relation under periodic (linear) boundary conditions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{eigh, Spectrum, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::operator::{apply_gauge, build_linear, build_operator, BoundarySpec, GaugeSpec};
use crate::ring::{winding_number, RingGrid, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeBroglieRecord {
    pub n: f64,
    pub m: i64,
    pub lambda_wavelength: f64,
    pub delta_xi: f64,
    /// `|n·Λ − 2π + Δξ·Λ/2π|`
    pub residual_4b: f64,
}

/// Momentum allowed by continuity of the phase at the seam: `n = m − Δξ/2π`.
pub fn linear_bc_momentum(m: i64, delta_xi: f64) -> f64 {
    m as f64 - delta_xi / (2.0 * PI)
}

pub fn de_broglie_residual(n: f64, m: i64, delta_xi: f64) -> Result<DeBroglieRecord> {
    if m == 0 {
        return Err(Error::WavelengthUndefined);
    }
    let lambda_wavelength = 2.0 * PI / m as f64;
    let residual_4b =
        (n * lambda_wavelength - 2.0 * PI + delta_xi * lambda_wavelength / (2.0 * PI)).abs();
    Ok(DeBroglieRecord {
        n,
        m,
        lambda_wavelength,
        delta_xi,
        residual_4b,
    })
}

/// Largest gap between the ascending spectra of the operator and its gauge
/// conjugate.
pub fn verify_gauge_invariance(
    grid: &RingGrid,
    boundary: &BoundarySpec,
    gauge: &GaugeSpec,
) -> Result<f64> {
    let op = build_operator(grid, boundary);
    let gauged = apply_gauge(&op, gauge)?;
    let before = eigh(op.entries(), DEFAULT_TOL)?;
    let after = eigh(gauged.entries(), DEFAULT_TOL)?;
    Ok(before
        .eigenvalues
        .iter()
        .zip(&after.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingShift {
    /// Eigenvalue of the chosen eigenvector of the periodic operator.
    pub lambda: f64,
    /// Rayleigh quotient of the gauged vector against the gauged operator.
    pub lambda_after: f64,
    pub m_before: i64,
    pub m_after: i64,
}

/// Picks eigenvector `eigen_index` of the periodic operator, multiplies it by
/// `e^{iξ_j}` and reports the winding before and after.
///
/// Degenerate eigenspaces (`k` and `r/2 − k` share `sin(k·dx)`) are split by
/// the cyclic shift, which commutes with the operator, so the chosen vector is
/// a single plane wave.
pub fn winding_shift_demo(
    grid: &RingGrid,
    gauge: &GaugeSpec,
    eigen_index: usize,
) -> Result<WindingShift> {
    let op = build_linear(grid);
    let spectrum = eigh(op.entries(), DEFAULT_TOL)?;
    if eigen_index >= spectrum.len() {
        return Err(Error::Dimension {
            expected: spectrum.len(),
            found: eigen_index,
        });
    }
    let lambda = spectrum.eigenvalues[eigen_index];
    let vector = shift_resolved_vector(&spectrum, eigen_index, grid)?;

    let before = StateVector::new(grid, vector)?;
    let after = before.gauged(gauge)?;
    let m_before = winding_number(&before)?;
    let m_after = winding_number(&after)?;

    let gauged_op = apply_gauge(&op, gauge)?;
    let lambda_after = after
        .inner(&StateVector::new(grid, gauged_op.apply(after.values()))?)
        .re
        / after.inner(&after).re;

    Ok(WindingShift {
        lambda,
        lambda_after,
        m_before,
        m_after,
    })
}

fn shift_resolved_vector(
    spectrum: &Spectrum,
    index: usize,
    grid: &RingGrid,
) -> Result<Vec<Complex64>> {
    let scale = 1e-9 / grid.dx();
    let target = spectrum.eigenvalues[index];
    let close = |i: usize| (spectrum.eigenvalues[i] - target).abs() <= scale;
    let mut lo = index;
    while lo > 0 && close(lo - 1) {
        lo -= 1;
    }
    let mut hi = index + 1;
    while hi < spectrum.len() && close(hi) {
        hi += 1;
    }
    let block = &spectrum.eigenvectors[lo..hi];
    if block.len() == 1 {
        return Ok(block[0].clone());
    }

    // (T + T†)/2 with T the cyclic shift, restricted to the eigenspace
    let r = grid.r();
    let shift_sym = |v: &[Complex64]| -> Vec<Complex64> {
        (0..r)
            .map(|j| 0.5 * (v[(j + 1) % r] + v[(j + r - 1) % r]))
            .collect()
    };
    let images: Vec<Vec<Complex64>> = block.iter().map(|v| shift_sym(v)).collect();
    let projected = CMatrix::from_fn(block.len(), block.len(), |a, b| {
        block[a]
            .iter()
            .zip(&images[b])
            .map(|(x, y)| x.conj() * y)
            .sum()
    });
    let inner = eigh(&projected, DEFAULT_TOL)?;
    let coeffs = &inner.eigenvectors[index - lo];
    Ok((0..r)
        .map(|j| block.iter().zip(coeffs).map(|(v, c)| v[j] * c).sum())
        .collect())
}
