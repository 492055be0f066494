//! Analytic band oracle for the twisted operator, eigenvalue classification,
//! superposition admissibility, energy bands and the flux-shifted eigenvalue.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{eigh, Spectrum};
use crate::error::{Error, Result};
use crate::operator::{build_twisted, SignConvention};
use crate::ring::{RingGrid, SuperpositionSpec};

/// Relative departure from the continuum line above which a mode is aliased.
pub const DEFAULT_BAND_TOL: f64 = 0.1;

/// Integer-distance tolerance for admissibility and half-integer tests.
const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLabel {
    pub n: i64,
    /// `q + n`
    pub lambda_continuum: f64,
    /// `sin((q + n)·dx)/dx`
    pub lambda_discrete: f64,
    pub aliased: bool,
    pub matched_numeric: Option<f64>,
}

impl SpectrumLabel {
    fn new(n: i64, q: f64, dx: f64, band_tol: f64) -> Self {
        let lambda_continuum = q + n as f64;
        let lambda_discrete = (lambda_continuum * dx).sin() / dx;
        let aliased =
            (lambda_discrete - lambda_continuum).abs() > band_tol * lambda_continuum.abs().max(1.0);
        Self {
            n,
            lambda_continuum,
            lambda_discrete,
            aliased,
            matched_numeric: None,
        }
    }
}

/// Exact spectrum of `build_twisted(grid, Δα, FigureB1)`: one label per `n`
/// with `q + n ∈ (−r/2, r/2]`, `q = Δα/2π`, in ascending `n`.
pub fn analytic_spectrum(grid: &RingGrid, delta_alpha: f64) -> Vec<SpectrumLabel> {
    analytic_spectrum_with(grid, delta_alpha, DEFAULT_BAND_TOL)
}

pub fn analytic_spectrum_with(
    grid: &RingGrid,
    delta_alpha: f64,
    band_tol: f64,
) -> Vec<SpectrumLabel> {
    let q = delta_alpha / (2.0 * PI);
    let r = grid.r() as i64;
    let n_lo = (-q - grid.r() as f64 / 2.0).floor() as i64 + 1;
    (n_lo..n_lo + r)
        .map(|n| SpectrumLabel::new(n, q, grid.dx(), band_tol))
        .collect()
}

/// Pairs numeric eigenvalues with analytic labels in ascending order.
///
/// Returns labels sorted by `lambda_discrete` with `matched_numeric` filled.
/// Any pair further apart than `match_tol` fails the whole classification.
pub fn classify_spectrum(
    spec: &Spectrum,
    grid: &RingGrid,
    delta_alpha: f64,
    match_tol: f64,
) -> Result<Vec<SpectrumLabel>> {
    let mut labels = analytic_spectrum(grid, delta_alpha);
    if spec.len() != labels.len() {
        return Err(Error::Dimension {
            expected: labels.len(),
            found: spec.len(),
        });
    }
    labels.sort_by(|a, b| a.lambda_discrete.total_cmp(&b.lambda_discrete));
    let mut offenders = Vec::new();
    for (i, (label, &numeric)) in labels.iter_mut().zip(&spec.eigenvalues).enumerate() {
        label.matched_numeric = Some(numeric);
        if (numeric - label.lambda_discrete).abs() > match_tol {
            offenders.push((i, numeric, label.lambda_discrete));
        }
    }
    if offenders.is_empty() {
        Ok(labels)
    } else {
        Err(Error::Classification(offenders))
    }
}

/// One point of a `Δα` sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub delta_alpha: f64,
    pub spectrum: Spectrum,
    pub labels: Vec<SpectrumLabel>,
}

/// Diagonalizes and classifies the twisted operator at each `Δα`, in parallel;
/// output order follows `deltas`.
pub fn sweep(
    grid: &RingGrid,
    deltas: &[f64],
    sign: SignConvention,
    tol: f64,
    match_tol: f64,
) -> Vec<Result<SweepPoint>> {
    deltas
        .par_iter()
        .map(|&delta_alpha| {
            let op = build_twisted(grid, delta_alpha, sign);
            let spectrum = eigh(op.entries(), tol)?;
            let labels = classify_with_sign(&spectrum, grid, delta_alpha, sign, match_tol)?;
            Ok(SweepPoint {
                delta_alpha,
                spectrum,
                labels,
            })
        })
        .collect()
}

/// [`classify_spectrum`] for either corner convention. The literal convention
/// has the mirrored spectrum, so it is classified by reflection and its labels
/// carry `λ = n − q`.
pub fn classify_with_sign(
    spec: &Spectrum,
    grid: &RingGrid,
    delta_alpha: f64,
    sign: SignConvention,
    match_tol: f64,
) -> Result<Vec<SpectrumLabel>> {
    match sign {
        SignConvention::FigureB1 => classify_spectrum(spec, grid, delta_alpha, match_tol),
        SignConvention::PaperLiteral => {
            let mut mirrored = spec.clone();
            mirrored.eigenvalues = spec.eigenvalues.iter().rev().map(|l| -l).collect();
            let mut labels = classify_spectrum(&mirrored, grid, delta_alpha, match_tol)?;
            labels.reverse();
            for l in &mut labels {
                l.n = -l.n;
                l.lambda_continuum = -l.lambda_continuum;
                l.lambda_discrete = -l.lambda_discrete;
                l.matched_numeric = l.matched_numeric.map(|v| -v);
            }
            Ok(labels)
        }
    }
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= INTEGER_TOL
}

/// True iff every pairwise difference is within `1e−9` of an integer.
pub fn superposition_admissible(eigenvalues: &[f64]) -> bool {
    eigenvalues
        .iter()
        .enumerate()
        .all(|(i, a)| eigenvalues[i + 1..].iter().all(|b| near_integer(a - b)))
}

/// Mirror states `±(q+n)` can be superposed iff `2q` is an integer.
pub fn mirror_superposable(q: f64) -> bool {
    near_integer(2.0 * q)
}

/// Seam mismatch of `ρ`, `ρ'`, `J` and `J'` for the continuum superposition
/// `Σ a_n e^{i(q+n)x}`, normalized by `Σ|a_n|²`.
pub fn periodicity_defect(spec: &SuperpositionSpec) -> f64 {
    let at = |x: f64| {
        let mut psi = Complex64::new(0.0, 0.0);
        let mut d1 = Complex64::new(0.0, 0.0);
        let mut d2 = Complex64::new(0.0, 0.0);
        for (n, a) in spec.terms() {
            let k = spec.q() + n;
            let wave = a * Complex64::from_polar(1.0, k * x);
            psi += wave;
            d1 += Complex64::new(0.0, k) * wave;
            d2 += -k * k * wave;
        }
        let rho = psi.norm_sqr();
        let rho_x = 2.0 * (psi.conj() * d1).re;
        let current = (psi.conj() * d1).im;
        // (ψ*ψ')' = |ψ'|² + ψ*ψ'', and |ψ'|² is real
        let current_x = (psi.conj() * d2).im;
        [rho, rho_x, current, current_x]
    };
    let right = at(PI);
    let left = at(-PI);
    right
        .iter()
        .zip(&left)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / spec.weight()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub n: i64,
    pub momentum: f64,
    pub energy: f64,
}

/// `E = (q + n)²` for `n_min ..= n_max`; empty when `n_min > n_max`.
pub fn energy_bands(q: f64, n_min: i64, n_max: i64) -> Vec<BandPoint> {
    (n_min..=n_max)
        .map(|n| {
            let momentum = q + n as f64;
            BandPoint {
                n,
                momentum,
                energy: momentum * momentum,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateTransition {
    /// Positive-momentum member first.
    pub pair: (i64, i64),
    pub momentum_transfer: f64,
}

/// Lowest-energy pair `n₁ ≠ n₂` with `(q+n₁)² = (q+n₂)²`; exists iff `2q ∈ ℤ`.
pub fn degenerate_transition(q: f64) -> Option<DegenerateTransition> {
    if !mirror_superposable(q) {
        return None;
    }
    let twice = (2.0 * q).round() as i64;
    // smallest nonzero |q + n| is 1/2 for half-integer q, 1 for integer q
    let momentum = if twice.rem_euclid(2) == 0 { 1.0 } else { 0.5 };
    let upper = (momentum - q).round() as i64;
    let lower = (-momentum - q).round() as i64;
    Some(DegenerateTransition {
        pair: (upper, lower),
        momentum_transfer: 2.0 * momentum,
    })
}

/// Charged particle on a flux-threaded ring. `gamma` only partitions the
/// curl-free part of the vector potential between operator and wavefunction
/// and never enters the eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxConfig {
    pub charge: f64,
    pub flux: f64,
    pub radius: f64,
    pub gamma: f64,
}

impl FluxConfig {
    pub fn new(charge: f64, flux: f64, radius: f64, gamma: f64) -> Result<Self> {
        let cfg = Self {
            charge,
            flux,
            radius,
            gamma,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Dimensionless form: `phase = e·Φ_T` on a unit-radius ring.
    pub fn from_phase(phase: f64) -> Self {
        Self {
            charge: 1.0,
            flux: phase,
            radius: 1.0,
            gamma: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.radius.is_finite() || self.radius <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidConfig(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// `e·Φ_T/(2π·r)`.
    pub fn offset(&self) -> f64 {
        self.charge * self.flux / (2.0 * PI * self.radius)
    }
}

/// `λ = n + e·Φ_T/(2π·r)`.
pub fn flux_eigenvalue(n: i64, cfg: &FluxConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(n as f64 + cfg.offset())
}
