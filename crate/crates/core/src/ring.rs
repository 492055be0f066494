//! Ring discretization, state vectors and the seam-aware observables.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{GaugeSpec, SignConvention};

/// Uniform grid of `r` points on the ring `[−π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingGrid {
    r: usize,
    dx: f64,
    x: Vec<f64>,
}

impl RingGrid {
    pub fn new(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidGrid(r));
        }
        let dx = 2.0 * PI / r as f64;
        let x = (0..r).map(|j| -PI + j as f64 * dx).collect();
        Ok(Self { r, dx, x })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.r {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.r,
                found: len,
            })
        }
    }
}

pub fn make_grid(r: usize) -> Result<RingGrid> {
    RingGrid::new(r)
}

/// Complex amplitudes sampled on a [`RingGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    values: Vec<Complex64>,
    grid: RingGrid,
}

impl StateVector {
    pub fn new(grid: &RingGrid, values: Vec<Complex64>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(Self {
            values,
            grid: grid.clone(),
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn grid(&self) -> &RingGrid {
        &self.grid
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unit-norm copy; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.map(|v| v / norm)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// Multiplies every sample by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        self.map(|v| v * phase)
    }

    /// Pointwise gauge factor `e^{iξ_j}`.
    pub fn gauged(&self, gauge: &GaugeSpec) -> Result<Self> {
        self.grid.check_len(gauge.xi().len())?;
        let values = self
            .values
            .iter()
            .zip(gauge.xi())
            .map(|(v, xi)| v * Complex64::from_polar(1.0, *xi))
            .collect();
        Ok(Self {
            values,
            grid: self.grid.clone(),
        })
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            values: self.values.iter().copied().map(f).collect(),
            grid: self.grid.clone(),
        }
    }
}

/// Mode content of a superposition `e^{iξ} e^{iqx} Σ a_n e^{inx}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionSpec {
    q: f64,
    terms: Vec<(f64, Complex64)>,
}

impl SuperpositionSpec {
    pub fn new(q: f64, terms: Vec<(f64, Complex64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSpec("no terms".into()));
        }
        for (i, (n, a)) in terms.iter().enumerate() {
            if !n.is_finite() || !a.re.is_finite() || !a.im.is_finite() || !q.is_finite() {
                return Err(Error::InvalidSpec(format!("term {i} is not finite")));
            }
            if terms[..i].iter().any(|(m, _)| m == n) {
                return Err(Error::InvalidSpec(format!("mode n = {n} repeated")));
            }
        }
        if terms.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>() <= 0.0 {
            return Err(Error::InvalidSpec("all coefficients are zero".into()));
        }
        Ok(Self { q, terms })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn terms(&self) -> &[(f64, Complex64)] {
        &self.terms
    }

    /// Σ|a_n|².
    pub fn weight(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }
}

/// `Γ e^{ikx_j}` with `Γ = 1/√r` when `normalize` is set, else 1.
pub fn plane_wave(grid: &RingGrid, k: f64, normalize: bool) -> StateVector {
    let gamma = if normalize {
        1.0 / (grid.r() as f64).sqrt()
    } else {
        1.0
    };
    let values = grid
        .x()
        .iter()
        .map(|&x| Complex64::from_polar(gamma, k * x))
        .collect();
    StateVector {
        values,
        grid: grid.clone(),
    }
}

pub fn probability_density(psi: &StateVector) -> Vec<f64> {
    psi.values.iter().map(|v| v.norm_sqr()).collect()
}

/// `J_j = Im(conj(v_j)·(Dv)_j)` with `D` the central difference closed across
/// the seam by the same twist factor the operator with `sign` uses.
pub fn probability_current(psi: &StateVector, delta_alpha: f64, sign: SignConvention) -> Vec<f64> {
    let v = &psi.values;
    let r = v.len();
    let dx = psi.grid.dx();
    let twist = sign.seam_factor(delta_alpha);
    (0..r)
        .map(|j| {
            let next = if j + 1 == r { twist * v[0] } else { v[j + 1] };
            let prev = if j == 0 { v[r - 1] / twist } else { v[j - 1] };
            let dv = (next - prev) / (2.0 * dx);
            (v[j].conj() * dv).im
        })
        .collect()
}

/// Net number of 2π phase wraps around the ring, summing principal-value
/// phase increments between neighbours (seam included).
pub fn winding_number(psi: &StateVector) -> Result<i64> {
    let v = &psi.values;
    let r = v.len();
    if let Some(index) = v
        .iter()
        .position(|z| z.norm() == 0.0 || !z.norm().is_finite())
    {
        return Err(Error::UndefinedWinding {
            index,
            reason: "zero or non-finite amplitude",
        });
    }
    let mut total = 0.0;
    for j in 0..r {
        let step = (v[(j + 1) % r] / v[j]).arg();
        // atan2 lands on ±π only up to rounding, so treat a near-π jump as ambiguous
        if PI - step.abs() <= 1e-9 {
            return Err(Error::UndefinedWinding {
                index: j,
                reason: "phase increment of π between neighbours",
            });
        }
        total += step;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Samples `e^{iξ_j} e^{iqx_j} Σ a_n e^{inx_j}` and normalizes to unit norm.
pub fn build_superposition(
    spec: &SuperpositionSpec,
    gauge: &GaugeSpec,
    grid: &RingGrid,
) -> Result<StateVector> {
    grid.check_len(gauge.xi().len())?;
    let values: Vec<Complex64> = grid
        .x()
        .iter()
        .zip(gauge.xi())
        .map(|(&x, &xi)| {
            let sum: Complex64 = spec
                .terms
                .iter()
                .map(|(n, a)| a * Complex64::from_polar(1.0, n * x))
                .sum();
            Complex64::from_polar(1.0, xi + spec.q * x) * sum
        })
        .collect();
    let state = StateVector {
        values,
        grid: grid.clone(),
    };
    if state.norm() == 0.0 {
        return Err(Error::InvalidSpec(
            "superposition vanishes on the grid".into(),
        ));
    }
    Ok(state.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_of_four() {
        let g = make_grid(4).unwrap();
        assert_eq!(g.dx(), PI / 2.0);
        assert_eq!(g.x(), &[-PI, -PI / 2.0, 0.0, PI / 2.0]);
    }

    #[test]
    fn grid_of_twenty() {
        let g = make_grid(20).unwrap();
        assert!((g.dx() - PI / 10.0).abs() < 1e-15);
        assert_eq!(g.x()[0], -PI);
    }

    #[test]
    fn grid_too_small() {
        assert_eq!(make_grid(2), Err(Error::InvalidGrid(2)));
        assert!(make_grid(0).is_err());
    }

    #[test]
    fn constant_plane_wave() {
        let g = make_grid(7).unwrap();
        let psi = plane_wave(&g, 0.0, true);
        for v in psi.values() {
            assert!((v - c(1.0 / 7f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_plane_wave_on_four_points() {
        let g = make_grid(4).unwrap();
        let psi = plane_wave(&g, 1.0, false);
        let expected = [
            Complex64::from_polar(1.0, -PI),
            Complex64::from_polar(1.0, -PI / 2.0),
            c(1.0, 0.0),
            Complex64::from_polar(1.0, PI / 2.0),
        ];
        for (v, e) in psi.values().iter().zip(expected) {
            assert!((v - e).norm() < 1e-15);
        }
    }

    #[test]
    fn density_cases() {
        let g = make_grid(20).unwrap();
        for k in [0.0, 0.37, 3.0, -5.5] {
            for rho in probability_density(&plane_wave(&g, k, true)) {
                assert!((rho - 0.05).abs() < 1e-15);
            }
        }
        let zero = StateVector::new(&g, vec![c(0.0, 0.0); 20]).unwrap();
        assert!(probability_density(&zero).iter().all(|&p| p == 0.0));

        let a = plane_wave(&g, 0.0, false);
        let b = plane_wave(&g, 1.0, false);
        let sum = StateVector::new(
            &g,
            a.values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| x + y)
                .collect(),
        )
        .unwrap();
        for (rho, x) in probability_density(&sum).iter().zip(g.x()) {
            assert!((rho - (2.0 + 2.0 * x.cos())).abs() < 1e-13);
        }
    }

    #[test]
    fn current_of_real_states_vanishes() {
        let g = make_grid(20).unwrap();
        let constant = plane_wave(&g, 0.0, true);
        assert!(
            probability_current(&constant, 0.0, SignConvention::FigureB1)
                .iter()
                .all(|j| j.abs() < 1e-15)
        );
        let real =
            StateVector::new(&g, g.x().iter().map(|x| c(x.sin() + 0.3, 0.0)).collect()).unwrap();
        for sign in [SignConvention::FigureB1, SignConvention::PaperLiteral] {
            assert!(probability_current(&real, 0.0, sign)
                .iter()
                .all(|j| *j == 0.0));
        }
    }

    #[test]
    fn current_of_unit_plane_wave() {
        let g = make_grid(20).unwrap();
        let psi = plane_wave(&g, 1.0, false);
        let expected = g.dx().sin() / g.dx();
        assert!((expected - 0.9836316).abs() < 5e-8);
        for j in probability_current(&psi, 0.0, SignConvention::FigureB1) {
            assert!((j - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn current_of_twisted_plane_wave_is_uniform() {
        let g = make_grid(20).unwrap();
        let da = 1.3;
        let q = da / (2.0 * PI);
        for (sign, k) in [
            (SignConvention::FigureB1, q + 2.0),
            (SignConvention::PaperLiteral, 2.0 - q),
        ] {
            let j = probability_current(&plane_wave(&g, k, true), da, sign);
            let expected = (k * g.dx()).sin() / g.dx() / 20.0;
            assert!(j.iter().all(|v| (v - expected).abs() < 1e-12), "{sign:?}");
        }
        // the untwisted difference sees a kink at the seam
        let j = probability_current(
            &plane_wave(&g, q + 2.0, true),
            0.0,
            SignConvention::FigureB1,
        );
        assert!((j[0] - j[5]).abs() > 1e-3);
    }

    /// Independent oracle: unwrap neighbour phase steps by brute force.
    fn winding_oracle(values: &[Complex64]) -> i64 {
        let r = values.len();
        let mut total = 0.0;
        for j in 0..r {
            let mut d = values[(j + 1) % r].arg() - values[j].arg();
            while d > PI {
                d -= 2.0 * PI;
            }
            while d <= -PI {
                d += 2.0 * PI;
            }
            total += d;
        }
        (total / (2.0 * PI)).round() as i64
    }

    #[test]
    fn winding_examples() {
        let g = make_grid(20).unwrap();
        assert_eq!(winding_number(&plane_wave(&g, 0.0, true)).unwrap(), 0);
        assert_eq!(winding_number(&plane_wave(&g, 2.0, true)).unwrap(), 2);
        assert_eq!(winding_number(&plane_wave(&g, 3.0, false)).unwrap(), 3);
        assert_eq!(winding_number(&plane_wave(&g, 0.5, true)).unwrap(), 0);
        let psi = plane_wave(&g, 3.0, false);
        assert_eq!(winding_oracle(psi.values()), 3);
    }

    #[test]
    fn winding_rejects_zero_and_pi_steps() {
        let g = make_grid(4).unwrap();
        let mut vals = plane_wave(&g, 1.0, true).into_values();
        vals[2] = c(0.0, 0.0);
        let psi = StateVector::new(&g, vals).unwrap();
        assert!(matches!(
            winding_number(&psi),
            Err(Error::UndefinedWinding { index: 2, .. })
        ));
        // k = 2 on four points steps by exactly π
        assert!(matches!(
            winding_number(&plane_wave(&g, 2.0, true)),
            Err(Error::UndefinedWinding { .. })
        ));
    }

    #[test]
    fn superposition_single_term_is_plane_wave() {
        let g = make_grid(20).unwrap();
        let spec = SuperpositionSpec::new(0.7, vec![(0.0, c(1.0, 0.0))]).unwrap();
        let psi = build_superposition(&spec, &GaugeSpec::zero(&g), &g).unwrap();
        let pw = plane_wave(&g, 0.7, true);
        for (a, b) in psi.values().iter().zip(pw.values()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn superposition_two_terms_density() {
        let g = make_grid(20).unwrap();
        let spec =
            SuperpositionSpec::new(0.0, vec![(0.0, c(1.0, 0.0)), (1.0, c(1.0, 0.0))]).unwrap();
        let psi = build_superposition(&spec, &GaugeSpec::zero(&g), &g).unwrap();
        // Σ(2 + 2cos x_j) = 2r over a full period
        for (rho, x) in probability_density(&psi).iter().zip(g.x()) {
            assert!((rho - (2.0 + 2.0 * x.cos()) / 40.0).abs() < 1e-15);
        }
    }

    #[test]
    fn superposition_spec_errors() {
        assert!(SuperpositionSpec::new(0.0, vec![]).is_err());
        assert!(SuperpositionSpec::new(0.0, vec![(0.0, c(0.0, 0.0)), (1.0, c(0.0, 0.0))]).is_err());
        assert!(SuperpositionSpec::new(0.0, vec![(1.0, c(1.0, 0.0)), (1.0, c(0.0, 1.0))]).is_err());
    }

    #[test]
    fn state_length_checked() {
        let g = make_grid(5).unwrap();
        assert_eq!(
            StateVector::new(&g, vec![c(1.0, 0.0); 4]),
            Err(Error::Dimension {
                expected: 5,
                found: 4
            })
        );
    }

    fn arb_state() -> impl Strategy<Value = Vec<(f64, f64)>> {
        (3usize..40).prop_flat_map(|r| prop::collection::vec((0.1f64..2.0, -PI..PI), r))
    }

    proptest! {
        #[test]
        fn winding_is_odd_under_conjugation(polar in arb_state()) {
            let g = make_grid(polar.len()).unwrap();
            let psi = StateVector::new(&g, polar.iter().map(|&(m, t)| Complex64::from_polar(m, t)).collect()).unwrap();
            if let Ok(w) = winding_number(&psi) {
                prop_assert_eq!(winding_number(&psi.conj()).unwrap(), -w);
                prop_assert_eq!(w, winding_oracle(psi.values()));
            }
        }

        #[test]
        fn density_ignores_global_phase(polar in arb_state(), theta in -10.0f64..10.0) {
            let g = make_grid(polar.len()).unwrap();
            let psi = StateVector::new(&g, polar.iter().map(|&(m, t)| Complex64::from_polar(m, t)).collect()).unwrap();
            let a = probability_density(&psi);
            let b = probability_density(&psi.with_global_phase(theta));
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-14 * x.max(1.0));
            }
            let total: f64 = probability_density(&psi.normalized()).iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn bloch_plane_waves_carry_uniform_current(r in 3usize..60, n in -5i32..5, da in 0.0f64..(2.0 * PI)) {
            let g = make_grid(r).unwrap();
            let k = da / (2.0 * PI) + n as f64;
            let j = probability_current(&plane_wave(&g, k, true), da, SignConvention::FigureB1);
            for v in &j {
                prop_assert!((v - j[0]).abs() < 1e-12);
            }
        }
    }
}
