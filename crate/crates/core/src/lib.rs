//! Momentum operator on a discretized one-dimensional quantum ring.
//!
//! The crate builds the central-difference momentum matrix on a ring of `r`
//! points with either periodic (linear) or phase-twisted boundary conditions,
//! diagonalizes it with a self-contained Hermitian eigensolver, and provides
//! the analytic band oracle, gauge checks and superposition tests used to
//! validate the twisted spectrum `λ = Δα/2π + n`.
//!
//! Units: `ħ = 1`, ring circumference `2π`, coordinate `x ∈ [−π, π)`.

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod gauge;
pub mod matrix;
pub mod operator;
pub mod ring;

pub use num_complex::Complex64;

pub use analysis::{
    analytic_spectrum, classify_spectrum, classify_with_sign, degenerate_transition, energy_bands,
    flux_eigenvalue, mirror_superposable, periodicity_defect, superposition_admissible, sweep,
    BandPoint, DegenerateTransition, FluxConfig, SpectrumLabel, SweepPoint, DEFAULT_BAND_TOL,
};
pub use eigen::{eigh, residual, Spectrum, DEFAULT_TOL};
pub use error::{Error, Result};
pub use gauge::{
    de_broglie_residual, linear_bc_momentum, verify_gauge_invariance, winding_shift_demo,
    DeBroglieRecord, WindingShift,
};
pub use matrix::CMatrix;
pub use operator::{
    apply_gauge, apply_gauge_naive, build_linear, build_operator, build_twisted,
    hermiticity_defect, BoundaryKind, BoundarySpec, GaugeSpec, RingOperator, SignConvention,
};
pub use ring::{
    build_superposition, make_grid, plane_wave, probability_current, probability_density,
    winding_number, RingGrid, StateVector, SuperpositionSpec,
};
