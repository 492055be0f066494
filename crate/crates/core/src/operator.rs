//! Central-difference momentum matrix on the ring, its twisted-seam variant,
//! and discrete gauge transformations.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::ring::RingGrid;

/// Orientation of the corner phases of the twisted operator.
///
/// With `FigureB1` the exact plane-wave eigenvectors are `e^{ikx}` with
/// `k = Δα/2π + n`; with `PaperLiteral` (corners `+ie^{iΔα}`, `−ie^{−iΔα}`
/// taken verbatim) they are `k = n − Δα/2π`, a reflected spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    #[default]
    FigureB1,
    PaperLiteral,
}

impl SignConvention {
    /// Factor `t` closing the stencil across the seam: `v_r = t·v_0`,
    /// `v_{−1} = v_{r−1}/t`.
    pub fn seam_factor(self, delta_alpha: f64) -> Complex64 {
        match self {
            SignConvention::FigureB1 => Complex64::from_polar(1.0, delta_alpha),
            SignConvention::PaperLiteral => Complex64::from_polar(1.0, -delta_alpha),
        }
    }

    /// Sign `s` such that plane waves `k = s·Δα/2π + n` diagonalize the operator.
    pub fn band_sign(self) -> f64 {
        match self {
            SignConvention::FigureB1 => 1.0,
            SignConvention::PaperLiteral => -1.0,
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::FigureB1 => "figureb1",
            SignConvention::PaperLiteral => "paperliteral",
        })
    }
}

impl FromStr for SignConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "figureb1" => Ok(SignConvention::FigureB1),
            "paperliteral" => Ok(SignConvention::PaperLiteral),
            other => Err(format!("unknown sign convention '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    Linear,
    Twisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    kind: BoundaryKind,
    delta_alpha: f64,
    sign: SignConvention,
}

impl BoundarySpec {
    pub fn linear() -> Self {
        Self {
            kind: BoundaryKind::Linear,
            delta_alpha: 0.0,
            sign: SignConvention::default(),
        }
    }

    pub fn twisted(delta_alpha: f64, sign: SignConvention) -> Self {
        Self {
            kind: BoundaryKind::Twisted,
            delta_alpha,
            sign,
        }
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn delta_alpha(&self) -> f64 {
        self.delta_alpha
    }

    pub fn sign(&self) -> SignConvention {
        self.sign
    }
}

/// Sampled gauge function `ξ(x_j)` with its seam jump `Δξ = ξ(π) − ξ(−π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeSpec {
    xi: Vec<f64>,
    delta_xi: f64,
    r: usize,
}

impl GaugeSpec {
    /// Validates that `ξ_x` is periodic: the increment across the seam must
    /// agree with the mean of its two neighbours within `10·dx²`.
    pub fn new(grid: &RingGrid, xi: Vec<f64>, delta_xi: f64) -> Result<Self> {
        let tol = 10.0 * grid.dx() * grid.dx();
        Self::with_tolerance(grid, xi, delta_xi, tol)
    }

    pub fn with_tolerance(grid: &RingGrid, xi: Vec<f64>, delta_xi: f64, tol: f64) -> Result<Self> {
        grid.check_len(xi.len())?;
        if xi.iter().any(|v| !v.is_finite()) || !delta_xi.is_finite() {
            return Err(Error::InvalidGauge("non-finite sample".into()));
        }
        let r = xi.len();
        let seam = xi[0] + delta_xi - xi[r - 1];
        let before = xi[r - 1] - xi[r - 2];
        let after = xi[1] - xi[0];
        let defect = (seam - 0.5 * (before + after)).abs();
        if defect > tol {
            return Err(Error::InvalidGauge(format!(
                "derivative not periodic: seam increment {seam} vs neighbours {before}, {after} (defect {defect:e} > {tol:e})"
            )));
        }
        Ok(Self { xi, delta_xi, r })
    }

    pub fn zero(grid: &RingGrid) -> Self {
        Self {
            xi: vec![0.0; grid.r()],
            delta_xi: 0.0,
            r: grid.r(),
        }
    }

    /// `ξ = s·x`, `Δξ = 2πs`.
    pub fn linear(grid: &RingGrid, slope: f64) -> Self {
        Self {
            xi: grid.x().iter().map(|x| slope * x).collect(),
            delta_xi: 2.0 * PI * slope,
            r: grid.r(),
        }
    }

    /// `ξ = a·sin(h·x)` with integer `h`, `Δξ = 0`.
    pub fn sine(grid: &RingGrid, amplitude: f64, harmonic: i64) -> Self {
        Self {
            xi: grid
                .x()
                .iter()
                .map(|x| amplitude * (harmonic as f64 * x).sin())
                .collect(),
            delta_xi: 0.0,
            r: grid.r(),
        }
    }

    /// Parses `zero`, `linear:<s>`, `sin:<a>:<h>`, or a `+`-joined sum of them.
    pub fn parse(spec: &str, grid: &RingGrid) -> Result<Self> {
        let mut total = GaugeSpec::zero(grid);
        for term in spec.split('+').map(str::trim) {
            let parts: Vec<&str> = term.split(':').collect();
            let piece = match parts.as_slice() {
                ["zero"] => GaugeSpec::zero(grid),
                ["linear", s] => GaugeSpec::linear(grid, parse_num(s, term)?),
                ["sin", a, h] => {
                    let harmonic = h.trim().parse::<i64>().map_err(|_| {
                        Error::InvalidGauge(format!("harmonic must be an integer in '{term}'"))
                    })?;
                    GaugeSpec::sine(grid, parse_num(a, term)?, harmonic)
                }
                _ => {
                    return Err(Error::InvalidGauge(format!(
                        "unrecognized gauge term '{term}'"
                    )))
                }
            };
            total = total.plus(&piece)?;
        }
        GaugeSpec::new(grid, total.xi, total.delta_xi)
    }

    /// Pointwise sum of two gauges on the same grid.
    pub fn plus(&self, other: &GaugeSpec) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::Dimension {
                expected: self.r,
                found: other.r,
            });
        }
        Ok(Self {
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
            delta_xi: self.delta_xi + other.delta_xi,
            r: self.r,
        })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn delta_xi(&self) -> f64 {
        self.delta_xi
    }

    /// Central-difference samples of `ξ_x`, using `Δξ` to continue across the seam.
    pub fn derivative(&self, dx: f64) -> Vec<f64> {
        let r = self.r;
        (0..r)
            .map(|j| {
                let next = if j + 1 == r {
                    self.xi[0] + self.delta_xi
                } else {
                    self.xi[j + 1]
                };
                let prev = if j == 0 {
                    self.xi[r - 1] - self.delta_xi
                } else {
                    self.xi[j - 1]
                };
                (next - prev) / (2.0 * dx)
            })
            .collect()
    }
}

fn parse_num(s: &str, term: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidGauge(format!("bad number '{s}' in '{term}'")))
}

/// Dense momentum matrix with its boundary metadata. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct RingOperator {
    entries: CMatrix,
    grid: RingGrid,
    boundary: BoundarySpec,
    gauge: Option<GaugeSpec>,
}

impl RingOperator {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn grid(&self) -> &RingGrid {
        &self.grid
    }

    pub fn boundary(&self) -> &BoundarySpec {
        &self.boundary
    }

    pub fn gauge(&self) -> Option<&GaugeSpec> {
        self.gauge.as_ref()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.entries.mul_vec(v)
    }
}

/// Periodic central difference: `−i/(2dx)` above the diagonal, `+i/(2dx)`
/// below, closed by `(1,r) = +i/(2dx)` and `(r,1) = −i/(2dx)`.
pub fn build_linear(grid: &RingGrid) -> RingOperator {
    RingOperator {
        entries: stencil(grid, Complex64::new(1.0, 0.0)),
        grid: grid.clone(),
        boundary: BoundarySpec::linear(),
        gauge: None,
    }
}

/// Same stencil as [`build_linear`] with the two corner cells rotated in
/// opposite directions by `Δα`.
pub fn build_twisted(grid: &RingGrid, delta_alpha: f64, sign: SignConvention) -> RingOperator {
    RingOperator {
        entries: stencil(grid, sign.seam_factor(delta_alpha)),
        grid: grid.clone(),
        boundary: BoundarySpec::twisted(delta_alpha, sign),
        gauge: None,
    }
}

pub fn build_operator(grid: &RingGrid, boundary: &BoundarySpec) -> RingOperator {
    match boundary.kind() {
        BoundaryKind::Linear => build_linear(grid),
        BoundaryKind::Twisted => build_twisted(grid, boundary.delta_alpha(), boundary.sign()),
    }
}

fn stencil(grid: &RingGrid, seam: Complex64) -> CMatrix {
    let r = grid.r();
    let half = 1.0 / (2.0 * grid.dx());
    let upper = Complex64::new(0.0, -half);
    let mut m = CMatrix::zeros(r, r);
    for j in 0..r - 1 {
        m[(j, j + 1)] = upper;
        m[(j + 1, j)] = upper.conj();
    }
    let corner = Complex64::new(0.0, half) * seam.conj();
    m[(0, r - 1)] = corner;
    m[(r - 1, 0)] = corner.conj();
    m
}

/// Unitary conjugation `U·L·U†` with `U = diag(e^{iξ_j})`.
pub fn apply_gauge(op: &RingOperator, gauge: &GaugeSpec) -> Result<RingOperator> {
    op.grid.check_len(gauge.xi.len())?;
    let r = op.grid.r();
    let mut entries = op.entries.clone();
    for j in 0..r {
        for k in j..r {
            let z = op.entries[(j, k)];
            if z == Complex64::new(0.0, 0.0) {
                continue;
            }
            let rotated = z * Complex64::from_polar(1.0, gauge.xi[j] - gauge.xi[k]);
            entries[(j, k)] = rotated;
            if j != k {
                entries[(k, j)] = rotated.conj();
            }
        }
    }
    Ok(RingOperator {
        entries,
        grid: op.grid.clone(),
        boundary: op.boundary,
        gauge: Some(compose_gauge(op.gauge.as_ref(), gauge)?),
    })
}

/// Discretized `−i∂ − ξ_x`: subtracts the sampled gauge derivative from the
/// diagonal. Only approaches [`apply_gauge`] as `dx → 0`, and only for
/// continuous `ξ`.
pub fn apply_gauge_naive(op: &RingOperator, gauge: &GaugeSpec) -> Result<RingOperator> {
    op.grid.check_len(gauge.xi.len())?;
    let mut entries = op.entries.clone();
    for (j, d) in gauge.derivative(op.grid.dx()).into_iter().enumerate() {
        entries[(j, j)] -= Complex64::new(d, 0.0);
    }
    Ok(RingOperator {
        entries,
        grid: op.grid.clone(),
        boundary: op.boundary,
        gauge: Some(compose_gauge(op.gauge.as_ref(), gauge)?),
    })
}

fn compose_gauge(existing: Option<&GaugeSpec>, extra: &GaugeSpec) -> Result<GaugeSpec> {
    match existing {
        Some(g) => g.plus(extra),
        None => Ok(extra.clone()),
    }
}

pub fn hermiticity_defect(op: &RingOperator) -> f64 {
    op.entries.hermiticity_defect()
}
