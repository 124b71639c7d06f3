//! Trigonometric orthonormal basis of `L²[0,1]`, Fourier analysis and synthesis.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::quadrature;

/// One-based index into the trigonometric basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct BasisIndex(usize);

impl BasisIndex {
    pub fn new(j: usize) -> Result<Self> {
        ensure(j >= 1, || "basis indices start at 1".to_string())?;
        Ok(BasisIndex(j))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `[j/2]`, the integer frequency of the element.
    pub fn frequency(self) -> usize {
        self.0 / 2
    }
}

impl TryFrom<usize> for BasisIndex {
    type Error = Error;
    fn try_from(j: usize) -> Result<Self> {
        BasisIndex::new(j)
    }
}

impl From<BasisIndex> for usize {
    fn from(j: BasisIndex) -> usize {
        j.0
    }
}

/// `φ_j` at any real `x`, using the natural 1-periodic extension.
#[inline]
pub fn phi_periodic(j: usize, x: f64) -> f64 {
    debug_assert!(j >= 1);
    if j == 1 {
        return 1.0;
    }
    let arg = 2.0 * PI * (j / 2) as f64 * x;
    if j.is_multiple_of(2) {
        SQRT_2 * arg.cos()
    } else {
        SQRT_2 * arg.sin()
    }
}

/// `φ_j(x)` for `x ∈ [0, 1]`.
pub fn phi(j: BasisIndex, x: f64) -> Result<f64> {
    ensure((0.0..=1.0).contains(&x), || format!("x = {x} lies outside [0, 1]"))?;
    Ok(phi_periodic(j.get(), x))
}

/// Truncated coefficient sequence `(θ_1, ..., θ_J)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVector(Vec<f64>);

impl CoeffVector {
    pub fn new(values: Vec<f64>) -> Self {
        CoeffVector(values)
    }

    pub fn zeros(len: usize) -> Self {
        CoeffVector(vec![0.0; len])
    }

    /// Unit vector `e_j`.
    pub fn unit(j: BasisIndex, len: usize) -> Self {
        let mut v = vec![0.0; len.max(j.get())];
        v[j.get() - 1] = 1.0;
        CoeffVector(v)
    }

    pub fn truncation(&self) -> usize {
        self.0.len()
    }

    /// Coefficient `θ_j` (zero beyond the truncation).
    pub fn get(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        self.0.get(j - 1).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn truncated(&self, len: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(len, 0.0);
        CoeffVector(v)
    }
}

impl From<Vec<f64>> for CoeffVector {
    fn from(v: Vec<f64>) -> Self {
        CoeffVector(v)
    }
}

/// Settings for Fourier-coefficient quadrature on the unit period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub points: usize,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            points: 4096,
            tolerance: 1e-9,
        }
    }
}

/// `θ_j = ∫_0^1 S φ_j` by the periodic rectangle rule, with an error estimate
/// from the half grid.
pub fn fourier_coeff_of<F: Fn(f64) -> f64>(s: F, j: BasisIndex, quad: QuadratureConfig) -> Result<f64> {
    quadrature::periodic_mean_checked(|t| s(t) * phi_periodic(j.get(), t), quad.points, quad.tolerance)
}

/// `Σ_j c_j φ_j(x)`.
pub fn synthesize(coeffs: &CoeffVector, x: f64) -> f64 {
    coeffs
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, c)| if *c == 0.0 { 0.0 } else { c * phi_periodic(i + 1, x) })
        .sum()
}

/// `Σ_j (c1_j - c2_j)²`, zero-padding the shorter vector.
pub fn parseval_sq_distance(c1: &CoeffVector, c2: &CoeffVector) -> f64 {
    let len = c1.truncation().max(c2.truncation());
    (1..=len)
        .map(|j| {
            let d = c1.get(j) - c2.get(j);
            d * d
        })
        .sum()
}

/// Deterministic integrand on `[0, horizon]`, as consumed by the stochastic
/// integral and transform code.
pub trait Integrand: Sync {
    fn value(&self, t: f64) -> f64;

    /// Exact `sup |f|` on `[0, horizon]` when known in closed form.
    fn sup_norm(&self, _horizon: f64) -> Option<f64> {
        None
    }
}

impl<F> Integrand for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// `φ_j` extended periodically to the whole half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisFn(pub usize);

impl Integrand for BasisFn {
    #[inline]
    fn value(&self, t: f64) -> f64 {
        phi_periodic(self.0, t)
    }

    fn sup_norm(&self, horizon: f64) -> Option<f64> {
        if self.0 == 1 {
            Some(1.0)
        } else if horizon >= 0.25 || self.0.is_multiple_of(2) {
            // cos attains √2 at 0; sin reaches it by a quarter period.
            Some(SQRT_2)
        } else {
            None
        }
    }
}

/// Constant integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl Integrand for Constant {
    fn value(&self, _t: f64) -> f64 {
        self.0
    }

    fn sup_norm(&self, _horizon: f64) -> Option<f64> {
        Some(self.0.abs())
    }
}

/// `sup |f|` over `[0, horizon]`, falling back to a dense grid scan.
pub fn sup_norm<F: Integrand + ?Sized>(f: &F, horizon: f64, points: usize) -> f64 {
    if let Some(v) = f.sup_norm(horizon) {
        return v;
    }
    let h = horizon / points as f64;
    (0..=points).map(|i| f.value(i as f64 * h).abs()).fold(0.0, f64::max)
}
