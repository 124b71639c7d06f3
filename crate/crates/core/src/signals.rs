//! Catalogue of 1-periodic test signals with their smoothness metadata.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::basis::{self, BasisIndex, CoeffVector, QuadratureConfig};
use crate::error::{Error, Result};
use crate::quadrature;

/// Closed-form family a signal belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalKind {
    Zero,
    /// Finite trigonometric polynomial `Σ c_j φ_j`.
    Trig { coeffs: Vec<f64> },
    /// `amplitude · exp(cos 2πt)`.
    ExpCos { amplitude: f64 },
    /// `amplitude · B₃(t mod 1)` with `B₃` the third Bernoulli polynomial.
    /// Continuously differentiable and periodic, with `θ_{2p+1} ∝ p⁻³`.
    Bernoulli3 { amplitude: f64 },
}

/// A test signal together with the Sobolev-ball parameters it is declared in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub name: String,
    pub kind: SignalKind,
    /// Smoothness order of the declared ball `W^k_r`.
    pub k: u32,
    /// Radius of the declared ball.
    pub r: f64,
}

/// Result of an ellipsoid membership test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub margin: f64,
    /// The truncated sum is within tolerance of the radius, so this
    /// truncation cannot decide membership.
    pub undecidable: bool,
}

/// `a_j = Σ_{i=0}^{k} (2π[j/2])^{2i}`.
pub fn ellipsoid_weight(j: BasisIndex, k: u32) -> f64 {
    let w = 2.0 * PI * j.frequency() as f64;
    let w2 = w * w;
    let mut term = 1.0;
    let mut sum = 1.0;
    for _ in 0..k {
        term *= w2;
        sum += term;
    }
    sum
}

impl SignalSpec {
    pub fn new(name: impl Into<String>, kind: SignalKind, k: u32, r: f64) -> Self {
        SignalSpec {
            name: name.into(),
            kind,
            k,
            r,
        }
    }

    pub fn zero() -> Self {
        SignalSpec::new("zero", SignalKind::Zero, 1, 1.0)
    }

    pub fn constant(c: f64) -> Self {
        SignalSpec::new("constant", SignalKind::Trig { coeffs: vec![c] }, 1, (c * c).max(f64::MIN_POSITIVE))
    }

    /// `S(t)`, extended periodically.
    pub fn value(&self, t: f64) -> f64 {
        match &self.kind {
            SignalKind::Zero => 0.0,
            SignalKind::Trig { coeffs } => coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * basis::phi_periodic(i + 1, t))
                .sum(),
            SignalKind::ExpCos { amplitude } => amplitude * (2.0 * PI * t).cos().exp(),
            SignalKind::Bernoulli3 { amplitude } => {
                let x = reduce(t);
                amplitude * (x * x * x - 1.5 * x * x + 0.5 * x)
            }
        }
    }

    /// `Ṡ(t)`, supplied in closed form.
    pub fn derivative(&self, t: f64) -> f64 {
        match &self.kind {
            SignalKind::Zero => 0.0,
            SignalKind::Trig { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| {
                    let j = i + 1;
                    let w = 2.0 * PI * (j / 2) as f64;
                    let arg = w * t;
                    if j % 2 == 0 {
                        -c * SQRT_2 * w * arg.sin()
                    } else {
                        c * SQRT_2 * w * arg.cos()
                    }
                })
                .sum(),
            SignalKind::ExpCos { amplitude } => {
                let arg = 2.0 * PI * t;
                -amplitude * 2.0 * PI * arg.sin() * arg.cos().exp()
            }
            SignalKind::Bernoulli3 { amplitude } => {
                let x = reduce(t);
                3.0 * amplitude * (x * x - x + 1.0 / 6.0)
            }
        }
    }

    /// Fourier coefficients in closed form, when available.
    pub fn analytic_coeffs(&self, len: usize) -> Option<CoeffVector> {
        match &self.kind {
            SignalKind::Zero => Some(CoeffVector::zeros(len)),
            SignalKind::Trig { coeffs } => {
                let mut v = coeffs.clone();
                v.resize(len, 0.0);
                Some(CoeffVector::new(v))
            }
            SignalKind::ExpCos { .. } => None,
            SignalKind::Bernoulli3 { amplitude } => {
                let v = (1..=len)
                    .map(|j| {
                        if j >= 3 && j % 2 == 1 {
                            let p = (j / 2) as f64;
                            amplitude * 3.0 / (2.0 * SQRT_2 * PI.powi(3) * p.powi(3))
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Some(CoeffVector::new(v))
            }
        }
    }

    /// `θ_j` for a single index.
    pub fn fourier_coeff(&self, j: BasisIndex, quad: QuadratureConfig) -> Result<f64> {
        if let Some(c) = self.analytic_coeffs(j.get()) {
            return Ok(c.get(j.get()));
        }
        basis::fourier_coeff_of(|t| self.value(t), j, quad)
    }

    /// `(θ_1, ..., θ_len)`, analytic where possible.
    pub fn coefficients(&self, len: usize, quad: QuadratureConfig) -> Result<CoeffVector> {
        if let Some(c) = self.analytic_coeffs(len) {
            return Ok(c);
        }
        let values = (1..=len)
            .map(|j| basis::fourier_coeff_of(|t| self.value(t), BasisIndex::new(j)?, quad))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoeffVector::new(values))
    }

    /// `‖S‖² = ∫_0^1 S²`.
    pub fn energy(&self) -> f64 {
        match &self.kind {
            SignalKind::Zero => 0.0,
            SignalKind::Trig { coeffs } => coeffs.iter().map(|c| c * c).sum(),
            SignalKind::Bernoulli3 { amplitude } => amplitude * amplitude / 840.0,
            SignalKind::ExpCos { .. } => quadrature::periodic_mean(|t| self.value(t).powi(2), 4096),
        }
    }

    /// `Σ_{j > len} θ_j²`.
    pub fn tail_energy(&self, len: usize, quad: QuadratureConfig) -> Result<f64> {
        let head = self.coefficients(len, quad)?.energy();
        Ok((self.energy() - head).max(0.0))
    }

    /// `|Ṡ|_1 = ∫_0^1 |Ṡ|`.
    pub fn ds_l1(&self) -> f64 {
        match &self.kind {
            SignalKind::Zero => 0.0,
            // total variation of e^{cos}: twice the range
            SignalKind::ExpCos { amplitude } => amplitude.abs() * 2.0 * (1f64.exp() - (-1f64).exp()),
            _ => quadrature::composite_gauss(|t| self.derivative(t).abs(), 0.0, 1.0, 4096),
        }
    }

    /// Integral of `S` over `[lo, hi]` (Gauss-Legendre).
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        match &self.kind {
            SignalKind::Zero => 0.0,
            _ => quadrature::gauss_legendre(|t| self.value(t), lo, hi),
        }
    }

    /// Largest mismatch `|S⁽ⁱ⁾(0) - S⁽ⁱ⁾(1)|` for `i ∈ {0, 1}`.
    pub fn boundary_mismatch(&self) -> f64 {
        let d0 = (self.value(0.0) - self.value_unreduced(1.0)).abs();
        let d1 = (self.derivative(0.0) - self.derivative_unreduced(1.0)).abs();
        d0.max(d1)
    }

    fn value_unreduced(&self, t: f64) -> f64 {
        match &self.kind {
            SignalKind::Bernoulli3 { amplitude } => amplitude * (t * t * t - 1.5 * t * t + 0.5 * t),
            _ => self.value(t),
        }
    }

    fn derivative_unreduced(&self, t: f64) -> f64 {
        match &self.kind {
            SignalKind::Bernoulli3 { amplitude } => 3.0 * amplitude * (t * t - t + 1.0 / 6.0),
            _ => self.derivative(t),
        }
    }

    /// `r - Σ_{j≤J} a_j θ_j²` against the declared ball.
    pub fn check_sobolev_membership(&self, truncation: usize, quad: QuadratureConfig) -> Result<Membership> {
        let coeffs = self.coefficients(truncation, quad)?;
        let sum: f64 = coeffs
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, th)| ellipsoid_weight(BasisIndex::new(i + 1).expect("one-based"), self.k) * th * th)
            .sum();
        let margin = self.r - sum;
        let undecidable = margin.abs() <= 1e-9 * self.r.max(1.0);
        if undecidable {
            log::warn!(
                "signal `{}`: truncated ellipsoid sum is within tolerance of r = {}; membership undecidable at J = {}",
                self.name,
                self.r,
                truncation
            );
        }
        Ok(Membership {
            member: margin >= 0.0,
            margin,
            undecidable,
        })
    }

    /// Cell integrals `∫ S` over the cells of a grid with `points_per_period`
    /// cells per unit period, indexed by phase.
    pub fn period_cell_integrals(&self, points_per_period: usize) -> Vec<f64> {
        let h = 1.0 / points_per_period as f64;
        (0..points_per_period)
            .map(|p| self.integral(p as f64 * h, (p + 1) as f64 * h))
            .collect()
    }
}

fn reduce(t: f64) -> f64 {
    t - t.floor()
}

/// Names accepted by [`catalogue`].
pub const CATALOGUE: [&str; 4] = ["zero", "trig", "expcos", "bernoulli3"];

/// Looks up a catalogue signal by name.
///
/// * `zero`: the null signal.
/// * `trig`: a band-limited trigonometric polynomial.
/// * `expcos`: `exp(cos 2πt)`, smooth with full spectrum.
/// * `bernoulli3`: `4·B₃(t)`, a `C¹` periodic signal inside `W¹_1`.
pub fn catalogue(name: &str) -> Result<SignalSpec> {
    let spec = match name {
        "zero" => SignalSpec::zero(),
        "trig" => SignalSpec::new(
            "trig",
            SignalKind::Trig {
                coeffs: vec![0.5, 0.4, 0.3, 0.0, 0.0, -0.2],
            },
            1,
            25.0,
        ),
        "expcos" => SignalSpec::new("expcos", SignalKind::ExpCos { amplitude: 1.0 }, 1, 34.0),
        "bernoulli3" => SignalSpec::new("bernoulli3", SignalKind::Bernoulli3 { amplitude: 4.0 }, 1, 1.0),
        other => return Err(Error::UnknownSignal(other.to_string())),
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn idx(j: usize) -> BasisIndex {
        BasisIndex::new(j).unwrap()
    }

    /// Modified Bessel function `I_p(1)` from its power series.
    fn bessel_i_at_one(p: usize) -> f64 {
        let mut term = 0.5f64.powi(p as i32) / (1..=p).map(|x| x as f64).product::<f64>();
        let mut sum = term;
        for m in 1..40 {
            term *= 0.25 / (m as f64 * (m + p) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn ellipsoid_weight_values() {
        // [1/2] = 0 leaves only the i = 0 term
        assert_eq!(ellipsoid_weight(idx(1), 1), 1.0);
        assert_eq!(ellipsoid_weight(idx(1), 3), 1.0);
        assert_abs_diff_eq!(ellipsoid_weight(idx(2), 1), 1.0 + 4.0 * PI * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(ellipsoid_weight(idx(3), 2), 1599.023874148396, epsilon = 1e-9);
    }

    #[test]
    fn ellipsoid_weight_is_monotone() {
        for k in 1..4 {
            for j in 2..40 {
                let a = ellipsoid_weight(idx(j), k);
                let b = ellipsoid_weight(idx(j + 2), k);
                assert!(b > a);
                assert!(ellipsoid_weight(idx(j), k + 1) > a);
            }
        }
    }

    #[test]
    fn membership_zero_signal() {
        let m = SignalSpec::zero().check_sobolev_membership(50, QuadratureConfig::default()).unwrap();
        assert!(m.member);
        assert_eq!(m.margin, 1.0);
    }

    #[test]
    fn membership_boundary_and_outside() {
        let r = 2.0;
        let a3 = ellipsoid_weight(idx(3), 1);
        let c = (r / a3).sqrt();
        let on = SignalSpec::new("b", SignalKind::Trig { coeffs: vec![0.0, 0.0, c] }, 1, r);
        let m = on.check_sobolev_membership(10, QuadratureConfig::default()).unwrap();
        assert_abs_diff_eq!(m.margin, 0.0, epsilon = 1e-12);
        assert!(m.undecidable);
        let out = SignalSpec::new("o", SignalKind::Trig { coeffs: vec![0.0, 0.0, 2.0 * c] }, 1, r);
        let m = out.check_sobolev_membership(10, QuadratureConfig::default()).unwrap();
        assert!(!m.member);
        assert_abs_diff_eq!(m.margin, -3.0 * r, epsilon = 1e-9);
    }

    #[test]
    fn catalogue_members_sit_in_their_balls() {
        for name in CATALOGUE {
            let s = catalogue(name).unwrap();
            let m = s.check_sobolev_membership(400, QuadratureConfig::default()).unwrap();
            assert!(m.member, "{name}: margin {}", m.margin);
            assert!(s.boundary_mismatch() < 1e-12, "{name}");
        }
        assert!(catalogue("nope").is_err());
    }

    #[test]
    fn expcos_coefficients_match_bessel_series() {
        let s = catalogue("expcos").unwrap();
        let c = s.coefficients(12, QuadratureConfig::default()).unwrap();
        assert_abs_diff_eq!(c.get(1), bessel_i_at_one(0), epsilon = 1e-13);
        for p in 1..6 {
            assert_abs_diff_eq!(c.get(2 * p), SQRT_2 * bessel_i_at_one(p), epsilon = 1e-13);
            assert_abs_diff_eq!(c.get(2 * p + 1), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn bernoulli_coefficients_match_quadrature() {
        let s = catalogue("bernoulli3").unwrap();
        let analytic = s.analytic_coeffs(15).unwrap();
        for j in 1..=15 {
            let numeric = quadrature::composite_gauss(|t| s.value(t) * basis::phi_periodic(j, t), 0.0, 1.0, 64);
            assert_abs_diff_eq!(analytic.get(j), numeric, epsilon = 1e-12);
        }
        let energy = quadrature::composite_gauss(|t| s.value(t).powi(2), 0.0, 1.0, 16);
        assert_abs_diff_eq!(s.energy(), energy, epsilon = 1e-14);
    }

    #[test]
    fn derivative_norms() {
        let e = catalogue("expcos").unwrap();
        let numeric = quadrature::composite_gauss(|t| e.derivative(t).abs(), 0.0, 1.0, 4096);
        assert_abs_diff_eq!(e.ds_l1(), numeric, epsilon = 1e-9);
        // derivative agrees with a central difference
        for s in CATALOGUE.iter().map(|n| catalogue(n).unwrap()) {
            for &t in &[0.1, 0.37, 0.8] {
                let h = 1e-6;
                let fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
                assert_abs_diff_eq!(s.derivative(t), fd, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn cell_integrals_sum_to_mean() {
        for name in CATALOGUE {
            let s = catalogue(name).unwrap();
            let cells = s.period_cell_integrals(64);
            let theta1 = s.fourier_coeff(idx(1), QuadratureConfig::default()).unwrap();
            assert_abs_diff_eq!(cells.iter().sum::<f64>(), theta1, epsilon = 1e-12);
        }
    }
}
