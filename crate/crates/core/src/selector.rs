//! Fourier coefficient estimates, the variance proxy, the Pinsker weight grid
//! and the penalized model-selection rule.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::{self, BasisIndex, CoeffVector};
use crate::error::{ensure, Error, Result};
use crate::noise::{fold_by_phase, points_per_period, ObservationPath, PeriodicBasis};

/// Observation increments on a uniform grid over `[0, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    horizon: usize,
    dt: f64,
    y_increments: Vec<f64>,
}

impl Observations {
    pub fn new(horizon: usize, dt: f64, y_increments: Vec<f64>) -> Result<Self> {
        ensure(horizon >= 1, || "horizon n must be at least 1".to_string())?;
        ensure(dt > 0.0 && dt.is_finite(), || format!("grid step dt = {dt} must be positive"))?;
        let expected = horizon as f64 / dt;
        ensure((y_increments.len() as f64 - expected).abs() < 1e-6 * expected.max(1.0), || {
            format!(
                "{} increments do not cover [0, {horizon}] with step {dt}",
                y_increments.len()
            )
        })?;
        ensure(y_increments.iter().all(|v| v.is_finite()), || "non-finite increment".to_string())?;
        Ok(Observations {
            horizon,
            dt,
            y_increments,
        })
    }

    pub fn from_path(path: &ObservationPath) -> Self {
        Observations {
            horizon: path.noise.horizon(),
            dt: path.noise.dt(),
            y_increments: path.y_increments.clone(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn increments(&self) -> &[f64] {
        &self.y_increments
    }

    fn check_resolution(&self, len: usize) -> Result<()> {
        let frequency = len / 2;
        let per_period = 1.0 / self.dt;
        if 2.0 * frequency as f64 >= per_period {
            return Err(Error::Aliasing {
                frequency,
                points_per_period: per_period.floor() as usize,
            });
        }
        Ok(())
    }
}

/// `θ̂_{j,n} = (1/n) Σ_i φ_j(c_i) Δy_i` with `c_i` the midpoint of cell `i`.
pub fn estimate_theta(obs: &Observations, j: BasisIndex) -> Result<f64> {
    let n = obs.horizon;
    if j.get() > n {
        return Err(Error::IndexBeyondHorizon { j: j.get(), n });
    }
    obs.check_resolution(j.get())?;
    let dt = obs.dt;
    let sum: f64 = obs
        .y_increments
        .iter()
        .enumerate()
        .map(|(i, dy)| basis::phi_periodic(j.get(), (i as f64 + 0.5) * dt) * dy)
        .sum();
    Ok(sum / n as f64)
}

/// Batched estimator for `θ̂_{1..=len}` reusing precomputed basis tables.
#[derive(Debug, Clone)]
pub struct ThetaEstimator {
    tables: PeriodicBasis,
}

impl ThetaEstimator {
    pub fn new(len: usize, dt: f64) -> Result<Self> {
        let m = points_per_period(dt).ok_or_else(|| {
            Error::InvalidArgument(format!("batched estimation needs 1/dt integral, got dt = {dt}"))
        })?;
        ensure(len >= 1, || "need at least one coefficient".to_string())?;
        if 2 * (len / 2) >= m {
            return Err(Error::Aliasing {
                frequency: len / 2,
                points_per_period: m,
            });
        }
        Ok(ThetaEstimator {
            tables: PeriodicBasis::new(len, m),
        })
    }

    pub fn len(&self) -> usize {
        self.tables.max_index()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `θ̂` from raw increments covering `[0, n]`.
    pub fn estimate(&self, y_increments: &[f64], n: usize) -> Result<CoeffVector> {
        let m = self.tables.points_per_period();
        ensure(y_increments.len() == n * m, || {
            format!("expected {} increments, got {}", n * m, y_increments.len())
        })?;
        if self.len() > n {
            return Err(Error::IndexBeyondHorizon { j: self.len(), n });
        }
        let folded = fold_by_phase(y_increments, m);
        let scale = 1.0 / n as f64;
        Ok(CoeffVector::new(
            (1..=self.len())
                .map(|j| self.tables.mid(j).iter().zip(&folded).map(|(f, v)| f * v).sum::<f64>() * scale)
                .collect(),
        ))
    }
}

/// `θ̂_{1..=len}`; uses the batched estimator when `1/dt` is an integer.
pub fn estimate_theta_vector(obs: &Observations, len: usize) -> Result<CoeffVector> {
    if len > obs.horizon {
        return Err(Error::IndexBeyondHorizon { j: len, n: obs.horizon });
    }
    obs.check_resolution(len)?;
    if points_per_period(obs.dt).is_some() && (obs.horizon as f64 / obs.dt).fract() == 0.0 {
        return ThetaEstimator::new(len, obs.dt)?.estimate(&obs.y_increments, obs.horizon);
    }
    (1..=len)
        .map(|j| estimate_theta(obs, BasisIndex::new(j)?))
        .collect::<Result<Vec<_>>>()
        .map(CoeffVector::new)
}

/// First index of the variance-proxy sum, `⌊√n⌋ + 1`.
pub fn sigma_start(n: usize) -> usize {
    (n as f64).sqrt().floor() as usize + 1
}

/// `σ̂_n = Σ_{j=⌊√n⌋+1}^{n} θ̂²_{j,n}`.
pub fn estimate_sigma(theta_hat: &CoeffVector, n: usize) -> Result<f64> {
    let l = sigma_start(n);
    if n < 4 || l > n {
        return Err(Error::HorizonTooSmall {
            n,
            reason: "variance proxy needs ⌊√n⌋ + 1 ≤ n",
        });
    }
    ensure(theta_hat.truncation() >= n, || {
        format!("variance proxy needs θ̂ up to {n}, got {}", theta_hat.truncation())
    })?;
    Ok((l..=n).map(|j| theta_hat.get(j).powi(2)).sum())
}

/// Grid index of a weight sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Alpha {
    Pinsker { beta: u32, t: f64 },
    Custom,
}

/// Weights `γ(1..=support)`, implicitly zero beyond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    pub alpha: Alpha,
    gamma: Vec<f64>,
}

impl WeightSequence {
    pub fn custom(gamma: Vec<f64>) -> Result<Self> {
        ensure(gamma.iter().all(|g| (0.0..=1.0).contains(g)), || "weights must lie in [0, 1]".to_string())?;
        let mut gamma = gamma;
        while gamma.last() == Some(&0.0) {
            gamma.pop();
        }
        Ok(WeightSequence {
            alpha: Alpha::Custom,
            gamma,
        })
    }

    /// Projection onto the first `d` coordinates.
    pub fn projection(d: usize) -> Self {
        WeightSequence {
            alpha: Alpha::Custom,
            gamma: vec![1.0; d],
        }
    }

    pub fn zero() -> Self {
        WeightSequence {
            alpha: Alpha::Custom,
            gamma: Vec::new(),
        }
    }

    /// `γ(j)`, 1-based.
    pub fn get(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        self.gamma.get(j - 1).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }

    /// `#(γ)`.
    pub fn support(&self) -> usize {
        self.gamma.len()
    }

    /// `|γ|² = Σ γ(j)²`.
    pub fn energy(&self) -> f64 {
        self.gamma.iter().map(|g| g * g).sum()
    }

    /// `(γ(j) θ̂_j)_j` over the support.
    pub fn apply(&self, theta_hat: &CoeffVector) -> CoeffVector {
        CoeffVector::new(
            self.gamma
                .iter()
                .enumerate()
                .map(|(i, g)| g * theta_hat.get(i + 1))
                .collect(),
        )
    }
}

/// `τ_β = (β+1)(2β+1) / (π^{2β} β)`.
pub fn tau_beta(beta: u32) -> f64 {
    let b = beta as f64;
    (b + 1.0) * (2.0 * b + 1.0) / (PI.powi(2 * beta as i32) * b)
}

/// `ω_α = (τ_β t n)^{1/(2β+1)}`.
pub fn omega(beta: u32, t: f64, n: usize) -> f64 {
    (tau_beta(beta) * t * n as f64).powf(1.0 / (2.0 * beta as f64 + 1.0))
}

/// Pinsker weight: `1` for `j ≤ j₀ = ⌊ω/ln n⌋`, `1 - (j/ω)^β` up to `ω`, then `0`.
pub fn pinsker_weight(beta: u32, t: f64, n: usize) -> Result<WeightSequence> {
    ensure(beta >= 1, || "β must be a positive integer".to_string())?;
    ensure(t > 0.0 && t.is_finite(), || format!("t = {t} must be positive"))?;
    if n < 3 {
        return Err(Error::HorizonTooSmall {
            n,
            reason: "Pinsker weights need ln n > 1",
        });
    }
    let w = omega(beta, t, n);
    let j0 = (w / (n as f64).ln()).floor() as usize;
    let support = (w.floor() as usize).min(n);
    let mut gamma: Vec<f64> = (1..=support)
        .map(|j| {
            if j <= j0 {
                1.0
            } else {
                (1.0 - (j as f64 / w).powi(beta as i32)).max(0.0)
            }
        })
        .collect();
    while gamma.last() == Some(&0.0) {
        gamma.pop();
    }
    Ok(WeightSequence {
        alpha: Alpha::Pinsker { beta, t },
        gamma,
    })
}

pub fn default_epsilon(n: usize) -> f64 {
    1.0 / ((n + 1) as f64).ln()
}

pub fn default_k_star(n: usize) -> usize {
    ((n + 1) as f64).ln().sqrt().ceil() as usize
}

/// The family `Γ = {γ_α : α ∈ {1..k*} × {ε, 2ε, …, mε}}`, `m = ⌊1/ε²⌋`,
/// ordered by `β` then `t`. Members with empty support are left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightGrid {
    pub n: usize,
    pub k_star: usize,
    pub epsilon: f64,
    pub m: usize,
    pub members: Vec<WeightSequence>,
    /// Grid points whose weight sequence was empty.
    pub dropped: usize,
}

impl WeightGrid {
    /// `ν`, the number of candidate sequences.
    pub fn nu(&self) -> usize {
        self.members.len()
    }

    /// `k*·m`, the nominal grid size.
    pub fn nominal_size(&self) -> usize {
        self.k_star * self.m
    }

    /// `μ = max #(γ)`.
    pub fn mu(&self) -> usize {
        self.members.iter().map(WeightSequence::support).max().unwrap_or(0)
    }

    pub fn omega_max(&self) -> f64 {
        self.members
            .iter()
            .map(|w| match w.alpha {
                Alpha::Pinsker { beta, t } => omega(beta, t, self.n),
                Alpha::Custom => w.support() as f64,
            })
            .fold(0.0, f64::max)
    }

    pub fn singleton(n: usize, member: WeightSequence) -> Self {
        WeightGrid {
            n,
            k_star: 1,
            epsilon: 1.0,
            m: 1,
            members: vec![member],
            dropped: 0,
        }
    }
}

pub fn build_grid(n: usize, k_star: usize, epsilon: f64) -> Result<WeightGrid> {
    ensure(k_star >= 1, || "k* must be at least 1".to_string())?;
    ensure(epsilon > 0.0 && epsilon <= 1.0, || format!("grid pitch ε = {epsilon} must lie in (0, 1]"))?;
    let m = (1.0 / (epsilon * epsilon)).floor() as usize;
    let mut members = Vec::with_capacity(k_star * m);
    let mut dropped = 0;
    for beta in 1..=k_star as u32 {
        for i in 1..=m {
            let w = pinsker_weight(beta, i as f64 * epsilon, n)?;
            if w.support() == 0 {
                dropped += 1;
            } else {
                members.push(w);
            }
        }
    }
    if members.is_empty() {
        return Err(Error::HorizonTooSmall {
            n,
            reason: "every grid weight sequence is empty",
        });
    }
    Ok(WeightGrid {
        n,
        k_star,
        epsilon,
        m,
        members,
        dropped,
    })
}

pub fn default_grid(n: usize) -> Result<WeightGrid> {
    build_grid(n, default_k_star(n), default_epsilon(n))
}

/// `ρ_n = 1 / (6 + ln(n+1))`.
pub fn rho_schedule(n: usize) -> f64 {
    1.0 / (6.0 + ((n + 1) as f64).ln())
}

/// Source of the noise level plugged into the cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum SigmaMode {
    Known(f64),
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub rho: f64,
    pub sigma_mode: SigmaMode,
}

impl SelectionConfig {
    pub fn new(rho: f64, sigma_mode: SigmaMode) -> Result<Self> {
        ensure(rho > 0.0 && rho < 1.0 / 3.0, || format!("penalty ρ = {rho} must lie in (0, 1/3)"))?;
        if let SigmaMode::Known(s) = sigma_mode {
            ensure(s >= 0.0 && s.is_finite(), || format!("known noise level {s} must be ≥ 0"))?;
        }
        Ok(SelectionConfig { rho, sigma_mode })
    }

    pub fn scheduled(n: usize, sigma_mode: SigmaMode) -> Result<Self> {
        Self::new(rho_schedule(n), sigma_mode)
    }
}

/// `J_n(γ) = Σγ²θ̂² - 2Σγ(θ̂² - σ/n) + ρσ|γ|²/n`.
pub fn cost(gamma: &WeightSequence, theta_hat: &CoeffVector, sigma: f64, rho: f64, n: usize) -> f64 {
    let shift = sigma / n as f64;
    let mut fit = 0.0;
    let mut cross = 0.0;
    let mut energy = 0.0;
    for (i, g) in gamma.as_slice().iter().enumerate() {
        let t2 = theta_hat.get(i + 1).powi(2);
        fit += g * g * t2;
        cross += g * (t2 - shift);
        energy += g * g;
    }
    fit - 2.0 * cross + rho * sigma * energy / n as f64
}

/// Index of the smallest value, first one on ties.
pub fn argmin_first(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            Some(b) if values[b] <= *v => {}
            _ if v.is_nan() => {}
            _ => best = Some(i),
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub n: usize,
    pub rho: f64,
    pub theta_hat: Vec<f64>,
    pub sigma_hat: Option<f64>,
    pub sigma_used: f64,
    pub costs: Vec<f64>,
    pub selected: usize,
    pub selected_alpha: Alpha,
    pub final_coeffs: Vec<f64>,
}

impl EstimationResult {
    pub fn estimate_at(&self, x: f64) -> f64 {
        basis::synthesize(&CoeffVector::new(self.final_coeffs.clone()), x)
    }
}

/// Minimizes the cost over the grid. In estimated mode `θ̂` must reach `n`.
pub fn select(theta_hat: &CoeffVector, grid: &WeightGrid, config: &SelectionConfig) -> Result<EstimationResult> {
    let n = grid.n;
    ensure(!grid.members.is_empty(), || "empty weight grid".to_string())?;
    let (sigma_hat, sigma_used) = match config.sigma_mode {
        SigmaMode::Known(s) => (None, s),
        SigmaMode::Estimated => {
            let s = estimate_sigma(theta_hat, n)?;
            (Some(s), s)
        }
    };
    let costs: Vec<f64> = grid
        .members
        .iter()
        .map(|g| cost(g, theta_hat, sigma_used, config.rho, n))
        .collect();
    let selected = argmin_first(&costs).ok_or_else(|| Error::InvalidArgument("all costs are NaN".to_string()))?;
    let chosen = &grid.members[selected];
    let keep = grid.mu().max(2 * grid.omega_max().ceil() as usize).min(theta_hat.truncation());
    Ok(EstimationResult {
        n,
        rho: config.rho,
        theta_hat: theta_hat.as_slice()[..keep].to_vec(),
        sigma_hat,
        sigma_used,
        costs,
        selected,
        selected_alpha: chosen.alpha,
        final_coeffs: chosen.apply(theta_hat).into_vec(),
    })
}

/// Full pipeline on one observation record.
pub fn estimate(obs: &Observations, grid: &WeightGrid, config: &SelectionConfig) -> Result<EstimationResult> {
    let n = obs.horizon();
    ensure(grid.n == n, || format!("grid built for n = {}, observations span {n}", grid.n))?;
    let len = match config.sigma_mode {
        SigmaMode::Estimated => n,
        SigmaMode::Known(_) => grid.mu().max(2 * grid.omega_max().ceil() as usize).min(n),
    };
    let theta = estimate_theta_vector(obs, len)?;
    select(&theta, grid, config)
}

/// Weight sequence of the known-smoothness procedure, `α₀ = (k, t₀)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleWeight {
    pub weight: WeightSequence,
    pub t0: f64,
    /// `α₀` lies in the grid `{1..k*} × {ε, …, mε}`.
    pub in_grid: bool,
}

/// `t₀ = ⌊r̄/ε⌋ ε` with `r̄ = r/ς*`.
pub fn oracle_weight_alpha0(k: u32, r: f64, sigma_star: f64, n: usize, epsilon: f64) -> Result<OracleWeight> {
    ensure(sigma_star > 0.0 && r > 0.0, || "r and ς* must be positive".to_string())?;
    ensure(epsilon > 0.0 && epsilon <= 1.0, || format!("grid pitch ε = {epsilon} must lie in (0, 1]"))?;
    let r_bar = r / sigma_star;
    let t0 = (r_bar / epsilon + 1e-12).floor() * epsilon;
    if t0 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "t₀ = 0: grid pitch ε = {epsilon} is coarser than r/ς* = {r_bar}"
        )));
    }
    let m = (1.0 / (epsilon * epsilon)).floor();
    let k_star = default_k_star(n);
    let in_grid = t0 <= m * epsilon + 1e-12 && (k as usize) <= k_star;
    if !in_grid {
        log::warn!("α₀ = ({k}, {t0}) lies outside the selection grid at n = {n}");
    }
    Ok(OracleWeight {
        weight: pinsker_weight(k, t0, n)?,
        t0,
        in_grid,
    })
}
