//! Monte Carlo risk laboratory: quadratic risk of weighted estimators, the
//! oracle-inequality audit, variance-proxy consistency, the moment conditions
//! on the noise coefficients and the Pinsker efficiency experiment.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFn, CoeffVector, QuadratureConfig};
use crate::error::{ensure, Error, Result};
use crate::noise::{basis_integrals, integrals_before_jumps, observe, simulate_noise_with, FamilyBounds, NoiseParams, PeriodicBasis};
use crate::parallel::{map_indexed, Execution};
use crate::seed::{derive, replicate_rng};
use crate::selector::{
    self, argmin_first, cost, default_grid, estimate_sigma, oracle_weight_alpha0, rho_schedule, sigma_start,
    ThetaEstimator, WeightGrid, WeightSequence,
};
use crate::signals::SignalSpec;
use crate::transforms::{self, moment_constants, MomentConstants, TransformConfig};

const TAG_RISK: u64 = 0x5249_534b;
const TAG_AUDIT: u64 = 0x4155_4449;
const TAG_SIGMA: u64 = 0x5349_474d;
const TAG_COND: u64 = 0x434f_4e44;
const TAG_EFF: u64 = 0x4546_4643;
const TAG_MOM: u64 = 0x4d4f_4d45;

/// Shared Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub replicates: usize,
    pub seed: u64,
    /// Simulation grid step.
    pub dt: f64,
    #[serde(default)]
    pub execution: Execution,
}

impl MonteCarlo {
    pub fn new(replicates: usize, seed: u64, dt: f64) -> Self {
        MonteCarlo {
            replicates,
            seed,
            dt,
            execution: Execution::default(),
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    fn validate(&self, min_replicates: usize) -> Result<()> {
        ensure(self.replicates >= min_replicates, || {
            format!("need at least {min_replicates} replicates, got {}", self.replicates)
        })?;
        ensure(self.dt > 0.0 && self.dt <= 1.0, || format!("grid step dt = {} must lie in (0, 1]", self.dt))
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let r = samples.len() as f64;
        if samples.is_empty() {
            return Estimate { mean: f64::NAN, se: f64::NAN };
        }
        let mean = samples.iter().sum::<f64>() / r;
        if samples.len() < 2 {
            return Estimate { mean, se: 0.0 };
        }
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
        Estimate {
            mean,
            se: (var / r).sqrt(),
        }
    }

    /// `(mean - target) / se`, zero when both coincide.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if d == 0.0 {
            0.0
        } else {
            d / self.se
        }
    }
}

/// Unbiased sample covariance of paired samples, with the standard error of
/// the mean of the centred products.
pub fn sample_covariance(x: &[f64], y: &[f64]) -> Estimate {
    let r = x.len() as f64;
    let mx = x.iter().sum::<f64>() / r;
    let my = y.iter().sum::<f64>() / r;
    let products: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let e = Estimate::from_samples(&products);
    Estimate {
        mean: e.mean * r / (r - 1.0),
        se: e.se,
    }
}

/// `l_n = 1 + ln(n+1)`.
pub fn l_n(n: usize) -> f64 {
    1.0 + ((n + 1) as f64).ln()
}

/// Finite set of noise laws standing in for the family box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyGrid {
    pub members: Vec<NoiseParams>,
    pub bounds: FamilyBounds,
}

impl FamilyGrid {
    pub fn single(params: NoiseParams) -> Self {
        FamilyGrid {
            members: vec![params],
            bounds: FamilyBounds::around(&params),
        }
    }

    pub fn new(members: Vec<NoiseParams>, bounds: FamilyBounds) -> Result<Self> {
        ensure(!members.is_empty(), || "family grid is empty".to_string())?;
        for m in &members {
            m.validate()?;
            ensure(bounds.contains(m), || format!("member {m:?} lies outside the family box"))?;
        }
        Ok(FamilyGrid { members, bounds })
    }

    /// `a ∈ {0, -a_max/2, -a_max}` × `λ ∈ {0, λ_max/2, λ_max}` at each of the
    /// `ϱ*` corners. For `λ > 0` the variance is split evenly between the
    /// Brownian and jump parts. `(a, λ) = (0, 0)` is the Brownian member.
    pub fn box_grid(bounds: FamilyBounds) -> Self {
        let mut corners = vec![bounds.rho_star_min];
        if bounds.rho_star_max > bounds.rho_star_min {
            corners.push(bounds.rho_star_max);
        }
        let mut members = Vec::new();
        for rs in corners {
            for a in [0.0, -0.5 * bounds.a_max, -bounds.a_max] {
                for lambda in [0.0, 0.5 * bounds.lambda_max, bounds.lambda_max] {
                    let (rho1, rho2) = if lambda == 0.0 {
                        (rs.sqrt(), 0.0)
                    } else {
                        ((0.5 * rs).sqrt(), (0.5 * rs / lambda).sqrt())
                    };
                    members.push(NoiseParams {
                        a,
                        lambda,
                        rho1,
                        rho2,
                        jump_law: Default::default(),
                    });
                }
            }
        }
        FamilyGrid { members, bounds }
    }

    /// `M*` maximized over the members.
    pub fn m_star_max(&self) -> f64 {
        self.members
            .iter()
            .map(|p| moment_constants(p, &self.bounds).m_star)
            .fold(0.0, f64::max)
    }

    /// `ς* = ϱ*_max`.
    pub fn sigma_star(&self) -> f64 {
        self.bounds.rho_star_max
    }
}

/// What is being estimated in a risk run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EstimatorSpec {
    /// A fixed weight sequence.
    Fixed { weight: WeightSequence },
    /// The model-selection procedure on the default grid.
    Selected {
        sigma: SigmaChoice,
        /// `None` uses `ρ_n`.
        rho: Option<f64>,
    },
}

/// Whether the cost uses the true `ς_Q = ϱ*` or the proxy `σ̂_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaChoice {
    Known,
    Estimated,
}

/// True coefficients up to the risk truncation `J` and the tail beyond.
#[derive(Debug, Clone)]
struct Truth {
    theta: Vec<f64>,
    /// `suffix[s] = Σ_{s<j≤J} θ_j² + tail`.
    suffix: Vec<f64>,
}

impl Truth {
    fn new(signal: &SignalSpec, truncation: usize) -> Result<Self> {
        let quad = QuadratureConfig::default();
        let theta = signal.coefficients(truncation, quad)?.into_vec();
        let tail = signal.tail_energy(truncation, quad)?;
        let mut suffix = vec![0.0; truncation + 1];
        suffix[truncation] = tail;
        for s in (0..truncation).rev() {
            suffix[s] = suffix[s + 1] + theta[s] * theta[s];
        }
        Ok(Truth { theta, suffix })
    }

    fn truncation(&self) -> usize {
        self.theta.len()
    }

    /// `‖Ŝ_γ − S‖²` for the weighted estimate.
    fn loss(&self, gamma: &WeightSequence, theta_hat: &[f64]) -> f64 {
        let s = gamma.support().min(self.truncation());
        let head: f64 = (0..s)
            .map(|i| (gamma.as_slice()[i] * theta_hat[i] - self.theta[i]).powi(2))
            .sum();
        head + self.suffix[s]
    }
}

/// `J = max(2⌈ω_max⌉, 4⌈√n⌉)`.
pub fn risk_truncation(n: usize, omega_max: f64) -> usize {
    (2 * omega_max.ceil() as usize).max(4 * (n as f64).sqrt().ceil() as usize)
}

/// Simulates one observation record and returns `θ̂_{1..=len}`.
fn replicate_theta(
    signal: &SignalSpec,
    params: &NoiseParams,
    n: usize,
    dt: f64,
    estimator: &ThetaEstimator,
    seed: u64,
    r: usize,
) -> Result<Vec<f64>> {
    let mut rng = replicate_rng(seed, r as u64);
    let noise = simulate_noise_with(params, n, dt, &mut rng)?;
    let obs = observe(signal, noise);
    Ok(estimator.estimate(&obs.y_increments, n)?.into_vec())
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// Monte Carlo quadratic risk `E‖Ŝ − S‖²` with its standard error.
pub fn mc_risk(
    signal: &SignalSpec,
    params: &NoiseParams,
    n: usize,
    estimator: &EstimatorSpec,
    mc: &MonteCarlo,
) -> Result<Estimate> {
    mc.validate(100)?;
    params.validate()?;
    let seed = derive(mc.seed, &[TAG_RISK, n as u64]);
    match estimator {
        EstimatorSpec::Fixed { weight } => {
            let truth = Truth::new(signal, risk_truncation(n, weight.support() as f64).max(weight.support()))?;
            if weight.support() == 0 {
                return Ok(Estimate {
                    mean: truth.suffix[0],
                    se: 0.0,
                });
            }
            let est = ThetaEstimator::new(weight.support(), mc.dt)?;
            let losses = collect(map_indexed(mc.replicates, mc.execution, |r| {
                let th = replicate_theta(signal, params, n, mc.dt, &est, seed, r)?;
                Ok(truth.loss(weight, &th))
            }))?;
            Ok(Estimate::from_samples(&losses))
        }
        EstimatorSpec::Selected { sigma, rho } => {
            let grid = default_grid(n)?;
            let rho = rho.unwrap_or_else(|| rho_schedule(n));
            let truth = Truth::new(signal, risk_truncation(n, grid.omega_max()))?;
            let len = match sigma {
                SigmaChoice::Known => grid.mu(),
                SigmaChoice::Estimated => n,
            };
            let est = ThetaEstimator::new(len, mc.dt)?;
            let known = params.rho_star();
            let losses = collect(map_indexed(mc.replicates, mc.execution, |r| {
                let th = replicate_theta(signal, params, n, mc.dt, &est, seed, r)?;
                let s = match sigma {
                    SigmaChoice::Known => known,
                    SigmaChoice::Estimated => estimate_sigma(&CoeffVector::new(th.clone()), n)?,
                };
                let idx = select_index(&grid, &th, s, rho);
                Ok(truth.loss(&grid.members[idx], &th))
            }))?;
            Ok(Estimate::from_samples(&losses))
        }
    }
}

fn select_index(grid: &WeightGrid, theta_hat: &[f64], sigma: f64, rho: f64) -> usize {
    let th = CoeffVector::new(theta_hat.to_vec());
    let costs: Vec<f64> = grid.members.iter().map(|g| cost(g, &th, sigma, rho, grid.n)).collect();
    argmin_first(&costs).expect("grid is nonempty")
}

/// Risk of one family member, tagged with its position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemberRisk {
    pub member: usize,
    pub params: NoiseParams,
    pub risk: Estimate,
}

/// `sup_Q 𝓡_Q` over the family grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustRisk {
    pub per_member: Vec<MemberRisk>,
    pub argmax: usize,
    pub risk: Estimate,
}

pub fn robust_risk(
    signal: &SignalSpec,
    family: &FamilyGrid,
    n: usize,
    estimator: &EstimatorSpec,
    mc: &MonteCarlo,
) -> Result<RobustRisk> {
    ensure(!family.members.is_empty(), || "family grid is empty".to_string())?;
    let per_member = family
        .members
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let local = MonteCarlo {
                seed: derive(mc.seed, &[i as u64]),
                ..*mc
            };
            Ok(MemberRisk {
                member: i,
                params: *p,
                risk: mc_risk(signal, p, n, estimator, &local)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let argmax = argmax_risk(&per_member);
    Ok(RobustRisk {
        risk: per_member[argmax].risk,
        argmax,
        per_member,
    })
}

fn argmax_risk(rows: &[MemberRisk]) -> usize {
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.risk.mean > rows[best].risk.mean {
            best = i;
        }
    }
    best
}

/// `(1 + 3ρ - 2ρ²) / (1 - 3ρ)`.
pub fn oracle_coefficient(rho: f64) -> f64 {
    (1.0 + 3.0 * rho - 2.0 * rho * rho) / (1.0 - 3.0 * rho)
}

/// `Ψ_Q = (6ϱ*_max ν + 4ϱ*_max L*₁ + 56 ν M*) / (ϱ*_min ρ (1 - 3ρ))`.
pub fn psi_q(bounds: &FamilyBounds, constants: &MomentConstants, nu: usize, rho: f64) -> f64 {
    let nu = nu as f64;
    let num = 6.0 * bounds.rho_star_max * nu + 4.0 * bounds.rho_star_max * constants.l1_star + 56.0 * nu * constants.m_star;
    num / (bounds.rho_star_min * rho * (1.0 - 3.0 * rho))
}

/// `B_Q = Ψ_Q + 6μ E|σ̂_n − ς_Q| / (1 − 3ρ)`.
pub fn b_q(psi: f64, mu: usize, sigma_abs_error: f64, rho: f64) -> f64 {
    psi + 6.0 * mu as f64 * sigma_abs_error / (1.0 - 3.0 * rho)
}

/// `κ*_n(S) = 4|Ṡ|₁² + ς* + √l_n + 4|Ṡ|₁ √σ* / n^{1/4} + l_n/√n`, with
/// `σ* = 3 ϱ*_max`.
pub fn kappa_star(ds_l1: f64, sigma_star: f64, n: usize) -> f64 {
    let ln = l_n(n);
    let nf = n as f64;
    let upper = 3.0 * sigma_star;
    4.0 * ds_l1 * ds_l1 + sigma_star + ln.sqrt() + 4.0 * ds_l1 * upper.sqrt() / nf.powf(0.25) + ln / nf.sqrt()
}

/// Risk decomposition and bound terms for one audited cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub n: usize,
    pub sigma_mode: SigmaChoice,
    pub rho: f64,
    pub replicates: usize,
    pub seed: u64,
    pub nu: usize,
    pub mu: usize,
    pub per_gamma_risk: Vec<Estimate>,
    pub selected_risk: Estimate,
    pub oracle_min: Estimate,
    pub oracle_index: usize,
    pub coefficient: f64,
    pub psi_q: f64,
    pub b_q: f64,
    /// `E|σ̂_n − ϱ*|`, estimated on the same replicates.
    pub sigma_abs_error: Estimate,
    pub sigma_bound: f64,
    pub rhs: f64,
    pub pass: bool,
    pub sigma_pass: bool,
}

impl RiskReport {
    /// `selected_risk ≥ oracle_min − 3 SE`.
    pub fn oracle_never_loses(&self) -> bool {
        let se = (self.selected_risk.se.powi(2) + self.oracle_min.se.powi(2)).sqrt();
        self.oracle_min.mean <= self.selected_risk.mean + 3.0 * se
    }
}

/// Audits the oracle inequality for each requested σ-mode on shared replicates.
#[allow(clippy::too_many_arguments)]
pub fn oracle_audit(
    signal: &SignalSpec,
    params: &NoiseParams,
    bounds: &FamilyBounds,
    n: usize,
    grid: &WeightGrid,
    rho: f64,
    modes: &[SigmaChoice],
    mc: &MonteCarlo,
) -> Result<Vec<RiskReport>> {
    mc.validate(2)?;
    ensure(rho > 0.0 && rho < 1.0 / 3.0, || format!("penalty ρ = {rho} must lie in (0, 1/3)"))?;
    ensure(grid.n == n, || format!("grid built for n = {}, audit runs n = {n}", grid.n))?;
    let seed = derive(mc.seed, &[TAG_AUDIT, n as u64]);
    let truth = Truth::new(signal, risk_truncation(n, grid.omega_max()).max(grid.mu()))?;
    let est = ThetaEstimator::new(n, mc.dt)?;
    let known = params.rho_star();
    let rows = collect(map_indexed(mc.replicates, mc.execution, |r| {
        let th = replicate_theta(signal, params, n, mc.dt, &est, seed, r)?;
        let sigma_hat = estimate_sigma(&CoeffVector::new(th.clone()), n)?;
        let per_gamma: Vec<f64> = grid.members.iter().map(|g| truth.loss(g, &th)).collect();
        let selected: Vec<f64> = modes
            .iter()
            .map(|m| {
                let s = match m {
                    SigmaChoice::Known => known,
                    SigmaChoice::Estimated => sigma_hat,
                };
                per_gamma[select_index(grid, &th, s, rho)]
            })
            .collect();
        Ok((per_gamma, selected, (sigma_hat - known).abs()))
    }))?;

    let per_gamma_risk: Vec<Estimate> = (0..grid.nu())
        .map(|g| Estimate::from_samples(&rows.iter().map(|r| r.0[g]).collect::<Vec<_>>()))
        .collect();
    let oracle_index = argmin_first(&per_gamma_risk.iter().map(|e| e.mean).collect::<Vec<_>>()).expect("nonempty grid");
    let oracle_min = per_gamma_risk[oracle_index];
    let sigma_abs_error = Estimate::from_samples(&rows.iter().map(|r| r.2).collect::<Vec<_>>());
    let constants = moment_constants(params, bounds);
    let coefficient = oracle_coefficient(rho);
    let psi = psi_q(bounds, &constants, grid.nu(), rho);
    let sigma_bound = kappa_star(signal.ds_l1(), bounds.rho_star_max, n) / (n as f64).sqrt();

    Ok(modes
        .iter()
        .enumerate()
        .map(|(k, mode)| {
            let selected_risk = Estimate::from_samples(&rows.iter().map(|r| r.1[k]).collect::<Vec<_>>());
            let b = match mode {
                SigmaChoice::Known => psi,
                SigmaChoice::Estimated => b_q(psi, grid.mu(), sigma_abs_error.mean, rho),
            };
            let rhs = coefficient * oracle_min.mean + b / n as f64;
            let se = (selected_risk.se.powi(2) + (coefficient * oracle_min.se).powi(2)).sqrt();
            RiskReport {
                n,
                sigma_mode: *mode,
                rho,
                replicates: mc.replicates,
                seed: mc.seed,
                nu: grid.nu(),
                mu: grid.mu(),
                per_gamma_risk: per_gamma_risk.clone(),
                selected_risk,
                oracle_min,
                oracle_index,
                coefficient,
                psi_q: psi,
                b_q: b,
                sigma_abs_error,
                sigma_bound,
                rhs,
                pass: selected_risk.mean <= rhs + 3.0 * se,
                sigma_pass: sigma_abs_error.mean <= sigma_bound + 3.0 * sigma_abs_error.se,
            }
        })
        .collect())
}

/// One `(n, member)` cell of the variance-proxy study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaRow {
    pub n: usize,
    pub member: usize,
    pub params: NoiseParams,
    pub abs_error: Estimate,
    pub kappa: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `E|σ̂_n − ϱ*|` against `κ*_n(S)/√n` for every `n` and family member.
pub fn sigma_consistency(
    signal: &SignalSpec,
    family: &FamilyGrid,
    n_list: &[usize],
    mc: &MonteCarlo,
) -> Result<Vec<SigmaRow>> {
    mc.validate(2)?;
    let ds = signal.ds_l1();
    ensure(ds.is_finite(), || format!("signal {} has no derivative norm", signal.name))
        .map_err(|_| Error::MissingDerivativeNorm(signal.name.clone()))?;
    let mut out = Vec::new();
    for &n in n_list {
        let est = ThetaEstimator::new(n, mc.dt)?;
        let kappa = kappa_star(ds, family.sigma_star(), n);
        for (i, p) in family.members.iter().enumerate() {
            let seed = derive(mc.seed, &[TAG_SIGMA, n as u64, i as u64]);
            let target = p.rho_star();
            let errs = collect(map_indexed(mc.replicates, mc.execution, |r| {
                let th = replicate_theta(signal, p, n, mc.dt, &est, seed, r)?;
                Ok((estimate_sigma(&CoeffVector::new(th), n)? - target).abs())
            }))?;
            let abs_error = Estimate::from_samples(&errs);
            let bound = kappa / (n as f64).sqrt();
            out.push(SigmaRow {
                n,
                member: i,
                params: *p,
                abs_error,
                kappa,
                bound,
                pass: abs_error.mean <= bound + 3.0 * abs_error.se,
            });
        }
    }
    Ok(out)
}

/// Deterministic variance proxy of a noiseless record, `Σ_{j≥⌊√n⌋+1}^{n} θ_j²`.
pub fn noiseless_sigma(signal: &SignalSpec, n: usize) -> Result<f64> {
    let theta = signal.coefficients(n, QuadratureConfig::default())?;
    Ok((sigma_start(n)..=n).map(|j| theta.get(j).powi(2)).sum())
}

/// Per-coordinate check of `|E ξ²_{j,n} − ϱ*|` against its envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinateCheck {
    pub j: usize,
    pub second_moment: Estimate,
    pub deviation: f64,
    pub envelope: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub coordinates: Vec<CoordinateCheck>,
    pub l1_hat: f64,
    pub l1_bound: f64,
    pub l2_hat: f64,
    pub l2_bound: f64,
    pub pass: bool,
}

/// Envelope for `|E ξ²_{j,n} − ϱ*|`: `2ϱ*` for `j = 1`, otherwise
/// `15|a|(1+|a|)ϱ*/(π² j²)`.
pub fn c1_envelope(params: &NoiseParams, j: usize) -> f64 {
    let rs = params.rho_star();
    if j == 1 {
        2.0 * rs
    } else {
        let a = params.a.abs();
        15.0 * a * (1.0 + a) * rs / (PI * PI * (j * j) as f64)
    }
}

/// `ξ_{j,n} = I_n(φ_j)/√n` for `j = 1..=j_max` on every replicate.
pub fn simulate_noise_coordinates(params: &NoiseParams, n: usize, j_max: usize, mc: &MonteCarlo, tag: u64) -> Result<Vec<Vec<f64>>> {
    let m = crate::noise::points_per_period(mc.dt)
        .ok_or_else(|| Error::InvalidArgument(format!("dt = {} must divide the unit period", mc.dt)))?;
    let tables = PeriodicBasis::new(j_max, m);
    let seed = derive(mc.seed, &[tag, n as u64]);
    let scale = 1.0 / (n as f64).sqrt();
    collect(map_indexed(mc.replicates, mc.execution, |r| {
        let mut rng = replicate_rng(seed, r as u64);
        let path = simulate_noise_with(params, n, mc.dt, &mut rng)?;
        Ok(basis_integrals(&path, &tables)?.into_iter().map(|v| v * scale).collect())
    }))
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
pub fn largest_eigenvalue(matrix: &[Vec<f64>]) -> f64 {
    let d = matrix.len();
    if d == 0 {
        return 0.0;
    }
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut lambda = 0.0;
    for _ in 0..1000 {
        let w: Vec<f64> = (0..d).map(|i| (0..d).map(|k| matrix[i][k] * v[k]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let converged = (norm - lambda).abs() <= 1e-13 * norm;
        lambda = norm;
        v = next;
        if converged {
            break;
        }
    }
    lambda
}

/// Empirical counterparts of the conditions on `ξ_{j,n}`.
pub fn condition_checks(params: &NoiseParams, bounds: &FamilyBounds, n: usize, j_max: usize, mc: &MonteCarlo) -> Result<ConditionReport> {
    mc.validate(2)?;
    ensure(j_max >= 1 && j_max <= n, || format!("need 1 ≤ j_max = {j_max} ≤ n = {n}"))?;
    let xi = simulate_noise_coordinates(params, n, j_max, mc, TAG_COND)?;
    let rs = params.rho_star();
    let squares: Vec<Vec<f64>> = (0..j_max).map(|j| xi.iter().map(|row| row[j] * row[j]).collect()).collect();
    let coordinates: Vec<CoordinateCheck> = squares
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let j = i + 1;
            let second_moment = Estimate::from_samples(s);
            let deviation = (second_moment.mean - rs).abs();
            let envelope = c1_envelope(params, j);
            CoordinateCheck {
                j,
                second_moment,
                deviation,
                envelope,
                pass: deviation <= envelope + 3.0 * second_moment.se,
            }
        })
        .collect();
    let l1_hat = coordinates.iter().map(|c| c.deviation).sum();
    let cov: Vec<Vec<f64>> = (0..j_max)
        .map(|a| (0..j_max).map(|b| sample_covariance(&squares[a], &squares[b]).mean).collect())
        .collect();
    let l2_hat = largest_eigenvalue(&cov);
    let constants = moment_constants(params, bounds);
    let l2_bound = 28.0 * constants.m_star;
    let pass = coordinates.iter().all(|c| c.pass) && l1_hat <= constants.l1_star && l2_hat <= l2_bound;
    Ok(ConditionReport {
        coordinates,
        l1_hat,
        l1_bound: constants.l1_star,
        l2_hat,
        l2_bound,
        pass,
    })
}

/// `R*_k = ((2k+1) r)^{1/(2k+1)} (ς* k / ((k+1)π))^{2k/(2k+1)}`.
pub fn pinsker_constant(k: u32, r: f64, sigma_star: f64) -> f64 {
    let kf = k as f64;
    let p = 2.0 * kf + 1.0;
    (p * r).powf(1.0 / p) * (sigma_star * kf / ((kf + 1.0) * PI)).powf(2.0 * kf / p)
}

/// Estimator tracked by the efficiency experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyEstimator {
    /// Pinsker weight at `α₀ = (k, t₀)`.
    Alpha0,
    /// The adaptive procedure.
    Selected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub n: usize,
    pub estimator: EfficiencyEstimator,
    pub argmax_member: usize,
    pub robust_risk: Estimate,
    /// `n^{2k/(2k+1)} · risk`.
    pub normalized: f64,
    pub ratio: f64,
    pub ratio_se: f64,
    pub alpha0_in_grid: bool,
}

/// Normalized robust risk against the Pinsker constant over an `n` ladder.
///
/// The noise level plugged into the cost is each member's own `ϱ*`, and every
/// member shares the replicate stream for the two estimators.
pub fn efficiency_experiment(
    signal: &SignalSpec,
    family: &FamilyGrid,
    n_list: &[usize],
    mc: &MonteCarlo,
) -> Result<Vec<EfficiencyRow>> {
    mc.validate(2)?;
    let k = signal.k;
    let sigma_star = family.sigma_star();
    let r_star = pinsker_constant(k, signal.r, sigma_star);
    let exponent = 2.0 * k as f64 / (2.0 * k as f64 + 1.0);
    let mut out = Vec::new();
    for &n in n_list {
        let grid = default_grid(n)?;
        let rho = rho_schedule(n);
        let alpha0 = oracle_weight_alpha0(k, signal.r, sigma_star, n, grid.epsilon)?;
        let len = grid.mu().max(alpha0.weight.support());
        let truth = Truth::new(signal, risk_truncation(n, grid.omega_max()).max(len))?;
        let est = ThetaEstimator::new(len, mc.dt)?;
        let mut member_rows: Vec<(MemberRisk, MemberRisk)> = Vec::new();
        for (i, p) in family.members.iter().enumerate() {
            let seed = derive(mc.seed, &[TAG_EFF, n as u64, i as u64]);
            let known = p.rho_star();
            let losses = collect(map_indexed(mc.replicates, mc.execution, |r| {
                let th = replicate_theta(signal, p, n, mc.dt, &est, seed, r)?;
                let a0 = truth.loss(&alpha0.weight, &th);
                let sel = truth.loss(&grid.members[select_index(&grid, &th, known, rho)], &th);
                Ok((a0, sel))
            }))?;
            let a0 = Estimate::from_samples(&losses.iter().map(|l| l.0).collect::<Vec<_>>());
            let sel = Estimate::from_samples(&losses.iter().map(|l| l.1).collect::<Vec<_>>());
            member_rows.push((
                MemberRisk { member: i, params: *p, risk: a0 },
                MemberRisk { member: i, params: *p, risk: sel },
            ));
        }
        let scale = (n as f64).powf(exponent);
        for (which, rows) in [
            (EfficiencyEstimator::Alpha0, member_rows.iter().map(|r| r.0).collect::<Vec<_>>()),
            (EfficiencyEstimator::Selected, member_rows.iter().map(|r| r.1).collect::<Vec<_>>()),
        ] {
            let argmax = argmax_risk(&rows);
            let risk = rows[argmax].risk;
            out.push(EfficiencyRow {
                n,
                estimator: which,
                argmax_member: argmax,
                robust_risk: risk,
                normalized: scale * risk.mean,
                ratio: scale * risk.mean / r_star,
                ratio_se: scale * risk.se / r_star,
                alpha0_in_grid: alpha0.in_grid,
            });
        }
    }
    Ok(out)
}

/// The ratio sequence is nonincreasing within `3·√(se_i² + se_{i+1}²)`.
pub fn nonincreasing_within_se(rows: &[EfficiencyRow]) -> bool {
    rows.windows(2).all(|w| {
        let se = (w[0].ratio_se.powi(2) + w[1].ratio_se.powi(2)).sqrt();
        w[1].ratio <= w[0].ratio + 3.0 * se
    })
}

/// `sup_{2≤l≤l_max} l Σ_{j=l}^{j_max} θ_j²` against `4|Ṡ|₁²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub sup: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn fourier_decay(signal: &SignalSpec, l_max: usize, j_max: usize) -> Result<DecayCheck> {
    ensure(l_max >= 2 && l_max <= j_max, || format!("need 2 ≤ l_max = {l_max} ≤ j_max = {j_max}"))?;
    let theta = signal.coefficients(j_max, QuadratureConfig::default())?;
    let mut tail = vec![0.0; j_max + 2];
    for j in (1..=j_max).rev() {
        tail[j] = tail[j + 1] + theta.get(j).powi(2);
    }
    let sup = (2..=l_max).map(|l| l as f64 * tail[l]).fold(0.0, f64::max);
    let bound = 4.0 * signal.ds_l1().powi(2);
    Ok(DecayCheck {
        sup,
        bound,
        pass: sup <= bound,
    })
}

/// Replicate draws of `I_n(φ_j)` and of `Σ_k I_{T_k-}(φ_i) I_{T_k-}(φ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSamples {
    pub n: usize,
    pub indices: Vec<usize>,
    /// `integrals[r][a] = I_n(φ_{indices[a]})`.
    pub integrals: Vec<Vec<f64>>,
    /// `jump_sums[r][p]` over the upper-triangular pairs `(a ≤ b)`.
    pub jump_sums: Vec<Vec<f64>>,
}

impl MomentSamples {
    fn pair_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let d = self.indices.len();
        a * d - a * (a + 1) / 2 + b
    }

    fn column(&self, a: usize) -> Vec<f64> {
        self.integrals.iter().map(|row| row[a]).collect()
    }

    fn position(&self, j: usize) -> Result<usize> {
        self.indices
            .iter()
            .position(|i| *i == j)
            .ok_or_else(|| Error::InvalidArgument(format!("basis index {j} was not simulated")))
    }
}

pub fn simulate_moments(params: &NoiseParams, n: usize, indices: &[usize], with_jumps: bool, mc: &MonteCarlo) -> Result<MomentSamples> {
    mc.validate(2)?;
    ensure(!indices.is_empty() && indices.iter().all(|j| *j >= 1), || "basis indices must be ≥ 1".to_string())?;
    let m = crate::noise::points_per_period(mc.dt)
        .ok_or_else(|| Error::InvalidArgument(format!("dt = {} must divide the unit period", mc.dt)))?;
    let j_max = *indices.iter().max().expect("nonempty");
    let tables = PeriodicBasis::new(j_max, m);
    let seed = derive(mc.seed, &[TAG_MOM, n as u64]);
    let rows = collect(map_indexed(mc.replicates, mc.execution, |r| {
        let mut rng = replicate_rng(seed, r as u64);
        let path = simulate_noise_with(params, n, mc.dt, &mut rng)?;
        let all = basis_integrals(&path, &tables)?;
        let ints: Vec<f64> = indices.iter().map(|j| all[j - 1]).collect();
        let mut sums = Vec::new();
        if with_jumps {
            let before: Vec<Vec<f64>> = indices.iter().map(|j| integrals_before_jumps(&BasisFn(*j), &path)).collect();
            for a in 0..indices.len() {
                for b in a..indices.len() {
                    sums.push(before[a].iter().zip(&before[b]).map(|(x, y)| x * y).sum());
                }
            }
        }
        Ok((ints, sums))
    }))?;
    let (integrals, jump_sums) = rows.into_iter().unzip();
    Ok(MomentSamples {
        n,
        indices: indices.to_vec(),
        integrals,
        jump_sums,
    })
}

/// Monte Carlo moment against its analytic value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub i: usize,
    pub j: usize,
    pub estimate: Estimate,
    pub oracle: f64,
    pub z: f64,
    pub pass: bool,
}

fn moment_check(i: usize, j: usize, estimate: Estimate, oracle: f64) -> MomentCheck {
    let z = estimate.z_score(oracle);
    MomentCheck {
        i,
        j,
        estimate,
        oracle,
        z,
        pass: z.abs() <= 3.0,
    }
}

/// `E I_n(φ_i) I_n(φ_j)` against `ϱ* τ_{φ_i,φ_j}(n)` over all pairs `i ≤ j`.
pub fn covariance_table(samples: &MomentSamples, params: &NoiseParams, cfg: &TransformConfig) -> Vec<MomentCheck> {
    let d = samples.indices.len();
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            let (i, j) = (samples.indices[a], samples.indices[b]);
            let products: Vec<f64> = samples.integrals.iter().map(|row| row[a] * row[b]).collect();
            let oracle = transforms::cov_i(&BasisFn(i), &BasisFn(j), params, samples.n as f64, cfg);
            out.push(moment_check(i, j, Estimate::from_samples(&products), oracle));
        }
    }
    out
}

/// `E I_n(φ_j)` against zero.
pub fn mean_table(samples: &MomentSamples) -> Vec<MomentCheck> {
    (0..samples.indices.len())
        .map(|a| {
            let j = samples.indices[a];
            moment_check(j, j, Estimate::from_samples(&samples.column(a)), 0.0)
        })
        .collect()
}

/// `E Σ_k I_{T_k-}(φ_i) I_{T_k-}(φ_j) 1{T_k ≤ n}` against `∫_0^n H_{φ_i,φ_j}`.
pub fn jump_moment(samples: &MomentSamples, i: usize, j: usize, params: &NoiseParams, cfg: &TransformConfig) -> Result<MomentCheck> {
    ensure(!samples.jump_sums.is_empty() && !samples.jump_sums[0].is_empty(), || {
        "jump sums were not recorded".to_string()
    })?;
    let (a, b) = (samples.position(i)?, samples.position(j)?);
    let p = samples.pair_index(a, b);
    let values: Vec<f64> = samples.jump_sums.iter().map(|row| row[p]).collect();
    let oracle = transforms::integrated_h(&BasisFn(i), &BasisFn(j), params, samples.n as f64, cfg)?;
    Ok(moment_check(i, j, Estimate::from_samples(&values), oracle))
}

/// `|Cov(I_n(φ_i)², I_n(φ_j)²)|` against the second-order ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderCheck {
    pub i: usize,
    pub j: usize,
    pub covariance: Estimate,
    pub bound: f64,
    pub pass: bool,
}

pub fn second_order_table(
    samples: &MomentSamples,
    params: &NoiseParams,
    bounds: &FamilyBounds,
    cfg: &TransformConfig,
) -> Result<Vec<SecondOrderCheck>> {
    let d = samples.indices.len();
    let squares: Vec<Vec<f64>> = (0..d).map(|a| samples.column(a).iter().map(|v| v * v).collect()).collect();
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            let (i, j) = (samples.indices[a], samples.indices[b]);
            let covariance = sample_covariance(&squares[a], &squares[b]);
            let bound = transforms::second_order_bound(&BasisFn(i), &BasisFn(j), params, bounds, samples.n as f64, cfg)?;
            out.push(SecondOrderCheck {
                i,
                j,
                covariance,
                bound,
                pass: covariance.mean.abs() <= bound,
            });
        }
    }
    Ok(out)
}

/// Sample covariance of `(ξ_{j,n})_{j ≤ d}` against `ς·Identity`.
pub fn white_noise_table(coords: &[Vec<f64>], sigma: f64) -> Vec<MomentCheck> {
    let d = coords.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            let products: Vec<f64> = coords.iter().map(|row| row[a] * row[b]).collect();
            let target = if a == b { sigma } else { 0.0 };
            out.push(moment_check(a + 1, b + 1, Estimate::from_samples(&products), target));
        }
    }
    out
}

/// Risk of the zero estimator; the trivial upper reference for ratios.
pub fn zero_estimator_risk(signal: &SignalSpec) -> f64 {
    signal.energy()
}

/// Theta estimates of a noiseless record, exposed for reduction checks.
pub fn noiseless_theta(signal: &SignalSpec, n: usize, dt: f64, len: usize) -> Result<CoeffVector> {
    let mut rng = replicate_rng(0, 0);
    let noise = simulate_noise_with(&NoiseParams::silent(), n, dt, &mut rng)?;
    let obs = selector::Observations::from_path(&observe(signal, noise));
    selector::estimate_theta_vector(&obs, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::catalogue;
    use approx::assert_abs_diff_eq;

    fn mc(r: usize) -> MonteCarlo {
        MonteCarlo::new(r, 11, 1.0 / 32.0)
    }

    #[test]
    fn estimate_statistics() {
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_abs_diff_eq!(e.mean, 2.5);
        assert_abs_diff_eq!(e.se, (5.0f64 / 3.0 / 4.0).sqrt(), epsilon = 1e-15);
        assert_eq!(Estimate { mean: 1.0, se: 0.0 }.z_score(1.0), 0.0);
        let c = sample_covariance(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]);
        assert_abs_diff_eq!(c.mean, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn pinsker_constant_examples() {
        assert_abs_diff_eq!(pinsker_constant(1, 1.0, 1.0), 0.4235654, epsilon = 1e-7);
        assert_abs_diff_eq!(pinsker_constant(2, 1.0, 1.0), 0.3992097, epsilon = 1e-7);
        assert_abs_diff_eq!(pinsker_constant(1, 8.0, 1.0) / pinsker_constant(1, 1.0, 1.0), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn coefficient_and_bound_terms() {
        assert_abs_diff_eq!(oracle_coefficient(0.1), 1.28 / 0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(oracle_coefficient(0.1), 1.8286, epsilon = 1e-4);
        let mut prev = 1.0;
        for i in 1..333 {
            let c = oracle_coefficient(i as f64 * 1e-3);
            assert!(c > prev);
            prev = c;
        }
        assert_abs_diff_eq!(oracle_coefficient(1e-9), 1.0, epsilon = 1e-8);
        let p = NoiseParams::reference();
        let b = FamilyBounds::new(1.0, 1.0, 1.0, 2.0).unwrap();
        let c = moment_constants(&p, &b);
        let psi = psi_q(&b, &c, 60, 0.1);
        assert!(psi > 0.0);
        assert!(b_q(psi, 10, 0.3, 0.1) >= psi);
        assert_eq!(b_q(psi, 0, 0.3, 0.1), psi);
    }

    #[test]
    fn family_grid_shapes() {
        let bounds = FamilyBounds::new(1.0, 2.0, 1.0, 1.0).unwrap();
        let fam = FamilyGrid::box_grid(bounds);
        assert_eq!(fam.members.len(), 9);
        assert!(fam.members.iter().all(|m| bounds.contains(m)));
        assert!(fam.members.iter().any(|m| m.a == 0.0 && m.lambda == 0.0 && m.rho2 == 0.0));
        let wide = FamilyGrid::box_grid(FamilyBounds::new(1.0, 2.0, 1.0, 2.0).unwrap());
        assert_eq!(wide.members.len(), 18);
        assert!(FamilyGrid::new(vec![NoiseParams::brownian(5.0)], bounds).is_err());
    }

    #[test]
    fn zero_signal_zero_weight_has_zero_risk() {
        let r = mc_risk(
            &SignalSpec::zero(),
            &NoiseParams::reference(),
            20,
            &EstimatorSpec::Fixed { weight: WeightSequence::zero() },
            &mc(100),
        )
        .unwrap();
        assert_eq!(r.mean, 0.0);
        assert!(mc_risk(&SignalSpec::zero(), &NoiseParams::reference(), 20, &EstimatorSpec::Fixed { weight: WeightSequence::zero() }, &mc(10)).is_err());
    }

    #[test]
    fn projection_risk_is_d_over_n() {
        let n = 40;
        let d = 5;
        let est = EstimatorSpec::Fixed { weight: WeightSequence::projection(d) };
        let r = mc_risk(&SignalSpec::zero(), &NoiseParams::brownian(1.0), n, &est, &mc(2000)).unwrap();
        let expect = d as f64 / n as f64;
        assert!((r.mean - expect).abs() <= 3.0 * r.se, "{r:?} vs {expect}");
        let fam = FamilyGrid::new(
            vec![NoiseParams::brownian(1.0), NoiseParams::brownian(2.0)],
            FamilyBounds::new(1.0, 1.0, 1.0, 2.0).unwrap(),
        )
        .unwrap();
        let rr = robust_risk(&SignalSpec::zero(), &fam, n, &est, &mc(2000)).unwrap();
        assert_eq!(rr.argmax, 1);
        assert!((rr.risk.mean - 2.0 * expect).abs() <= 3.0 * rr.risk.se);
        let single = robust_risk(&SignalSpec::zero(), &FamilyGrid::single(NoiseParams::brownian(1.0)), n, &est, &mc(200)).unwrap();
        assert_eq!(single.per_member.len(), 1);
    }

    #[test]
    fn execution_backends_agree() {
        let s = catalogue("expcos").unwrap();
        let est = EstimatorSpec::Selected { sigma: SigmaChoice::Known, rho: None };
        let a = mc_risk(&s, &NoiseParams::reference(), 20, &est, &mc(120).with_execution(Execution::Sequential)).unwrap();
        let b = mc_risk(&s, &NoiseParams::reference(), 20, &est, &mc(120).with_execution(Execution::Parallel)).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.se.to_bits(), b.se.to_bits());
    }

    #[test]
    fn audit_on_zero_signal() {
        let n = 20;
        let p = NoiseParams::reference();
        let grid = default_grid(n).unwrap();
        let reports = oracle_audit(
            &SignalSpec::zero(),
            &p,
            &FamilyBounds::around(&p),
            n,
            &grid,
            rho_schedule(n),
            &[SigmaChoice::Known, SigmaChoice::Estimated],
            &mc(200),
        )
        .unwrap();
        for r in &reports {
            assert!(r.pass);
            assert!(r.oracle_never_loses());
            assert!(r.per_gamma_risk.iter().all(|e| e.se > 0.0));
            assert!(r.b_q >= r.psi_q);
        }
        assert!(oracle_audit(&SignalSpec::zero(), &p, &FamilyBounds::around(&p), n, &grid, 0.5, &[SigmaChoice::Known], &mc(10)).is_err());
    }

    #[test]
    fn noiseless_sigma_obeys_tail_bound() {
        for name in ["expcos", "bernoulli3", "trig"] {
            let s = catalogue(name).unwrap();
            for n in [16usize, 100, 400] {
                let v = noiseless_sigma(&s, n).unwrap();
                let l = sigma_start(n);
                assert!(v <= 4.0 * s.ds_l1().powi(2) / (l - 1) as f64, "{name} n={n}");
            }
        }
    }

    #[test]
    fn c1_envelope_example() {
        let p = NoiseParams::reference();
        assert_abs_diff_eq!(c1_envelope(&p, 3), 60.0 / (9.0 * PI * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(c1_envelope(&p, 3), 0.6755, epsilon = 1e-4);
        assert_eq!(c1_envelope(&NoiseParams::brownian(2.0), 5), 0.0);
        assert_eq!(c1_envelope(&p, 1), 4.0);
    }

    #[test]
    fn eigenvalue_of_known_matrix() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        assert_abs_diff_eq!(largest_eigenvalue(&m), 3.0, epsilon = 1e-10);
        assert_eq!(largest_eigenvalue(&[]), 0.0);
    }

    #[test]
    fn fourier_decay_for_catalogue() {
        for name in ["expcos", "bernoulli3", "trig", "zero"] {
            let d = fourier_decay(&catalogue(name).unwrap(), 200, 2000).unwrap();
            assert!(d.pass, "{name}: {d:?}");
        }
    }

    #[test]
    fn trend_check() {
        let row = |ratio: f64, se: f64| EfficiencyRow {
            n: 1,
            estimator: EfficiencyEstimator::Alpha0,
            argmax_member: 0,
            robust_risk: Estimate { mean: 0.0, se: 0.0 },
            normalized: 0.0,
            ratio,
            ratio_se: se,
            alpha0_in_grid: true,
        };
        assert!(nonincreasing_within_se(&[row(1.5, 0.01), row(1.4, 0.01)]));
        assert!(nonincreasing_within_se(&[row(1.5, 0.01), row(1.53, 0.01)]));
        assert!(!nonincreasing_within_se(&[row(1.5, 0.01), row(1.6, 0.01)]));
    }

    #[test]
    fn zero_estimator_normalization_diverges() {
        let s = catalogue("bernoulli3").unwrap();
        let r = zero_estimator_risk(&s);
        let ratio = |n: f64| n.powf(2.0 / 3.0) * r / pinsker_constant(1, 1.0, 1.0);
        assert!(ratio(1e4) > ratio(1e2));
        assert!(ratio(1e4) > 2.0);
    }
}
