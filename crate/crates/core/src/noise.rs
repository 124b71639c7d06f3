//! Lévy-driven Ornstein-Uhlenbeck noise `dξ = a ξ dt + ϱ₁ dw + ϱ₂ dz` and the
//! observation process `dy = S dt + dξ`.
//!
//! Paths are simulated with the exact Gaussian transition between merged
//! events (grid points and jump times). On every jump-free segment the pair
//! `(Δw, ∫ξ ds)` is drawn jointly with the OU increment, so the identity
//! `Δξ = a ∫ξ ds + ϱ₁ Δw + ϱ₂ ΔZ` holds exactly on every cell and the
//! stochastic integral decomposes without discretization error for `f ≡ 1`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::basis::{self, Integrand};
use crate::error::{ensure, Result};
use crate::signals::SignalSpec;

/// Distribution of the standardized jump marks `Y_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JumpLaw {
    /// `±1` with equal probability; `E Y⁴ = 1`.
    #[default]
    Rademacher,
    /// Standard normal; `E Y⁴ = 3`.
    Gaussian,
}

impl JumpLaw {
    pub fn fourth_moment(self) -> f64 {
        match self {
            JumpLaw::Rademacher => 1.0,
            JumpLaw::Gaussian => 3.0,
        }
    }

    fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            JumpLaw::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            JumpLaw::Gaussian => StandardNormal.sample(rng),
        }
    }
}

/// Parameters `(a, λ, ϱ₁, ϱ₂)` of the noise process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub a: f64,
    pub lambda: f64,
    pub rho1: f64,
    pub rho2: f64,
    #[serde(default)]
    pub jump_law: JumpLaw,
}

impl NoiseParams {
    pub fn new(a: f64, lambda: f64, rho1: f64, rho2: f64, jump_law: JumpLaw) -> Result<Self> {
        let p = NoiseParams {
            a,
            lambda,
            rho1,
            rho2,
            jump_law,
        };
        p.validate()?;
        Ok(p)
    }

    /// Brownian noise `ξ = √scale² · w`.
    pub fn brownian(rho_star: f64) -> Self {
        NoiseParams {
            a: 0.0,
            lambda: 0.0,
            rho1: rho_star.sqrt(),
            rho2: 0.0,
            jump_law: JumpLaw::Rademacher,
        }
    }

    /// `a = -1, λ = 1, ϱ₁ = ϱ₂ = 1`, Rademacher marks.
    pub fn reference() -> Self {
        NoiseParams {
            a: -1.0,
            lambda: 1.0,
            rho1: 1.0,
            rho2: 1.0,
            jump_law: JumpLaw::Rademacher,
        }
    }

    /// Identically zero noise.
    pub fn silent() -> Self {
        NoiseParams {
            a: 0.0,
            lambda: 0.0,
            rho1: 0.0,
            rho2: 0.0,
            jump_law: JumpLaw::Rademacher,
        }
    }

    /// `ϱ* = ϱ₁² + λ ϱ₂²`.
    pub fn rho_star(&self) -> f64 {
        self.rho1 * self.rho1 + self.lambda * self.rho2 * self.rho2
    }

    /// Checks the structural constraints `a ≤ 0`, `λ ≥ 0`. A vanishing `ϱ*`
    /// is allowed so the noiseless reduction can be simulated.
    pub fn validate(&self) -> Result<()> {
        ensure(self.a.is_finite() && self.a <= 0.0, || format!("mean reversion a = {} must be ≤ 0", self.a))?;
        ensure(self.lambda.is_finite() && self.lambda >= 0.0, || {
            format!("jump intensity λ = {} must be ≥ 0", self.lambda)
        })?;
        ensure(self.rho1.is_finite() && self.rho2.is_finite(), || "noise scales must be finite".to_string())?;
        Ok(())
    }
}

/// Box `-a_max ≤ a ≤ 0`, `0 ≤ λ ≤ λ_max`, `ϱ*_min ≤ ϱ* ≤ ϱ*_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyBounds {
    pub a_max: f64,
    pub lambda_max: f64,
    pub rho_star_min: f64,
    pub rho_star_max: f64,
}

impl FamilyBounds {
    pub fn new(a_max: f64, lambda_max: f64, rho_star_min: f64, rho_star_max: f64) -> Result<Self> {
        ensure(a_max > 0.0 && lambda_max > 0.0, || "a_max and λ_max must be positive".to_string())?;
        ensure(rho_star_min > 0.0 && rho_star_min <= rho_star_max, || {
            format!("need 0 < ϱ*_min = {rho_star_min} ≤ ϱ*_max = {rho_star_max}")
        })?;
        Ok(FamilyBounds {
            a_max,
            lambda_max,
            rho_star_min,
            rho_star_max,
        })
    }

    /// Tightest box around a single parameter set.
    pub fn around(p: &NoiseParams) -> Self {
        FamilyBounds {
            a_max: (-p.a).max(f64::MIN_POSITIVE),
            lambda_max: p.lambda.max(f64::MIN_POSITIVE),
            rho_star_min: p.rho_star(),
            rho_star_max: p.rho_star(),
        }
    }

    pub fn contains(&self, p: &NoiseParams) -> bool {
        let tol = 1e-12;
        let rs = p.rho_star();
        p.a >= -self.a_max - tol
            && p.a <= 0.0
            && p.lambda >= 0.0
            && p.lambda <= self.lambda_max + tol
            && rs >= self.rho_star_min - tol
            && rs <= self.rho_star_max + tol
    }
}

/// One jump of the compound Poisson component together with the state of
/// the path just before it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    pub mark: f64,
    /// Index of the grid cell containing the jump.
    pub cell: usize,
    /// `ξ_{T-}`.
    pub xi_before: f64,
    /// Brownian increment from the start of the cell to the jump.
    pub dw_before: f64,
    /// `∫ ξ ds` from the start of the cell to the jump.
    pub xi_integral_before: f64,
}

/// A simulated noise trajectory on the grid `t_i = i·dt`, `0 ≤ i ≤ n/dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    params: NoiseParams,
    horizon: usize,
    dt: f64,
    xi: Vec<f64>,
    dw: Vec<f64>,
    xi_integral: Vec<f64>,
    jumps: Vec<JumpEvent>,
}

/// Coefficients of the exact transition over a jump-free segment of length `h`.
#[derive(Debug, Clone, Copy)]
struct SegmentLaw {
    decay: f64,
    sd_w: f64,
    k_on_w: f64,
    sd_k: f64,
    start_weight: f64,
}

/// `Σ_k u^k / (k+2)!` = `(e^u - 1 - u)/u²`.
fn c1(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let mut term = 0.5;
        let mut sum = term;
        for k in 1..30 {
            term *= u / (k + 2) as f64;
            sum += term;
        }
        sum
    } else {
        (u.exp_m1() - u) / (u * u)
    }
}

/// `Σ_k (2^{k+2} - 2) u^k / (k+3)!` = `(expm1(2u)/(2u) - 2 expm1(u)/u + 1)/u²`.
fn c2(u: f64) -> f64 {
    if u.abs() < 1.0 {
        let mut fact = 6.0;
        let mut pow2 = 4.0;
        let mut upow = 1.0;
        let mut sum = 0.0;
        for k in 0..30 {
            if k > 0 {
                fact *= (k + 3) as f64;
                pow2 *= 2.0;
                upow *= u;
            }
            sum += (pow2 - 2.0) / fact * upow;
        }
        sum
    } else {
        ((2.0 * u).exp_m1() / (2.0 * u) - 2.0 * u.exp_m1() / u + 1.0) / (u * u)
    }
}

/// `expm1(u)/u`.
fn c0(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 + 0.5 * u
    } else {
        u.exp_m1() / u
    }
}

impl SegmentLaw {
    fn new(a: f64, h: f64) -> Self {
        let u = a * h;
        let cov = h * h * c1(u);
        let var_k = h * h * h * c2(u);
        let resid = (var_k - cov * cov / h).max(0.0);
        SegmentLaw {
            decay: u.exp(),
            sd_w: h.sqrt(),
            k_on_w: if h > 0.0 { cov / h } else { 0.0 },
            sd_k: resid.sqrt(),
            start_weight: h * c0(u),
        }
    }

    /// Advances `(ξ, Δw, ∫ξ)` over the segment starting at `x`.
    #[inline]
    fn step<R: Rng + ?Sized>(&self, a: f64, rho1: f64, x: f64, rng: &mut R) -> (f64, f64, f64) {
        let z1: f64 = StandardNormal.sample(rng);
        let z2: f64 = StandardNormal.sample(rng);
        let w = self.sd_w * z1;
        let k = self.k_on_w * w + self.sd_k * z2;
        let g = w + a * k;
        let end = self.decay * x + rho1 * g;
        let integral = x * self.start_weight + rho1 * k;
        (end, w, integral)
    }
}

fn cells_for(horizon: usize, dt: f64) -> Result<usize> {
    ensure(dt > 0.0 && dt.is_finite(), || format!("grid step dt = {dt} must be positive"))?;
    ensure(horizon >= 1, || "horizon n must be at least 1".to_string())?;
    let cells = (horizon as f64 / dt).round();
    ensure((cells * dt - horizon as f64).abs() <= 1e-9 * horizon as f64, || {
        format!("n/dt = {} is not an integer", horizon as f64 / dt)
    })?;
    Ok(cells as usize)
}

/// Simulates the noise on `[0, n]` with grid step `dt` from a seed.
pub fn simulate_noise(params: &NoiseParams, horizon: usize, dt: f64, seed: u64) -> Result<NoisePath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_noise_with(params, horizon, dt, &mut rng)
}

/// Simulates the noise drawing from a caller-supplied generator.
pub fn simulate_noise_with<R: Rng + ?Sized>(
    params: &NoiseParams,
    horizon: usize,
    dt: f64,
    rng: &mut R,
) -> Result<NoisePath> {
    params.validate()?;
    let cells = cells_for(horizon, dt)?;
    let end_time = horizon as f64;

    let mut arrivals = Vec::new();
    if params.lambda > 0.0 {
        let gap = Exp::new(params.lambda).expect("positive rate");
        let mut t = 0.0;
        loop {
            t += gap.sample(rng);
            if t > end_time {
                break;
            }
            arrivals.push((t, params.jump_law.sample(rng)));
        }
    }
    simulate_segments(params, horizon, dt, cells, &arrivals, rng)
}

/// Simulates the noise with the arrival times pinned; marks and the Brownian
/// part are drawn from `rng`. The jump intensity in `params` is ignored.
pub fn simulate_noise_given_arrivals<R: Rng + ?Sized>(
    params: &NoiseParams,
    horizon: usize,
    dt: f64,
    arrival_times: &[f64],
    rng: &mut R,
) -> Result<NoisePath> {
    params.validate()?;
    let cells = cells_for(horizon, dt)?;
    ensure(arrival_times.windows(2).all(|w| w[0] < w[1]), || "arrival times must increase".to_string())?;
    ensure(arrival_times.iter().all(|t| *t > 0.0 && *t < horizon as f64), || {
        format!("arrival times must lie in (0, {horizon})")
    })?;
    let arrivals: Vec<(f64, f64)> = arrival_times.iter().map(|t| (*t, params.jump_law.sample(rng))).collect();
    simulate_segments(params, horizon, dt, cells, &arrivals, rng)
}

fn simulate_segments<R: Rng + ?Sized>(
    params: &NoiseParams,
    horizon: usize,
    dt: f64,
    cells: usize,
    arrivals: &[(f64, f64)],
    rng: &mut R,
) -> Result<NoisePath> {
    let a = params.a;
    let law = SegmentLaw::new(a, dt);
    let mut xi = Vec::with_capacity(cells + 1);
    let mut dw = Vec::with_capacity(cells);
    let mut integral = Vec::with_capacity(cells);
    let mut jumps = Vec::with_capacity(arrivals.len());
    xi.push(0.0);
    let mut x = 0.0;
    let mut next_jump = 0;
    for i in 0..cells {
        let start = i as f64 * dt;
        let stop = (i + 1) as f64 * dt;
        if next_jump < arrivals.len() && arrivals[next_jump].0 < stop {
            // split the cell at every arrival inside it
            let mut cursor = start;
            let mut w_acc = 0.0;
            let mut int_acc = 0.0;
            while next_jump < arrivals.len() && arrivals[next_jump].0 < stop {
                let (tk, mark) = arrivals[next_jump];
                let h = (tk - cursor).max(0.0);
                let (end, w, int) = SegmentLaw::new(a, h).step(a, params.rho1, x, rng);
                x = end;
                w_acc += w;
                int_acc += int;
                jumps.push(JumpEvent {
                    time: tk,
                    mark,
                    cell: i,
                    xi_before: x,
                    dw_before: w_acc,
                    xi_integral_before: int_acc,
                });
                x += params.rho2 * mark;
                cursor = tk;
                next_jump += 1;
            }
            let h = (stop - cursor).max(0.0);
            let (end, w, int) = SegmentLaw::new(a, h).step(a, params.rho1, x, rng);
            x = end;
            dw.push(w_acc + w);
            integral.push(int_acc + int);
        } else {
            let (end, w, int) = law.step(a, params.rho1, x, rng);
            x = end;
            dw.push(w);
            integral.push(int);
        }
        xi.push(x);
    }

    Ok(NoisePath {
        params: *params,
        horizon,
        dt,
        xi,
        dw,
        xi_integral: integral,
        jumps,
    })
}

impl NoisePath {
    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn cells(&self) -> usize {
        self.dw.len()
    }

    /// Grid times `t_i = i·dt`.
    pub fn grid(&self) -> Vec<f64> {
        (0..=self.cells()).map(|i| i as f64 * self.dt).collect()
    }

    /// `ξ` on the grid; `xi()[0] = 0`.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// `ξ_n`.
    pub fn terminal(&self) -> f64 {
        *self.xi.last().expect("grid is never empty")
    }

    pub fn brownian_increments(&self) -> &[f64] {
        &self.dw
    }

    /// `∫ ξ ds` over each grid cell.
    pub fn cell_integrals(&self) -> &[f64] {
        &self.xi_integral
    }

    pub fn jumps(&self) -> &[JumpEvent] {
        &self.jumps
    }

    pub fn jump_times(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.time).collect()
    }

    pub fn jump_marks(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.mark).collect()
    }

    /// `N_t`, the number of arrivals in `[0, t]`.
    pub fn jump_count(&self, t: f64) -> usize {
        self.jumps.partition_point(|j| j.time <= t)
    }

    /// Number of grid cells per unit period when `1/dt` is an integer.
    pub fn points_per_period(&self) -> Option<usize> {
        points_per_period(self.dt)
    }

    /// Sums consecutive blocks of `factor` cells into one coarser cell.
    ///
    /// The coarse path shares the Brownian and jump randomness of `self`,
    /// which makes it the natural comparison for grid-refinement studies.
    pub fn coarsen(&self, factor: usize) -> Result<NoisePath> {
        ensure(factor >= 1 && self.cells().is_multiple_of(factor), || {
            format!("cannot coarsen {} cells by {factor}", self.cells())
        })?;
        let cells = self.cells() / factor;
        let dw = (0..cells).map(|c| self.dw[c * factor..(c + 1) * factor].iter().sum()).collect();
        let integral = (0..cells)
            .map(|c| self.xi_integral[c * factor..(c + 1) * factor].iter().sum())
            .collect();
        let xi = (0..=cells).map(|c| self.xi[c * factor]).collect();
        let jumps = self
            .jumps
            .iter()
            .map(|j| {
                let cell = j.cell / factor;
                let first = cell * factor;
                let dw_before = self.dw[first..j.cell].iter().sum::<f64>() + j.dw_before;
                let int_before = self.xi_integral[first..j.cell].iter().sum::<f64>() + j.xi_integral_before;
                JumpEvent {
                    cell,
                    dw_before,
                    xi_integral_before: int_before,
                    ..*j
                }
            })
            .collect();
        Ok(NoisePath {
            params: self.params,
            horizon: self.horizon,
            dt: self.dt * factor as f64,
            xi,
            dw,
            xi_integral: integral,
            jumps,
        })
    }
}

pub(crate) fn points_per_period(dt: f64) -> Option<usize> {
    let m = (1.0 / dt).round();
    if m >= 1.0 && (m * dt - 1.0).abs() < 1e-12 {
        Some(m as usize)
    } else {
        None
    }
}

/// `I_n(f) = ∫_0^n f dξ`, decomposed as
/// `a Σ f(mid_i) ∫_{cell i} ξ + ϱ₁ Σ f(t_i) Δw_i + ϱ₂ Σ_k f(T_k) Y_k`.
pub fn ito_integral<F: Integrand + ?Sized>(f: &F, path: &NoisePath) -> f64 {
    let p = path.params;
    let dt = path.dt;
    let mut drift = 0.0;
    let mut diffusion = 0.0;
    for (i, (w, int)) in path.dw.iter().zip(path.xi_integral.iter()).enumerate() {
        let t = i as f64 * dt;
        drift += f.value(t + 0.5 * dt) * int;
        diffusion += f.value(t) * w;
    }
    let jumps: f64 = path.jumps.iter().map(|j| f.value(j.time) * j.mark).sum();
    p.a * drift + p.rho1 * diffusion + p.rho2 * jumps
}

/// `I_{T_k-}(f)` for every arrival `T_k`, in arrival order.
pub fn integrals_before_jumps<F: Integrand + ?Sized>(f: &F, path: &NoisePath) -> Vec<f64> {
    let p = path.params;
    let dt = path.dt;
    let mut out = Vec::with_capacity(path.jumps.len());
    let mut cell_done = 0;
    let mut drift = 0.0;
    let mut diffusion = 0.0;
    let mut jump_part = 0.0;
    for j in &path.jumps {
        while cell_done < j.cell {
            let t = cell_done as f64 * dt;
            drift += f.value(t + 0.5 * dt) * path.xi_integral[cell_done];
            diffusion += f.value(t) * path.dw[cell_done];
            cell_done += 1;
        }
        let start = j.cell as f64 * dt;
        let partial_drift = f.value(0.5 * (start + j.time)) * j.xi_integral_before;
        let partial_diffusion = f.value(start) * j.dw_before;
        out.push(p.a * (drift + partial_drift) + p.rho1 * (diffusion + partial_diffusion) + p.rho2 * jump_part);
        jump_part += f.value(j.time) * j.mark;
    }
    out
}

/// Basis values at cell left ends and midpoints, indexed by phase, for a grid
/// with `m` cells per period.
#[derive(Debug, Clone)]
pub struct PeriodicBasis {
    m: usize,
    max_index: usize,
    left: Vec<f64>,
    mid: Vec<f64>,
}

impl PeriodicBasis {
    pub fn new(max_index: usize, m: usize) -> Self {
        let mut left = Vec::with_capacity(max_index * m);
        let mut mid = Vec::with_capacity(max_index * m);
        for j in 1..=max_index {
            for p in 0..m {
                left.push(basis::phi_periodic(j, p as f64 / m as f64));
                mid.push(basis::phi_periodic(j, (p as f64 + 0.5) / m as f64));
            }
        }
        PeriodicBasis { m, max_index, left, mid }
    }

    pub fn points_per_period(&self) -> usize {
        self.m
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    #[inline]
    pub fn left(&self, j: usize) -> &[f64] {
        &self.left[(j - 1) * self.m..j * self.m]
    }

    #[inline]
    pub fn mid(&self, j: usize) -> &[f64] {
        &self.mid[(j - 1) * self.m..j * self.m]
    }
}

/// Sums `values[i]` into bucket `i mod m`.
pub(crate) fn fold_by_phase(values: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m];
    for chunk in values.chunks(m) {
        for (o, v) in out.iter_mut().zip(chunk) {
            *o += v;
        }
    }
    out
}

/// `I_n(φ_j)` for `j = 1..=tables.max_index()`, using precomputed basis tables.
/// Agrees with [`ito_integral`] up to floating-point reassociation.
pub fn basis_integrals(path: &NoisePath, tables: &PeriodicBasis) -> Result<Vec<f64>> {
    let m = tables.points_per_period();
    ensure(path.points_per_period() == Some(m), || {
        format!("basis tables built for {m} points per period do not match dt = {}", path.dt)
    })?;
    let p = path.params;
    let drift = fold_by_phase(&path.xi_integral, m);
    let diffusion = fold_by_phase(&path.dw, m);
    Ok((1..=tables.max_index())
        .map(|j| {
            let d: f64 = tables.mid(j).iter().zip(&drift).map(|(f, v)| f * v).sum();
            let w: f64 = tables.left(j).iter().zip(&diffusion).map(|(f, v)| f * v).sum();
            let z: f64 = path.jumps.iter().map(|e| basis::phi_periodic(j, e.time) * e.mark).sum();
            p.a * d + p.rho1 * w + p.rho2 * z
        })
        .collect())
}

/// Observation increments `Δy_i = ∫_{cell i} S + Δξ_i` over a noise path.
#[derive(Debug, Clone)]
pub struct ObservationPath {
    pub noise: NoisePath,
    pub signal: SignalSpec,
    pub y_increments: Vec<f64>,
}

/// Builds `y` from a signal and a noise path.
pub fn observe(signal: &SignalSpec, noise: NoisePath) -> ObservationPath {
    let dt = noise.dt;
    let signal_cells: Vec<f64> = match noise.points_per_period() {
        Some(m) => {
            let table = signal.period_cell_integrals(m);
            (0..noise.cells()).map(|i| table[i % m]).collect()
        }
        None => (0..noise.cells())
            .map(|i| signal.integral(i as f64 * dt, (i + 1) as f64 * dt))
            .collect(),
    };
    let y_increments = signal_cells
        .iter()
        .zip(noise.xi.windows(2))
        .map(|(s, w)| s + (w[1] - w[0]))
        .collect();
    ObservationPath {
        noise,
        signal: signal.clone(),
        y_increments,
    }
}

impl ObservationPath {
    /// `y_n - y_0`.
    pub fn total(&self) -> f64 {
        self.y_increments.iter().sum()
    }
}
