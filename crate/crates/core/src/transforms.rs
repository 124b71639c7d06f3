//! Deterministic moment transforms of the Lévy-OU stochastic integral and the
//! constants entering the second-order bounds.
//!
//! Every integral is evaluated on a uniform grid with the shared four-point
//! rule from [`crate::quadrature`]; `TransformConfig::steps` sets the number
//! of cells on the integration interval.

use serde::{Deserialize, Serialize};

use crate::basis::{self, Integrand};
use crate::error::{ensure, Error, Result};
use crate::noise::{FamilyBounds, NoiseParams};
use crate::quadrature::{cumulative, exp_weighted_cumulative, node_weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformConfig {
    /// Cells on the integration interval.
    pub steps: usize,
    /// Lattice resolution for the correlation measure in each of `(v, t)`.
    pub lattice: usize,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            steps: 8192,
            lattice: 512,
        }
    }
}

impl TransformConfig {
    pub fn with_steps(steps: usize) -> Self {
        TransformConfig {
            steps,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        ensure(self.steps >= 4, || format!("need at least 4 quadrature cells, got {}", self.steps))?;
        ensure(self.lattice >= 1 && self.steps.is_multiple_of(self.lattice), || {
            format!("lattice {} must divide the step count {}", self.lattice, self.steps)
        })
    }
}

fn sample<F: Integrand + ?Sized>(f: &F, h: f64, len: usize, offset: f64) -> Vec<f64> {
    (0..len).map(|i| f.value(offset + i as f64 * h)).collect()
}

/// `ε_f` on the grid `t_i = i·t/steps`.
pub fn epsilon_profile<F: Integrand + ?Sized>(f: &F, a: f64, t: f64, steps: usize) -> Vec<f64> {
    if a == 0.0 || t <= 0.0 {
        return vec![0.0; steps + 1];
    }
    let h = t / steps as f64;
    let q: Vec<f64> = (0..=steps)
        .map(|i| {
            let v = i as f64 * h;
            f.value(v) * (1.0 + (2.0 * a * v).exp())
        })
        .collect();
    exp_weighted_cumulative(&q, a, h).into_iter().map(|k| a * k).collect()
}

/// `ε_f(t) = a ∫_0^t e^{a(t-v)} f(v)(1 + e^{2av}) dv`.
pub fn epsilon_f<F: Integrand + ?Sized>(f: &F, a: f64, t: f64, cfg: &TransformConfig) -> f64 {
    *epsilon_profile(f, a, t, cfg.steps).last().expect("nonempty grid")
}

/// `τ_{f,g}` on the grid `t_i = i·t/steps`.
pub fn tau_profile<F, G>(f: &F, g: &G, a: f64, t: f64, steps: usize) -> Vec<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    let h = t / steps as f64;
    let fv = sample(f, h, steps + 1, 0.0);
    let gv = sample(g, h, steps + 1, 0.0);
    let ef = epsilon_profile(f, a, t, steps);
    let eg = epsilon_profile(g, a, t, steps);
    let integrand: Vec<f64> = (0..=steps)
        .map(|i| fv[i] * gv[i] + 0.5 * (fv[i] * eg[i] + ef[i] * gv[i]))
        .collect();
    cumulative(&integrand, h)
}

/// `τ_{f,g}(t) = ½ ∫_0^t (2fg + f ε_g + ε_f g) ds`.
pub fn tau_fg<F, G>(f: &F, g: &G, a: f64, t: f64, cfg: &TransformConfig) -> f64
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    if t <= 0.0 {
        return 0.0;
    }
    *tau_profile(f, g, a, t, cfg.steps).last().expect("nonempty grid")
}

/// `E I_t(f) I_t(g) = ϱ* τ_{f,g}(t)`.
pub fn cov_i<F, G>(f: &F, g: &G, params: &NoiseParams, t: f64, cfg: &TransformConfig) -> f64
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    params.rho_star() * tau_fg(f, g, params.a, t, cfg)
}

/// `L_f(y_m, z)` for `y_m = m·h`, `m = 0..values.len()`, from `f(z + y_m)`.
fn l_profile(fz: &[f64], a: f64, h: f64) -> Vec<f64> {
    if a == 0.0 {
        return vec![0.0; fz.len()];
    }
    let weighted: Vec<f64> = fz
        .iter()
        .enumerate()
        .map(|(m, v)| (a * m as f64 * h).exp() * v)
        .collect();
    let inner = cumulative(&weighted, h);
    inner
        .iter()
        .enumerate()
        .map(|(m, mv)| a * (a * m as f64 * h).exp() * (fz[0] + a * mv))
        .collect()
}

/// `D_{f,g}(y_m, z)` from `f(z + y_m)`, `g(z + y_m)`.
fn d_profile(fz: &[f64], gz: &[f64], a: f64, h: f64) -> Vec<f64> {
    let base = fz[0] * gz[0];
    if a == 0.0 {
        return vec![base; fz.len()];
    }
    let lf = l_profile(fz, a, h);
    let lg = l_profile(gz, a, h);
    let integrand: Vec<f64> = (0..fz.len()).map(|m| gz[m] * lf[m] + fz[m] * lg[m]).collect();
    cumulative(&integrand, h).into_iter().map(|v| v + base).collect()
}

/// `L_f(x, z) = a e^{ax} (f(z) + a ∫_0^x e^{av} f(v+z) dv)`.
pub fn l_f<F: Integrand + ?Sized>(f: &F, a: f64, x: f64, z: f64, cfg: &TransformConfig) -> f64 {
    if x <= 0.0 {
        return a * f.value(z);
    }
    let h = x / cfg.steps as f64;
    let fz = sample(f, h, cfg.steps + 1, z);
    *l_profile(&fz, a, h).last().expect("nonempty grid")
}

/// `D_{f,g}(x, z) = ∫_0^x [g(y+z) L_f(y,z) + f(y+z) L_g(y,z)] dy + f(z) g(z)`.
pub fn d_fg<F, G>(f: &F, g: &G, a: f64, x: f64, z: f64, cfg: &TransformConfig) -> f64
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    if x <= 0.0 {
        return f.value(z) * g.value(z);
    }
    let h = x / cfg.steps as f64;
    let fz = sample(f, h, cfg.steps + 1, z);
    let gz = sample(g, h, cfg.steps + 1, z);
    *d_profile(&fz, &gz, a, h).last().expect("nonempty grid")
}

/// `H_{f,g}` on a uniform grid over `[0, t]` together with its running integral.
#[derive(Debug, Clone, PartialEq)]
pub struct HProfile {
    pub step: f64,
    pub values: Vec<f64>,
    pub integral: Vec<f64>,
}

impl HProfile {
    pub fn at_end(&self) -> f64 {
        *self.values.last().expect("nonempty grid")
    }

    /// `∫_0^t H_{f,g}`.
    pub fn total_integral(&self) -> f64 {
        *self.integral.last().expect("nonempty grid")
    }
}

/// Evaluates `H_{f,g}(s) = λϱ₁² τ_{f,g}(s) + (λϱ₂)² ∫_0^s D_{f,g}(s - z, z) dz`
/// at every grid point of `[0, t]`.
///
/// The convolution term is accumulated column by column: for each node `z_i`
/// the whole profile `D(y_m, z_i)` is built in one pass and its contribution
/// scattered to every `s = z_i + y_m`, so no interpolation is required.
pub fn h_profile<F, G>(f: &F, g: &G, params: &NoiseParams, t: f64, cfg: &TransformConfig) -> Result<HProfile>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    cfg.validate()?;
    let steps = cfg.steps;
    let h = t / steps as f64;
    let lambda = params.lambda;
    if lambda == 0.0 || t <= 0.0 {
        return Ok(HProfile {
            step: h,
            values: vec![0.0; steps + 1],
            integral: vec![0.0; steps + 1],
        });
    }
    let tau = tau_profile(f, g, params.a, t, steps);
    let fv = sample(f, h, steps + 1, 0.0);
    let gv = sample(g, h, steps + 1, 0.0);
    let mut conv = vec![0.0; steps + 1];
    for i in 0..=steps {
        let d = d_profile(&fv[i..], &gv[i..], params.a, h);
        for (m, dv) in d.iter().enumerate() {
            let k = i + m;
            conv[k] += node_weight(i, k) * h * dv;
        }
    }
    let c1 = lambda * params.rho1 * params.rho1;
    let c2 = (lambda * params.rho2).powi(2);
    let values: Vec<f64> = tau.iter().zip(&conv).map(|(ta, cv)| c1 * ta + c2 * cv).collect();
    let integral = cumulative(&values, h);
    Ok(HProfile {
        step: h,
        values,
        integral,
    })
}

pub fn h_fg<F, G>(f: &F, g: &G, params: &NoiseParams, t: f64, cfg: &TransformConfig) -> Result<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    Ok(h_profile(f, g, params, t, cfg)?.at_end())
}

/// `∫_0^t H_{f,g}(s) ds`, the expected sum of `I_{T_k-}(f) I_{T_k-}(g)` over
/// arrivals up to `t`.
pub fn integrated_h<F, G>(f: &F, g: &G, params: &NoiseParams, t: f64, cfg: &TransformConfig) -> Result<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    Ok(h_profile(f, g, params, t, cfg)?.total_integral())
}

/// Covariance of `I_{T_k-}(f)` and `I_{T_k-}(g)` given the arrival times:
/// `ϱ₁² τ_{f,g}(T_k) + ϱ₂² Σ_{l<k} D_{f,g}(T_k - T_l, T_l)`. `k` is 1-based.
pub fn cond_cov_at_jump<F, G>(
    f: &F,
    g: &G,
    params: &NoiseParams,
    arrivals: &[f64],
    k: usize,
    cfg: &TransformConfig,
) -> Result<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    if k == 0 || k > arrivals.len() {
        return Err(Error::MissingArrival {
            k,
            available: arrivals.len(),
        });
    }
    ensure(arrivals.windows(2).all(|w| w[0] < w[1]), || "arrival times must increase".to_string())?;
    let tk = arrivals[k - 1];
    let brownian = params.rho1 * params.rho1 * tau_fg(f, g, params.a, tk, cfg);
    let jumps: f64 = arrivals[..k - 1]
        .iter()
        .map(|tl| d_fg(f, g, params.a, tk - tl, *tl, cfg))
        .sum();
    Ok(brownian + params.rho2 * params.rho2 * jumps)
}

fn one_sided_correlation(fv: &[f64], gv: &[f64], h: f64, stride: usize, lattice: usize) -> f64 {
    let mut best: f64 = 0.0;
    for p in 0..=lattice {
        let shift = p * stride;
        let len = fv.len() - shift;
        let products: Vec<f64> = (0..len).map(|u| fv[u + shift] * gv[u]).collect();
        let running = cumulative(&products, h);
        for q in (0..len).step_by(stride) {
            best = best.max(running[q].abs());
        }
    }
    best
}

/// `ϖ*_{f,g} = max(ϖ_{f,g}, ϖ_{g,f})` where
/// `ϖ_{f,g} = max_{0≤v≤n} max_{0≤t≤n-v} |∫_0^t f(u+v) g(u) du|`, maximized over
/// a `lattice × lattice` grid of `(v, t)`.
pub fn correlation_measure<F, G>(f: &F, g: &G, n: f64, cfg: &TransformConfig) -> Result<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    cfg.validate()?;
    let h = n / cfg.steps as f64;
    let fv = sample(f, h, cfg.steps + 1, 0.0);
    let gv = sample(g, h, cfg.steps + 1, 0.0);
    let stride = cfg.steps / cfg.lattice;
    let fg = one_sided_correlation(&fv, &gv, h, stride, cfg.lattice);
    let gf = one_sided_correlation(&gv, &fv, h, stride, cfg.lattice);
    Ok(fg.max(gf))
}

/// Constants of the moment bounds for one noise law inside a family box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentConstants {
    pub rho_star: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub rho3: f64,
    pub d1: f64,
    pub d2: f64,
    pub m_star: f64,
    pub l1_star: f64,
    pub sigma_q: f64,
}

pub fn moment_constants(params: &NoiseParams, bounds: &FamilyBounds) -> MomentConstants {
    let r1 = params.rho1 * params.rho1;
    let r2 = params.rho2 * params.rho2;
    let lambda = params.lambda;
    let rho_star = params.rho_star();
    let lambda1 = lambda * r1 + lambda * lambda * r2;
    let lambda2 = r1 * rho_star + lambda * r2;
    let rho3 = lambda * r2 * r2 * params.jump_law.fourth_moment();
    let d1 = 4.0 * lambda * r1 + 7.0 * lambda * lambda * r2;
    let d2 = 4.0 * r1 * rho_star + r2 * d1 + 23.0 * lambda2;
    let m_star = 4.0 * r1 + r2 * d1 + 80.0 * lambda2 + 12.0 * d2 + 21.0 * rho3;
    let l1_star = 2.0 * (1.0 + bounds.a_max * (bounds.a_max + 1.0)) * bounds.rho_star_max;
    MomentConstants {
        rho_star,
        lambda1,
        lambda2,
        rho3,
        d1,
        d2,
        m_star,
        l1_star,
        sigma_q: 3.0 * rho_star,
    }
}

/// Ceiling `n M* (ϖ*_{f,g} + ‖f‖‖g‖) ‖f‖‖g‖` for `|Cov(I_n(f)², I_n(g)²)|`.
pub fn second_order_bound<F, G>(
    f: &F,
    g: &G,
    params: &NoiseParams,
    bounds: &FamilyBounds,
    n: f64,
    cfg: &TransformConfig,
) -> Result<f64>
where
    F: Integrand + ?Sized,
    G: Integrand + ?Sized,
{
    let m_star = moment_constants(params, bounds).m_star;
    if m_star == 0.0 {
        return Ok(0.0);
    }
    let varpi = correlation_measure(f, g, n, cfg)?;
    let norms = basis::sup_norm(f, n, cfg.steps) * basis::sup_norm(g, n, cfg.steps);
    Ok(n * m_star * (varpi + norms) * norms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisFn, Constant};
    use crate::noise::JumpLaw;
    use crate::quadrature::composite_gauss;
    use approx::assert_abs_diff_eq;

    fn cfg() -> TransformConfig {
        TransformConfig::default()
    }

    // Nested Gauss-Legendre oracles, independent of the grid engine.
    fn eps_oracle(f: &dyn Integrand, a: f64, t: f64) -> f64 {
        a * composite_gauss(|v| (a * (t - v)).exp() * f.value(v) * (1.0 + (2.0 * a * v).exp()), 0.0, t, 400)
    }

    fn tau_oracle(f: &dyn Integrand, g: &dyn Integrand, a: f64, t: f64) -> f64 {
        composite_gauss(
            |s| {
                let (fs, gs) = (f.value(s), g.value(s));
                fs * gs + 0.5 * (fs * eps_oracle(g, a, s) + eps_oracle(f, a, s) * gs)
            },
            0.0,
            t,
            200,
        )
    }

    fn l_oracle(f: &dyn Integrand, a: f64, x: f64, z: f64) -> f64 {
        let m = composite_gauss(|v| (a * v).exp() * f.value(v + z), 0.0, x, 100);
        a * (a * x).exp() * (f.value(z) + a * m)
    }

    fn d_oracle(f: &dyn Integrand, g: &dyn Integrand, a: f64, x: f64, z: f64) -> f64 {
        composite_gauss(
            |y| g.value(y + z) * l_oracle(f, a, y, z) + f.value(y + z) * l_oracle(g, a, y, z),
            0.0,
            x,
            100,
        ) + f.value(z) * g.value(z)
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_f(&BasisFn(3), 0.0, 4.0, &cfg()), 0.0);
        assert_abs_diff_eq!(epsilon_f(&Constant(1.0), -1.0, 1.0, &cfg()), (-2.0f64).exp() - 1.0, epsilon = 1e-12);
        for &(a, t) in &[(-0.3, 7.0), (-4.0, 2.5)] {
            assert_abs_diff_eq!(epsilon_f(&Constant(1.0), a, t, &cfg()), (2.0 * a * t).exp() - 1.0, epsilon = 1e-11);
        }
        let v = epsilon_f(&BasisFn(2), -1.0, 5.0, &cfg());
        assert_abs_diff_eq!(v, eps_oracle(&BasisFn(2), -1.0, 5.0), epsilon = 1e-8);
    }

    #[test]
    fn tau_examples() {
        for &(a, t) in &[(-1.0f64, 1.0f64), (-0.5, 10.0), (-3.0, 20.0)] {
            let exact = (2.0 * a * t).exp_m1() / (2.0 * a);
            assert_abs_diff_eq!(tau_fg(&Constant(1.0), &Constant(1.0), a, t, &cfg()), exact, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(tau_fg(&Constant(1.0), &Constant(1.0), 0.0, 3.0, &cfg()), 3.0, epsilon = 1e-12);
        // a = 0 reduces to the inner product
        assert_abs_diff_eq!(tau_fg(&BasisFn(2), &BasisFn(2), 0.0, 7.0, &cfg()), 7.0, epsilon = 1e-10);
        assert_abs_diff_eq!(tau_fg(&BasisFn(2), &BasisFn(5), 0.0, 7.0, &cfg()), 0.0, epsilon = 1e-10);
        let fg = tau_fg(&BasisFn(2), &BasisFn(3), -0.5, 10.0, &cfg());
        let gf = tau_fg(&BasisFn(3), &BasisFn(2), -0.5, 10.0, &cfg());
        assert_abs_diff_eq!(fg, gf, epsilon = 1e-13);
        assert_abs_diff_eq!(fg, tau_oracle(&BasisFn(2), &BasisFn(3), -0.5, 10.0), epsilon = 1e-8);
    }

    #[test]
    fn covariance_examples() {
        let brownian = NoiseParams::brownian(1.0);
        assert_abs_diff_eq!(cov_i(&BasisFn(2), &BasisFn(2), &brownian, 20.0, &cfg()), 20.0, epsilon = 1e-9);
        let p = NoiseParams::reference();
        assert_abs_diff_eq!(
            cov_i(&Constant(1.0), &Constant(1.0), &p, 1.0, &cfg()),
            1.0 - (-2.0f64).exp(),
            epsilon = 1e-12
        );
        // stationary OU variance
        assert_abs_diff_eq!(
            cov_i(&Constant(1.0), &Constant(1.0), &p, 20.0, &cfg()),
            1.0 - (-40.0f64).exp(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn covariance_is_bilinear_and_psd() {
        let p = NoiseParams::reference();
        let c = TransformConfig::with_steps(2048);
        let n = 20.0;
        let combo = |t: f64| 2.0 * basis::phi_periodic(2, t) - 0.5 * basis::phi_periodic(3, t);
        let lhs = cov_i(&combo, &BasisFn(4), &p, n, &c);
        let rhs = 2.0 * cov_i(&BasisFn(2), &BasisFn(4), &p, n, &c) - 0.5 * cov_i(&BasisFn(3), &BasisFn(4), &p, n, &c);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);

        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = cov_i(&BasisFn(i + 1), &BasisFn(j + 1), &p, n, &c);
            }
        }
        // Cholesky with a tiny floor doubles as a PSD check.
        let mut l = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                if i == j {
                    let d = m[i][i] - s;
                    assert!(d > -1e-8, "negative pivot {d}");
                    l[i][i] = d.max(0.0).sqrt();
                } else if l[j][j] > 0.0 {
                    l[i][j] = (m[i][j] - s) / l[j][j];
                }
            }
        }
    }

    #[test]
    fn l_and_d_examples() {
        let c = TransformConfig::with_steps(1024);
        assert_eq!(l_f(&BasisFn(2), 0.0, 1.3, 0.2, &c), 0.0);
        let d0 = d_fg(&BasisFn(2), &BasisFn(3), 0.0, 1.3, 0.2, &c);
        assert_abs_diff_eq!(d0, basis::phi_periodic(2, 0.2) * basis::phi_periodic(3, 0.2), epsilon = 1e-14);
        // f = g = 1: L = a e^{2ax}, D = e^{2ax}
        assert_abs_diff_eq!(l_f(&Constant(1.0), -1.0, 0.7, 0.0, &c), -(-1.4f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(d_fg(&Constant(1.0), &Constant(1.0), -1.0, 0.7, 0.4, &c), (-1.4f64).exp(), epsilon = 1e-12);
        let c = cfg();
        let d = d_fg(&BasisFn(2), &BasisFn(2), -1.0, 1.0, 0.3, &c);
        assert_abs_diff_eq!(d, d_oracle(&BasisFn(2), &BasisFn(2), -1.0, 1.0, 0.3), epsilon = 1e-8);
        assert_abs_diff_eq!(l_f(&BasisFn(3), -2.0, 0.9, 0.1, &c), l_oracle(&BasisFn(3), -2.0, 0.9, 0.1), epsilon = 1e-9);
        let fg = d_fg(&BasisFn(2), &BasisFn(5), -0.7, 2.0, 0.6, &c);
        let gf = d_fg(&BasisFn(5), &BasisFn(2), -0.7, 2.0, 0.6, &c);
        assert_abs_diff_eq!(fg, gf, epsilon = 1e-13);
    }

    #[test]
    fn h_examples() {
        let c = TransformConfig::with_steps(1024);
        let no_jumps = NoiseParams::new(-1.0, 0.0, 1.0, 1.0, JumpLaw::Rademacher).unwrap();
        assert_eq!(h_fg(&BasisFn(2), &BasisFn(2), &no_jumps, 3.0, &c).unwrap(), 0.0);
        let p = NoiseParams::reference();
        let lambda1 = moment_constants(&p, &FamilyBounds::around(&p)).lambda1;
        let v = h_fg(&Constant(1.0), &Constant(1.0), &p, 1.0, &c).unwrap();
        assert_abs_diff_eq!(v, lambda1 * (1.0 - (-2.0f64).exp()) / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn h_matches_arrival_averaged_covariance() {
        // Averaging the conditional covariance over Poisson arrivals gives
        // H = λ ϱ* τ, an oracle independent of the D-convolution.
        let c = TransformConfig::with_steps(1024);
        let p = NoiseParams::new(-0.8, 1.5, 0.7, 1.2, JumpLaw::Rademacher).unwrap();
        for (f, g) in [(2usize, 2usize), (2, 3), (1, 5)] {
            let prof = h_profile(&BasisFn(f), &BasisFn(g), &p, 6.0, &c).unwrap();
            let tau = tau_profile(&BasisFn(f), &BasisFn(g), p.a, 6.0, 1024);
            for (hv, tv) in prof.values.iter().zip(&tau).step_by(97) {
                assert_abs_diff_eq!(*hv, p.lambda * p.rho_star() * tv, epsilon = 1e-6);
            }
        }
        let sym1 = h_fg(&BasisFn(2), &BasisFn(3), &p, 4.0, &c).unwrap();
        let sym2 = h_fg(&BasisFn(3), &BasisFn(2), &p, 4.0, &c).unwrap();
        assert_abs_diff_eq!(sym1, sym2, epsilon = 1e-12);
    }

    #[test]
    fn conditional_covariance() {
        let c = TransformConfig::with_steps(1024);
        let p = NoiseParams::reference();
        let arrivals = [0.7, 1.9];
        let first = cond_cov_at_jump(&BasisFn(2), &BasisFn(2), &p, &arrivals, 1, &c).unwrap();
        assert_abs_diff_eq!(first, tau_fg(&BasisFn(2), &BasisFn(2), -1.0, 0.7, &c), epsilon = 1e-14);
        let second = cond_cov_at_jump(&BasisFn(2), &BasisFn(2), &p, &arrivals, 2, &c).unwrap();
        let expect = tau_fg(&BasisFn(2), &BasisFn(2), -1.0, 1.9, &c) + d_fg(&BasisFn(2), &BasisFn(2), -1.0, 1.2, 0.7, &c);
        assert_abs_diff_eq!(second, expect, epsilon = 1e-14);
        let brownian_only = NoiseParams::new(-1.0, 1.0, 1.0, 0.0, JumpLaw::Rademacher).unwrap();
        let v = cond_cov_at_jump(&BasisFn(2), &BasisFn(3), &brownian_only, &arrivals, 2, &c).unwrap();
        assert_abs_diff_eq!(v, tau_fg(&BasisFn(2), &BasisFn(3), -1.0, 1.9, &c), epsilon = 1e-14);
        assert!(matches!(
            cond_cov_at_jump(&BasisFn(2), &BasisFn(2), &p, &arrivals, 3, &c),
            Err(Error::MissingArrival { k: 3, available: 2 })
        ));
        assert!(cond_cov_at_jump(&BasisFn(2), &BasisFn(2), &p, &arrivals, 0, &c).is_err());
    }

    #[test]
    fn correlation_measure_examples() {
        let c = cfg();
        let one = correlation_measure(&Constant(1.0), &Constant(1.0), 20.0, &c).unwrap();
        assert_abs_diff_eq!(one, 20.0, epsilon = 1e-10);
        let self2 = correlation_measure(&BasisFn(2), &BasisFn(2), 20.0, &c).unwrap();
        assert!((9.0..=40.0).contains(&self2), "{self2}");
        let cross = correlation_measure(&BasisFn(2), &BasisFn(5), 20.0, &c).unwrap();
        assert!(cross <= 3.0, "{cross}");
        assert!(correlation_measure(&BasisFn(2), &BasisFn(5), 20.0, &TransformConfig { steps: 100, lattice: 7 }).is_err());
    }

    #[test]
    fn moment_constant_examples() {
        let wide = FamilyBounds::new(1.0, 1.0, 1.0, 2.0).unwrap();
        let b = moment_constants(&NoiseParams::brownian(1.0), &wide);
        assert_eq!((b.rho_star, b.lambda1, b.lambda2, b.rho3, b.d1), (1.0, 0.0, 1.0, 0.0, 0.0));
        assert_eq!(b.d2, 27.0);
        assert_eq!(b.m_star, 408.0);
        assert_eq!(b.l1_star, 12.0);
        let r = moment_constants(&NoiseParams::reference(), &wide);
        assert_eq!((r.rho_star, r.lambda1, r.lambda2, r.rho3), (2.0, 2.0, 3.0, 1.0));
        assert_eq!((r.d1, r.d2, r.m_star, r.sigma_q), (11.0, 88.0, 1332.0, 6.0));
        let g = NoiseParams::new(-1.0, 1.0, 1.0, 1.0, JumpLaw::Gaussian).unwrap();
        assert_eq!(moment_constants(&g, &wide).rho3, 3.0);
        let silent = moment_constants(&NoiseParams::silent(), &wide);
        assert_eq!(silent.m_star, 0.0);
    }

    #[test]
    fn second_order_bound_examples() {
        let c = cfg();
        let p = NoiseParams::reference();
        let fam = FamilyBounds::around(&p);
        let ones = second_order_bound(&Constant(1.0), &Constant(1.0), &p, &fam, 20.0, &c).unwrap();
        assert_abs_diff_eq!(ones, 20.0 * 1332.0 * 21.0, epsilon = 1e-6);
        let zero = second_order_bound(&BasisFn(2), &BasisFn(2), &NoiseParams::silent(), &fam, 20.0, &c).unwrap();
        assert_eq!(zero, 0.0);
        assert!(second_order_bound(&BasisFn(2), &BasisFn(2), &p, &fam, 20.0, &c).unwrap() > 0.0);
    }

    #[test]
    fn auxiliary_bounds() {
        let c = TransformConfig::with_steps(1024);
        let n = 10.0;
        let p = NoiseParams::reference();
        let d1 = moment_constants(&p, &FamilyBounds::around(&p)).d1;
        for i in 1..=5 {
            for j in i..=5 {
                let (f, g) = (BasisFn(i), BasisFn(j));
                let varpi = correlation_measure(&f, &g, n, &TransformConfig { steps: 1024, lattice: 256 }).unwrap();
                let tau = tau_profile(&f, &g, p.a, n, 1024);
                let sup_tau = tau.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                assert!(sup_tau <= 4.0 * varpi + 1e-9, "τ bound fails for ({i},{j})");
                let h = h_profile(&f, &g, &p, n, &c).unwrap();
                let sup_h = h.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                assert!(sup_h <= d1 * varpi + 1e-9, "H bound fails for ({i},{j})");
            }
        }
    }
}
