//! Uniform-grid quadrature shared by the basis, signal and transform code.
//!
//! All cumulative integrals use the four-point cell rule
//! `h/24 (-v[j-1] + 13 v[j] + 13 v[j+1] - v[j+2])` with one-sided cubic
//! cells at the boundary, which is fourth-order accurate globally.

use crate::error::{Error, Result};

/// Cell integral over `[x_j, x_{j+1}]` from node values, in units of `h`.
#[inline]
fn cell(values: &[f64], j: usize) -> f64 {
    let n = values.len() - 1;
    match n {
        0 => 0.0,
        1 => 0.5 * (values[0] + values[1]),
        2 => {
            if j == 0 {
                (5.0 * values[0] + 8.0 * values[1] - values[2]) / 12.0
            } else {
                (-values[0] + 8.0 * values[1] + 5.0 * values[2]) / 12.0
            }
        }
        _ => {
            if j == 0 {
                (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3]) / 24.0
            } else if j == n - 1 {
                (values[n - 3] - 5.0 * values[n - 2] + 19.0 * values[n - 1] + 9.0 * values[n]) / 24.0
            } else {
                (-values[j - 1] + 13.0 * values[j] + 13.0 * values[j + 1] - values[j + 2]) / 24.0
            }
        }
    }
}

/// Running integral `F[j] = ∫_0^{x_j} v` from node values on a grid of step `h`.
pub fn cumulative(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    if values.is_empty() {
        return out;
    }
    out.push(0.0);
    let mut acc = 0.0;
    for j in 0..values.len() - 1 {
        acc += h * cell(values, j);
        out.push(acc);
    }
    out
}

/// Integral over the whole grid.
pub fn integrate(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    h * (0..values.len() - 1).map(|j| cell(values, j)).sum::<f64>()
}

const HEAD: [f64; 4] = [8.0 / 24.0, 31.0 / 24.0, 20.0 / 24.0, 25.0 / 24.0];

/// Weight (in units of `h`) of node `i` when integrating over nodes `0..=k`.
///
/// Agrees with [`integrate`] node by node, which lets callers accumulate
/// integrals whose integrand is only available one node at a time.
pub fn node_weight(i: usize, k: usize) -> f64 {
    debug_assert!(i <= k);
    if k >= 7 {
        if i < 4 {
            HEAD[i]
        } else if k - i < 4 {
            HEAD[k - i]
        } else {
            1.0
        }
    } else {
        small_weights(k)[i]
    }
}

fn small_weights(k: usize) -> Vec<f64> {
    let mut w = vec![0.0; k + 1];
    let mut unit = vec![0.0; k + 1];
    for i in 0..=k {
        unit[i] = 1.0;
        w[i] = integrate(&unit, 1.0);
        unit[i] = 0.0;
    }
    w
}

/// `K[j] = ∫_0^{x_j} e^{a (x_j - v)} q(v) dv`, evaluated by recursion so that
/// large `|a| x` never overflows.
pub fn exp_weighted_cumulative(q: &[f64], a: f64, h: f64) -> Vec<f64> {
    let len = q.len();
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(0.0);
    if len == 1 {
        return out;
    }
    let e1 = (a * h).exp();
    let mut local = vec![0.0; len.min(4)];
    let mut acc = 0.0;
    for j in 0..len - 1 {
        // Window of node values rescaled to the right end of the cell.
        let (start, width) = window(len, j);
        local.resize(width, 0.0);
        for (s, slot) in local.iter_mut().enumerate() {
            let i = start + s;
            let lag = (j + 1) as f64 - i as f64;
            *slot = (a * h * lag).exp() * q[i];
        }
        let cell_value = h * cell(&local, j - start);
        acc = e1 * acc + cell_value;
        out.push(acc);
    }
    out
}

fn window(len: usize, j: usize) -> (usize, usize) {
    let n = len - 1;
    match n {
        1 => (0, 2),
        2 => (0, 3),
        _ => {
            if j == 0 {
                (0, 4)
            } else if j == n - 1 {
                (n - 3, 4)
            } else {
                (j - 1, 4)
            }
        }
    }
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Five-point Gauss-Legendre rule on `[lo, hi]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    GL5_NODES
        .iter()
        .zip(GL5_WEIGHTS.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite Gauss-Legendre rule with `panels` equal panels.
pub fn composite_gauss<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|p| {
            let a = lo + p as f64 * h;
            gauss_legendre(&f, a, a + h)
        })
        .sum()
}

/// Mean of a 1-periodic function over one period with the rectangle rule on
/// `points` equispaced nodes. Spectrally accurate for smooth periodic input.
pub fn periodic_mean<F: Fn(f64) -> f64>(f: F, points: usize) -> f64 {
    let h = 1.0 / points as f64;
    (0..points).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// Periodic mean with a halving-based error estimate.
pub fn periodic_mean_checked<F: Fn(f64) -> f64>(f: F, points: usize, tolerance: f64) -> Result<f64> {
    if points < 2 || !points.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "periodic quadrature needs an even number of points, got {points}"
        )));
    }
    let fine = periodic_mean(&f, points);
    let coarse = periodic_mean(&f, points / 2);
    let estimate = (fine - coarse).abs();
    if estimate > tolerance {
        return Err(Error::QuadratureNotConverged { estimate, tolerance });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(len: usize, h: f64) -> Vec<f64> {
        (0..len).map(|i| i as f64 * h).collect()
    }

    #[test]
    fn cumulative_is_exact_for_cubics() {
        let h = 0.1;
        let xs = grid(12, h);
        let v: Vec<f64> = xs.iter().map(|x| 1.0 + x - 2.0 * x * x + x * x * x).collect();
        let c = cumulative(&v, h);
        for (x, got) in xs.iter().zip(c.iter()) {
            let exact = x + x * x / 2.0 - 2.0 * x.powi(3) / 3.0 + x.powi(4) / 4.0;
            assert_abs_diff_eq!(*got, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn small_grids() {
        assert_eq!(cumulative(&[], 1.0), Vec::<f64>::new());
        assert_eq!(cumulative(&[3.0], 1.0), vec![0.0]);
        assert_abs_diff_eq!(integrate(&[1.0, 3.0], 0.5), 1.0);
        // quadratic on three nodes is exact
        let v = [0.0, 1.0, 4.0];
        assert_abs_diff_eq!(integrate(&v, 1.0), 8.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn node_weights_reproduce_integrate() {
        for k in 0..20 {
            let v: Vec<f64> = (0..=k).map(|i| ((i * 7 + 3) % 5) as f64 - 1.3).collect();
            let by_weights: f64 = (0..=k).map(|i| node_weight(i, k) * v[i]).sum();
            assert_abs_diff_eq!(by_weights, integrate(&v, 1.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let f = |x: f64| (3.0 * x).sin();
        let exact = (1.0 - (6.0f64).cos()) / 3.0;
        let err = |n: usize| {
            let h = 2.0 / n as f64;
            let v: Vec<f64> = (0..=n).map(|i| f(i as f64 * h)).collect();
            (integrate(&v, h) - exact).abs()
        };
        let ratio = err(64) / err(128);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn exp_weighted_matches_direct() {
        let a = -1.7;
        let h = 0.01;
        let len = 301;
        let q: Vec<f64> = (0..len).map(|i| (i as f64 * h * 5.0).cos()).collect();
        let k = exp_weighted_cumulative(&q, a, h);
        // direct: e^{a x} * ∫ e^{-a v} q(v) dv
        let scaled: Vec<f64> = (0..len).map(|i| (-a * i as f64 * h).exp() * q[i]).collect();
        let c = cumulative(&scaled, h);
        for i in 0..len {
            let direct = (a * i as f64 * h).exp() * c[i];
            assert_abs_diff_eq!(k[i], direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn exp_weighted_survives_large_decay() {
        let q = vec![1.0; 20001];
        let a = -50.0;
        let h = 0.001;
        let k = exp_weighted_cumulative(&q, a, h);
        let t = 20.0;
        let exact = (1.0 - (a * t).exp()) / (-a);
        assert!(k.iter().all(|v| v.is_finite()));
        assert_abs_diff_eq!(k[20000], exact, epsilon = 1e-6);
    }

    #[test]
    fn gauss_rules() {
        assert_abs_diff_eq!(gauss_legendre(|x| x.powi(9), 0.0, 1.0), 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(
            composite_gauss(|x| x.exp(), 0.0, 2.0, 8),
            2f64.exp() - 1.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn periodic_rule_and_error_report() {
        let m = periodic_mean(|x| (2.0 * std::f64::consts::PI * x).cos().powi(2), 64);
        assert_abs_diff_eq!(m, 0.5, epsilon = 1e-15);
        let err = periodic_mean_checked(|x| if x < 0.3 { 1.0 } else { 0.0 }, 16, 1e-12);
        assert!(matches!(err, Err(Error::QuadratureNotConverged { .. })));
    }
}
