//! Generalized Gauss–Laguerre quadrature for the weight `t^alpha e^{-t}`.
//!
//! Nodes start as eigenvalues of the symmetric Jacobi matrix (diagonal
//! `2i + alpha + 1`, off-diagonal `sqrt(i (i + alpha))`), found with implicit
//! QL and Wilkinson shifts, then are polished by Newton steps on
//! `L_M^{(alpha)}`. Weights come from
//! `w_i = Γ(M + alpha + 1) / (M! t_i [L_M'(t_i)]²)`, evaluated in log space.
//! Squared eigenvector components only carry absolute accuracy, which is
//! useless for the tiny weights at large nodes that dominate high moments.

use serde::Serialize;

use super::gamma::ln_gamma_positive;
use super::laguerre::laguerre_scaled;
use crate::error::{domain, Error, Result};

pub const MAX_ORDER: usize = 512;
const MAX_QL_SWEEPS: usize = 50;
const MAX_NEWTON_STEPS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights in linear space. For orders beyond roughly 180 the weights at
    /// the largest nodes drop below the smallest positive `f64` and read as
    /// zero; [`log_weights`](Self::log_weights) stays exact there.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// `Σ w_i f(t_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Largest relative error of the rule on `t^j`, `j < 2M`, against the
    /// exact moments `Γ(j + α + 1)`. Summed in log space.
    pub fn moment_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..2 * self.order() {
            let log_exact = ln_gamma_positive(j as f64 + self.alpha + 1.0);
            let ratio: f64 = self
                .nodes
                .iter()
                .zip(&self.log_weights)
                .map(|(t, lw)| (lw + j as f64 * t.ln() - log_exact).exp())
                .sum();
            worst = worst.max((ratio - 1.0).abs());
        }
        worst
    }
}

pub fn gauss_laguerre(order: usize, alpha: f64) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "quadrature order {order} outside 1..={MAX_ORDER}"
        )));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(domain("gauss_laguerre", alpha, "alpha > -1"));
    }

    let mut diag: Vec<f64> = (0..order).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let mut off: Vec<f64> = (0..order)
        .map(|i| {
            let j = (i + 1) as f64;
            if i + 1 < order {
                (j * (j + alpha)).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(|a, b| a.total_cmp(b));

    let m = order as f64;
    let ln_norm = ln_gamma_positive(m + alpha + 1.0) - ln_gamma_positive(m + 1.0);
    let mut nodes = Vec::with_capacity(order);
    let mut log_weights = Vec::with_capacity(order);
    for &guess in &diag {
        let t = polish_root(order, alpha, guess.max(f64::MIN_POSITIVE));
        let p = laguerre_scaled(order, alpha, t);
        let deriv = (m * p.current - (m + alpha) * p.previous) / t;
        nodes.push(t);
        log_weights.push(ln_norm - t.ln() - 2.0 * (deriv.abs().ln() + p.log_scale));
    }
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureRule {
        alpha,
        nodes,
        weights,
        log_weights,
    })
}

fn polish_root(order: usize, alpha: f64, mut t: f64) -> f64 {
    let m = order as f64;
    for _ in 0..MAX_NEWTON_STEPS {
        let p = laguerre_scaled(order, alpha, t);
        let deriv = (m * p.current - (m + alpha) * p.previous) / t;
        let step = p.current / deriv;
        let next = t - step;
        if !(next > 0.0) || !next.is_finite() {
            break;
        }
        t = next;
        if step.abs() <= 2.0 * f64::EPSILON * t {
            break;
        }
    }
    t
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. `diag` is overwritten with the eigenvalues (unsorted);
/// `off[i]` couples rows `i` and `i + 1`, and `off[n - 1]` is scratch.
pub(crate) fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(off.len(), n);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence {
                    what: "tridiagonal QL eigensolver",
                    iterations: sweeps,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule() {
        let r = gauss_laguerre(1, 0.0).unwrap();
        assert!((r.nodes()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_laguerre(2, 0.0).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nodes()[0] - (2.0 - s2)).abs() < 1e-15);
        assert!((r.nodes()[1] - (2.0 + s2)).abs() < 1e-14);
        assert!((r.weights()[0] - (2.0 + s2) / 4.0).abs() < 1e-15);
        assert!((r.weights()[1] - (2.0 - s2) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn total_mass_half() {
        // q = 1/2 -> alpha = 0, mass Γ(1) = 1
        let r = gauss_laguerre(4, 0.0).unwrap();
        let s: f64 = r.weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ql_on_known_matrix() {
        // tridiag(-1, 2, -1) of size 5: eigenvalues 2 - 2 cos(k π / 6)
        let mut d = vec![2.0; 5];
        let mut e = vec![-1.0, -1.0, -1.0, -1.0, 0.0];
        tridiagonal_ql(&mut d, &mut e).unwrap();
        d.sort_by(|a, b| a.total_cmp(b));
        for (k, v) in d.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 6.0).cos();
            assert!((v - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_requests() {
        assert!(gauss_laguerre(0, 0.0).is_err());
        assert!(gauss_laguerre(513, 0.0).is_err());
        assert!(gauss_laguerre(4, -1.0).is_err());
    }

    #[test]
    fn max_order_builds() {
        let r = gauss_laguerre(MAX_ORDER, 0.5).unwrap();
        assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(r.log_weights().iter().all(|w| w.is_finite()));
    }
}
