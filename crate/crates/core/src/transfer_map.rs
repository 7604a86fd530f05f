//! The Farey map, the pointwise transfer operators, and eigenfunctions
//! rebuilt from their Laguerre coefficients.
//!
//! The transform `B_q[φ](x) = x^{-2q} ∫ e^{-t/x} e^t φ(t) m_q(dt)` sends
//! `e_n` to `Γ(n+2q)/n! · (1-x)^n` (Laplace transform of a generalized
//! Laguerre polynomial), so a coefficient vector `φ` becomes the power series
//! `Σ φ_n Γ(n+2q)/n! (1-x)^n`.

use serde::Serialize;

use crate::eigensolver::EigenPair;
use crate::error::{domain, Error, Result};
use crate::farey_matrix::{check_q, diag_unchecked, Sign};

/// `F(x) = x/(1-x)` on `[0, 1/2]`, `(1-x)/x` on `[1/2, 1]`.
pub fn farey(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("farey", x, "0 <= x <= 1"));
    }
    Ok(if x <= 0.5 {
        x / (1.0 - x)
    } else {
        (1.0 - x) / x
    })
}

/// `B_q[e_n](x) = Γ(n+2q)/n! · (1-x)^n`.
pub fn transformed_laguerre(q: f64, n: usize, x: f64) -> Result<f64> {
    check_q("transformed_laguerre", q)?;
    Ok(diag_unchecked(q, n) * (1.0 - x).powi(n as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenfunctionSeries {
    q: f64,
    /// Laguerre coefficients `φ_n`.
    phi: Vec<f64>,
    /// Power-series coefficients `φ_n Γ(n+2q)/n!` in the variable `1 - x`.
    coefficients: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEval {
    pub value: f64,
    /// `|last term| · N`, a heuristic bound on the omitted tail.
    pub tail_bound: f64,
}

impl EigenfunctionSeries {
    pub fn from_coefficients(q: f64, phi: Vec<f64>) -> Result<Self> {
        check_q("EigenfunctionSeries", q)?;
        if phi.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient vector".into()));
        }
        let coefficients = phi
            .iter()
            .enumerate()
            .map(|(n, p)| p * diag_unchecked(q, n))
            .collect();
        Ok(EigenfunctionSeries {
            q,
            phi,
            coefficients,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn evaluate(&self, x: f64) -> SeriesEval {
        let u = 1.0 - x;
        let value = self
            .coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c);
        let n = self.coefficients.len();
        let last = self.coefficients[n - 1] * u.powi(n as i32 - 1);
        SeriesEval {
            value,
            tail_bound: last.abs() * n as f64,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.evaluate(x).value
    }
}

/// Series of the eigenfunction attached to a converged eigenpair.
pub fn reconstruct_eigenfunction(pair: &EigenPair) -> Result<EigenfunctionSeries> {
    if !pair.converged || pair.degenerate {
        return Err(Error::InvalidArgument(
            "eigenfunction reconstruction needs a converged, non-degenerate pair".into(),
        ));
    }
    EigenfunctionSeries::from_coefficients(pair.q, pair.phi.clone())
}

/// `(1/(x+1))^{2q} [f(x/(x+1)) ± f(1/(x+1))]` for `0 < x < 1`.
pub fn apply_transfer_pointwise(f: &EigenfunctionSeries, sign: Sign, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("apply_transfer_pointwise", x, "0 < x < 1"));
    }
    let inv = 1.0 / (x + 1.0);
    let weight = inv.powf(2.0 * f.q);
    Ok(weight * (f.value(x * inv) + sign.factor() * f.value(inv)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub x: f64,
    pub f_value: f64,
    pub transfer_value: f64,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualTable {
    pub q: f64,
    pub sign: Sign,
    pub lambda: f64,
    pub rows: Vec<ResidualRow>,
}

impl ResidualTable {
    pub fn max_relative_residual(&self) -> f64 {
        self.rows
            .iter()
            .fold(0.0, |m, r| m.max(r.relative_residual))
    }
}

/// `|P f(x) - λ f(x)| / (λ |f(x)|)` on a grid, for any candidate `(λ, f)`.
pub fn residual_table(
    f: &EigenfunctionSeries,
    sign: Sign,
    lambda: f64,
    x_grid: &[f64],
) -> Result<ResidualTable> {
    let rows = x_grid
        .iter()
        .map(|&x| {
            let transfer_value = apply_transfer_pointwise(f, sign, x)?;
            let f_value = f.value(x);
            Ok(ResidualRow {
                x,
                f_value,
                transfer_value,
                relative_residual: (transfer_value - lambda * f_value).abs()
                    / (lambda * f_value).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualTable {
        q: f.q,
        sign,
        lambda,
        rows,
    })
}

/// Residual table of the eigenfunction rebuilt from `pair`.
pub fn eigen_residual(pair: &EigenPair, x_grid: &[f64]) -> Result<ResidualTable> {
    let f = reconstruct_eigenfunction(pair)?;
    residual_table(&f, pair.sign, pair.lambda, x_grid)
}

/// `0.1, 0.2, ..., 0.9`.
pub fn default_x_grid() -> Vec<f64> {
    (1..10).map(|i| i as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{dominant_eigenpair, DEFAULT_MAX_ITER, DEFAULT_TOL};
    use crate::farey_matrix::build_truncation;

    #[test]
    fn farey_values() {
        assert_eq!(farey(0.0).unwrap(), 0.0);
        assert_eq!(farey(0.5).unwrap(), 1.0);
        assert_eq!(farey(1.0).unwrap(), 0.0);
        assert!((farey(2.0 / 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(farey(-0.1).is_err());
        assert!(farey(1.1).is_err());
    }

    #[test]
    fn branches_agree_at_half() {
        let x: f64 = 0.5;
        assert_eq!(x / (1.0 - x), (1.0 - x) / x);
    }

    #[test]
    fn constant_series() {
        let one = EigenfunctionSeries::from_coefficients(0.5, vec![1.0]).unwrap();
        assert_eq!(one.value(0.3), 1.0);
        let t = apply_transfer_pointwise(&one, Sign::Plus, 1.0 / 3.0).unwrap();
        assert!((t - 1.5).abs() < 1e-15);
        for q in [0.3, 0.9] {
            let c = EigenfunctionSeries::from_coefficients(q, vec![1.0]).unwrap();
            assert_eq!(apply_transfer_pointwise(&c, Sign::Minus, 0.4).unwrap(), 0.0);
        }
    }

    #[test]
    fn two_term_series() {
        let f = EigenfunctionSeries::from_coefficients(0.5, vec![1.0, 0.5]).unwrap();
        assert!((f.value(0.5) - 1.25).abs() < 1e-15);
        assert!((transformed_laguerre(0.5, 1, 0.25).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn pointwise_domain() {
        let f = EigenfunctionSeries::from_coefficients(0.5, vec![1.0]).unwrap();
        assert!(apply_transfer_pointwise(&f, Sign::Plus, 0.0).is_err());
        assert!(apply_transfer_pointwise(&f, Sign::Plus, 1.0).is_err());
    }

    #[test]
    fn constant_is_not_an_eigenfunction() {
        let c = EigenfunctionSeries::from_coefficients(0.8, vec![1.0]).unwrap();
        let r = residual_table(&c, Sign::Plus, 2.0, &default_x_grid()).unwrap();
        assert!(r.max_relative_residual() > 1e-2);
    }

    #[test]
    fn residual_shrinks_with_size() {
        let grid = default_x_grid();
        let at = |n| {
            let m = build_truncation(0.5, Sign::Plus, n).unwrap();
            let p = dominant_eigenpair(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            eigen_residual(&p, &grid).unwrap().max_relative_residual()
        };
        assert!(at(10) < at(2));
    }
}
