//! Quadrature realization of the operators behind the matrix representation:
//! multiplication `(M φ)(t) = e^{-t} φ(t)` and the Bessel-kernel operator
//!
//! ```text
//! (N_q φ)(t) = ∫ J_{2q-1}(2√(st)) / (st)^{q-1/2} φ(s) m_q(ds),   m_q(ds) = s^{2q-1} e^{-s} ds
//! ```
//!
//! on `L²(m_q)`. The kernel is evaluated as the entire series
//! `Σ (-st)^k / (k! Γ(k+2q))`, which equals the Bessel quotient for every
//! `q > 0`. This module exists to cross-check the matrix entries and the
//! intertwining relations `N_q f_n = M e_n`, `N_q e_n = M f_n`; it is not a
//! general-purpose integral operator.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::farey_matrix::{check_q, Sign};
use crate::specfun::{bessel_series, laguerre_alpha, monomial_eval, QuadratureRule, SeriesValue};

pub const DEFAULT_QUADRATURE_ORDER: usize = 60;
pub const DEFAULT_T_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
pub const MAX_INTERTWINING_DEGREE: usize = 8;

/// A real function on `(0, ∞)` with a label for reports.
#[derive(Clone)]
pub struct SampledFunction {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("label", &self.label)
            .finish()
    }
}

impl SampledFunction {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SampledFunction {
            label: label.into(),
            eval: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn constant(c: f64) -> Self {
        SampledFunction::new(format!("const({c})"), move |_| c)
    }

    /// `e_n(t) = L_n^{(2q-1)}(t)`.
    pub fn laguerre(n: usize, q: f64) -> Self {
        let alpha = 2.0 * q - 1.0;
        SampledFunction::new(format!("e_{n}"), move |t| laguerre_alpha(n, alpha, t))
    }

    /// `f_n(t) = t^n / n!`.
    pub fn monomial(n: usize) -> Self {
        SampledFunction::new(format!("f_{n}"), move |t| monomial_eval(n, t))
    }

    /// `ℓ±_n = e_n ± f_n`.
    pub fn ell(n: usize, q: f64, sign: Sign) -> Self {
        let alpha = 2.0 * q - 1.0;
        let s = sign.factor();
        SampledFunction::new(format!("ell{}_{n}", sign.as_str()), move |t| {
            laguerre_alpha(n, alpha, t) + s * monomial_eval(n, t)
        })
    }

    /// `ζ±_n = e^{-t} (e_n ± f_n)`.
    pub fn zeta(n: usize, q: f64, sign: Sign) -> Self {
        let alpha = 2.0 * q - 1.0;
        let s = sign.factor();
        SampledFunction::new(format!("zeta{}_{n}", sign.as_str()), move |t| {
            (-t).exp() * (laguerre_alpha(n, alpha, t) + s * monomial_eval(n, t))
        })
    }
}

/// `e^{-t} f(t)`.
pub fn apply_m(f: &SampledFunction, t: f64) -> f64 {
    (-t).exp() * f.eval(t)
}

/// A quadrature value of `N_q f` with its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    /// Kernel-series error propagated through the weights, plus summation
    /// rounding. Quadrature truncation error is not included.
    pub error_bound: f64,
    /// Some node with a non-negligible contribution had a lossy kernel value.
    pub accuracy_loss: bool,
}

/// `N_q` discretized on a fixed rule; kernel rows are recomputed per `t`.
#[derive(Debug, Clone)]
pub struct KernelOperator<'a> {
    q: f64,
    rule: &'a QuadratureRule,
}

impl<'a> KernelOperator<'a> {
    pub fn new(q: f64, rule: &'a QuadratureRule) -> Result<Self> {
        check_q("KernelOperator::new", q)?;
        let alpha = 2.0 * q - 1.0;
        if (rule.alpha() - alpha).abs() > 1e-12 * alpha.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "quadrature rule has alpha {} but q = {q} needs {alpha}",
                rule.alpha()
            )));
        }
        Ok(KernelOperator { q, rule })
    }

    pub fn rule(&self) -> &QuadratureRule {
        self.rule
    }

    /// Kernel values `K(s_i, t)` at every node.
    pub fn kernel_row(&self, t: f64) -> Result<Vec<SeriesValue>> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(domain("apply_n_q", t, "t > 0"));
        }
        let nu = 2.0 * self.q - 1.0;
        self.rule
            .nodes()
            .iter()
            .map(|&s| bessel_series(nu, s * t))
            .collect()
    }

    /// `Σ_i w_i K(s_i, t) f(s_i)` over a precomputed kernel row.
    pub fn apply_row(&self, row: &[SeriesValue], f: &SampledFunction) -> KernelValue {
        let mut value = 0.0;
        let mut magnitude = 0.0;
        let mut propagated = 0.0;
        let mut lossy_weight = 0.0;
        for ((&s, &w), k) in self.rule.nodes().iter().zip(self.rule.weights()).zip(row) {
            let fs = f.eval(s);
            let term = w * k.value * fs;
            value += term;
            magnitude += term.abs();
            propagated += w * fs.abs() * k.error_bound;
            if k.accuracy_loss {
                lossy_weight += w * fs.abs() * k.max_term;
            }
        }
        let rounding = self.rule.order() as f64 * f64::EPSILON * magnitude;
        KernelValue {
            value,
            error_bound: propagated + rounding,
            accuracy_loss: lossy_weight > f64::EPSILON * magnitude.max(f64::MIN_POSITIVE),
        }
    }

    pub fn apply(&self, f: &SampledFunction, t: f64) -> Result<KernelValue> {
        let row = self.kernel_row(t)?;
        Ok(self.apply_row(&row, f))
    }
}

/// `(N_q f)(t)` by the quadrature rule, whose `alpha` must equal `2q - 1`.
pub fn apply_n_q(
    f: &SampledFunction,
    t: f64,
    q: f64,
    rule: &QuadratureRule,
) -> Result<KernelValue> {
    KernelOperator::new(q, rule)?.apply(f, t)
}

/// `Σ_i w_i f(s_i) g(s_i)`, the `L²(m_q)` inner product by quadrature.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction, rule: &QuadratureRule) -> f64 {
    rule.integrate(|s| f.eval(s) * g.eval(s))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningRecord {
    pub q: f64,
    pub n: usize,
    pub t: f64,
    /// `|N_q f_n(t) - M e_n(t)|`
    pub residual_fn: f64,
    /// `|N_q e_n(t) - M f_n(t)|`
    pub residual_en: f64,
    pub quadrature_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningReport {
    pub q: f64,
    pub quadrature_order: usize,
    pub records: Vec<IntertwiningRecord>,
    /// Any kernel evaluation flagged for accuracy loss.
    pub accuracy_loss: bool,
}

impl IntertwiningReport {
    pub fn max_residual(&self) -> f64 {
        self.records
            .iter()
            .fold(0.0, |m, r| m.max(r.residual_fn).max(r.residual_en))
    }

    /// The records as a JSON array.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.records)?)
    }
}

/// Residuals of both intertwining relations for `n ≤ n_max` over `t_grid`.
pub fn verify_intertwining(
    q: f64,
    n_max: usize,
    t_grid: &[f64],
    rule: &QuadratureRule,
) -> Result<IntertwiningReport> {
    if n_max > MAX_INTERTWINING_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "intertwining check supports n_max <= {MAX_INTERTWINING_DEGREE}"
        )));
    }
    let op = KernelOperator::new(q, rule)?;
    let mut records = Vec::with_capacity((n_max + 1) * t_grid.len());
    let mut accuracy_loss = false;
    for &t in t_grid {
        let row = op.kernel_row(t)?;
        for n in 0..=n_max {
            let e_n = SampledFunction::laguerre(n, q);
            let f_n = SampledFunction::monomial(n);
            let nf = op.apply_row(&row, &f_n);
            let ne = op.apply_row(&row, &e_n);
            accuracy_loss |= nf.accuracy_loss || ne.accuracy_loss;
            records.push(IntertwiningRecord {
                q,
                n,
                t,
                residual_fn: (nf.value - apply_m(&e_n, t)).abs(),
                residual_en: (ne.value - apply_m(&f_n, t)).abs(),
                quadrature_order: rule.order(),
            });
        }
    }
    Ok(IntertwiningReport {
        q,
        quadrature_order: rule.order(),
        records,
        accuracy_loss,
    })
}

/// `c±_nk = (P± e_n, e_k)` with `P± = M ± N_q` realized by quadrature: the
/// outer integral uses the rule's nodes, and `N_q e_n` at each node is
/// itself a quadrature sum over the same rule.
///
/// Returns the value and an error bound from the kernel evaluations.
pub fn matrix_element_by_quadrature(
    q: f64,
    sign: Sign,
    n: usize,
    k: usize,
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    let op = KernelOperator::new(q, rule)?;
    let e_n = SampledFunction::laguerre(n, q);
    let e_k = SampledFunction::laguerre(k, q);
    let mut value = 0.0;
    let mut bound = 0.0;
    for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
        let nq = op.apply(&e_n, s)?;
        let p = apply_m(&e_n, s) + sign.factor() * nq.value;
        let ek = e_k.eval(s);
        value += w * p * ek;
        bound += w * ek.abs() * nq.error_bound;
    }
    Ok((value, bound))
}
