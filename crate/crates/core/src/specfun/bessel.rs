//! Bessel functions of the first kind by the ascending power series.
//!
//! The series alternates, so at moderate arguments the partial sums cancel
//! heavily. Terms and the running sum are carried in double-double, and every
//! evaluation reports how large its terms got and a bound on the error that
//! remains. There is deliberately no asymptotic branch.

use serde::Serialize;

use super::ddouble::DoubleDouble;
use super::gamma::ln_gamma_positive;
use crate::error::{domain, Error, Result};

/// Relative size of the first omitted term at which summation stops.
pub const SERIES_CUTOFF: f64 = 1e-16;

/// `max_term / |value|` above which [`SeriesValue::accuracy_loss`] is set.
pub const ACCURACY_LOSS_RATIO: f64 = 1e15;

const MAX_TERMS: usize = 100_000;
const DD_EPS: f64 = 1.232_595_164_407_831e-32; // 2^-106

/// Result of a series evaluation together with its accuracy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Magnitude of the first omitted term; bounds the truncation error.
    pub truncation_bound: f64,
    /// Largest term magnitude seen, in the same units as `value`.
    pub max_term: f64,
    /// Truncation plus rounding error estimate for `value`.
    pub error_bound: f64,
    /// Set when `max_term > ACCURACY_LOSS_RATIO * |value|`.
    pub accuracy_loss: bool,
}

/// `J_nu(x)` for `nu >= 0`, `x >= 0`.
///
/// Accuracy is good up to `x ≈ 50`; past that the cancellation eats into the
/// double-double headroom and `error_bound` grows accordingly. Arguments up to
/// about 200 are still evaluated but flagged.
pub fn bessel_j(nu: f64, x: f64) -> Result<SeriesValue> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain("bessel_j", nu, "order nu >= 0"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_j", x, "x >= 0"));
    }
    let half = x / 2.0;
    let y = DoubleDouble::product_of(half, half);
    let prefactor = if nu == 0.0 { 1.0 } else { half.powf(nu) };
    Ok(scale(normalized_series(nu, y)?, prefactor))
}

/// `Σ_k (-y)^k / (k! Γ(k + nu + 1))`, the entire function satisfying
/// `J_nu(x) = (x/2)^nu · S_nu(x²/4)`.
///
/// Defined for `nu > -1`, which covers the kernel `J_{2q-1}(2√y) / y^{q-1/2}`
/// for every `q > 0`, including `q < 1/2` where the Bessel order is negative.
pub fn bessel_series(nu: f64, y: f64) -> Result<SeriesValue> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(domain("bessel_series", nu, "nu > -1"));
    }
    if !(y >= 0.0) || !y.is_finite() {
        return Err(domain("bessel_series", y, "y >= 0"));
    }
    normalized_series(nu, DoubleDouble::from_f64(y))
}

fn normalized_series(nu: f64, y: DoubleDouble) -> Result<SeriesValue> {
    let lead = (-ln_gamma_positive(nu + 1.0)).exp();
    let neg_y = -y;
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = DoubleDouble::ZERO;
    let mut max_term: f64 = 0.0;
    let mut k = 0usize;
    loop {
        sum = sum + term;
        max_term = max_term.max(term.hi.abs());
        let kk = (k + 1) as f64;
        let denom = DoubleDouble::sum_of(nu, kk) * kk;
        let next = (term * neg_y).div(denom);
        k += 1;
        let past_peak = denom.hi > y.hi;
        let tiny = next.abs().hi < SERIES_CUTOFF * sum.abs().hi;
        if next.hi == 0.0 || (past_peak && tiny) {
            let value = sum.to_f64();
            let rounding = 4.0 * k as f64 * max_term * DD_EPS;
            let truncation = next.hi.abs();
            return Ok(SeriesValue {
                value: value * lead,
                terms: k,
                truncation_bound: truncation * lead,
                max_term: max_term * lead,
                error_bound: (truncation + rounding) * lead
                    + 2.0 * f64::EPSILON * (value * lead).abs(),
                accuracy_loss: max_term > ACCURACY_LOSS_RATIO * value.abs(),
            });
        }
        if k >= MAX_TERMS {
            return Err(Error::NoConvergence {
                what: "Bessel power series",
                iterations: k,
            });
        }
        term = next;
    }
}

fn scale(s: SeriesValue, factor: f64) -> SeriesValue {
    SeriesValue {
        value: s.value * factor,
        terms: s.terms,
        truncation_bound: s.truncation_bound * factor,
        max_term: s.max_term * factor,
        error_bound: s.error_bound * factor + f64::EPSILON * (s.value * factor).abs(),
        accuracy_loss: s.accuracy_loss,
    }
}
