//! Generalized Laguerre polynomials `e_n(t) = L_n^{(2q-1)}(t)` and the
//! monomial family `f_n(t) = t^n / n!`.

use super::gamma::ln_gamma_positive;
use crate::error::{domain, Result};

/// `L_n^{(2q-1)}(t)` by the ascending three-term recurrence.
pub fn laguerre_eval(n: usize, q: f64, t: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(domain("laguerre_eval", q, "q > 0"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain("laguerre_eval", t, "t >= 0"));
    }
    Ok(laguerre_alpha(n, 2.0 * q - 1.0, t))
}

/// `L_n^{(alpha)}(t)` without argument checks.
pub(crate) fn laguerre_alpha(n: usize, alpha: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - t) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n` and `L_{n-1}` scaled by a common factor `exp(-log_scale)`, so high
/// degrees at large arguments stay representable.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledPair {
    pub current: f64,
    pub previous: f64,
    pub log_scale: f64,
}

const RESCALE_ABOVE: f64 = 1e150;

pub(crate) fn laguerre_scaled(n: usize, alpha: f64, t: f64) -> ScaledPair {
    debug_assert!(n >= 1);
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - t;
    let mut log_scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - t) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
    }
    ScaledPair {
        current: cur,
        previous: prev,
        log_scale,
    }
}

const DIRECT_PRODUCT_MAX: usize = 64;

/// `t^n / n!`. Small degrees use a running product; larger ones go through
/// `exp(n ln|t| - ln n!)` so intermediate powers never overflow.
pub fn monomial_eval(n: usize, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if t == 0.0 {
        return 0.0;
    }
    if n <= DIRECT_PRODUCT_MAX {
        let mut acc = 1.0;
        for j in 1..=n {
            acc *= t / j as f64;
        }
        return acc;
    }
    let sign = if t < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    sign * (n as f64 * t.abs().ln() - ln_gamma_positive(n as f64 + 1.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        assert_eq!(laguerre_eval(0, 0.7, 3.0).unwrap(), 1.0);
        assert_eq!(laguerre_eval(1, 0.5, 1.0).unwrap(), 0.0);
        // e_1(t) = 2q - t
        assert!((laguerre_eval(1, 1.25, 0.5).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_against_exact_rational() {
        // L_3^{(1/2)}(2) = -43/48
        let got = laguerre_eval(3, 0.75, 2.0).unwrap();
        assert!((got + 43.0 / 48.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_matches_plain_when_small() {
        for n in 1..30 {
            let s = laguerre_scaled(n, 0.4, 3.3);
            assert_eq!(s.log_scale, 0.0);
            assert_eq!(s.current, laguerre_alpha(n, 0.4, 3.3));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(laguerre_eval(2, 0.0, 1.0).is_err());
        assert!(laguerre_eval(2, 0.5, -1.0).is_err());
    }

    #[test]
    fn monomials() {
        assert_eq!(monomial_eval(0, 7.0), 1.0);
        assert_eq!(monomial_eval(1, 3.0), 3.0);
        assert!((monomial_eval(3, 2.0) - 8.0 / 6.0).abs() < 1e-15);
        // 100^170 / 170!, 50-digit reference
        let big = monomial_eval(170, 100.0);
        let expected = 1.377_900_967_791_770_586_7e33;
        assert!(big.is_finite());
        assert!(((big - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn monomial_paths_agree_at_switch() {
        let n = DIRECT_PRODUCT_MAX + 1;
        let t: f64 = 12.5;
        let product: f64 = (1..=n).map(|j| t / j as f64).product();
        let got = monomial_eval(n, t);
        assert!(((got - product) / product).abs() < 1e-13);
    }
}
