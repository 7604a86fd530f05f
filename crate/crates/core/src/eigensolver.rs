//! Dominant eigenpairs of north-west truncations of `A±`, and sweeps over the
//! truncation size and over `q`.
//!
//! Each truncation is a positive matrix on its active block (all indices for
//! `plus`, indices `1..N` for `minus`), so its Perron root is simple and its
//! eigenvector can be taken strictly positive. The Perron roots increase with
//! `N`, so every computed value is a lower bound for the eigenvalue of the
//! infinite matrix.
//!
//! The eigenvalue estimate at each power step is the Rayleigh quotient in the
//! `D`-weighted inner product. Because `D A = C` is symmetric, that quotient
//! never exceeds the Perron root and converges at twice the rate of the
//! normalization component.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::farey_matrix::{build_truncation, check_q, diag_unchecked, Sign, TruncatedMatrix};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 200_000;
pub const MIN_TOL: f64 = 1e-15;
pub const MAX_TOL: f64 = 1e-6;

/// Slack on the `φ_k ≤ 1/2` (plus) and `φ_k ≤ 1` (minus) hypotheses. The
/// bound is attained exactly at `k = 1`, so rounding has to be forgiven there.
pub const HYPOTHESIS_SLACK: f64 = 1e-12;

/// Number of leading eigenvector components tracked by truncation sweeps.
pub const TRACKED_COMPONENTS: usize = 10;

pub const LAMBDA_MONOTONE_TOL: f64 = 1e-13;
pub const COMPONENT_MONOTONE_TOL: f64 = 1e-12;

/// `(√5 - 1) / 2`
pub const GOLDEN_GAMMA: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub q: f64,
    pub sign: Sign,
    pub size: usize,
    pub lambda: f64,
    pub phi: Vec<f64>,
    /// Index fixed to 1: 0 for plus, 1 for minus.
    pub normalization_index: usize,
    pub iterations: usize,
    pub converged: bool,
    /// The 1×1 minus truncation is the zero matrix; its pair is `λ = 0`,
    /// `φ = (0)`, and carries this flag.
    pub degenerate: bool,
    /// `‖A φ - λ φ‖∞ / (λ ‖φ‖∞)`.
    pub residual: f64,
    /// Aitken Δ² extrapolation of the last three eigenvalue estimates.
    /// Diagnostic only; `lambda` is never replaced by it.
    pub aitken_lambda: Option<f64>,
}

impl EigenPair {
    /// `φ_k ≤ 1/2` for all `k ≥ 1` (plus) or `φ_k ≤ 1` (minus), the
    /// hypotheses under which the upper bounds `1 + 2^{-2q}` and `1` apply.
    pub fn bound_hypothesis_holds(&self) -> bool {
        let cap = match self.sign {
            Sign::Plus => 0.5,
            Sign::Minus => 1.0,
        };
        self.phi
            .iter()
            .skip(1)
            .all(|&p| p <= cap + HYPOTHESIS_SLACK)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if (MIN_TOL..=MAX_TOL).contains(&tol) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "tolerance {tol:e} outside [{MIN_TOL:e}, {MAX_TOL:e}]"
        )))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Perron pair of a truncation by power iteration from the all-ones vector.
///
/// Stops when the eigenvalue estimate changes by less than `tol` relatively
/// and the extrapolated distance of the iterate from its limit is below
/// `tol`. Hitting `max_iter` first yields `converged = false` with the last
/// iterate.
pub fn dominant_eigenpair(
    matrix: &TruncatedMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<EigenPair> {
    check_tol(tol)?;
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let (q, sign, size) = (matrix.q(), matrix.sign(), matrix.size());
    let start = sign.first_active_index();
    if size <= start {
        return Ok(EigenPair {
            q,
            sign,
            size,
            lambda: 0.0,
            phi: vec![0.0; size],
            normalization_index: start,
            iterations: 0,
            converged: true,
            degenerate: true,
            residual: 0.0,
            aitken_lambda: None,
        });
    }

    let active = size - start;
    let weights: Vec<f64> = (start..size).map(|k| diag_unchecked(q, k)).collect();
    let apply = |v: &[f64], out: &mut [f64]| {
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &matrix.row(start + i)[start..];
            *slot = row.iter().zip(v).map(|(a, x)| a * x).sum();
        }
    };
    let rayleigh = |v: &[f64], av: &[f64]| -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((w, x), y) in weights.iter().zip(v).zip(av) {
            num += w * x * y;
            den += w * x * x;
        }
        num / den
    };

    let mut v = vec![1.0; active];
    let mut av = vec![0.0; active];
    let mut history: Vec<f64> = Vec::with_capacity(3);
    let mut prev_delta = f64::NAN;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        apply(&v, &mut av);
        let estimate = rayleigh(&v, &av);
        let pivot = av[0];
        let mut delta: f64 = 0.0;
        for (x, y) in v.iter_mut().zip(&av) {
            let next = y / pivot;
            delta = delta.max((next - *x).abs());
            *x = next;
        }
        delta /= max_abs(&v);

        let lambda_change = history
            .last()
            .map(|&p| ((estimate - p) / estimate).abs())
            .unwrap_or(f64::INFINITY);
        if history.len() == 3 {
            history.remove(0);
        }
        history.push(estimate);

        let ratio = (delta / prev_delta).clamp(0.0, 1.0 - 1e-6);
        let remaining = if delta <= 16.0 * f64::EPSILON || !ratio.is_finite() {
            delta
        } else {
            delta * ratio / (1.0 - ratio)
        };
        prev_delta = delta;
        if lambda_change < tol && delta.max(remaining) <= tol {
            converged = true;
            break;
        }
    }

    apply(&v, &mut av);
    let lambda = rayleigh(&v, &av);
    let residual = av
        .iter()
        .zip(&v)
        .fold(0.0f64, |m, (y, x)| m.max((y - lambda * x).abs()))
        / (lambda * max_abs(&v));

    let aitken_lambda = match history.as_slice() {
        [a0, a1, a2] => {
            let denom = a2 - 2.0 * a1 + a0;
            (denom != 0.0).then(|| a2 - (a2 - a1) * (a2 - a1) / denom)
        }
        _ => None,
    };

    let mut phi = vec![0.0; size];
    phi[start..].copy_from_slice(&v);
    phi[start] = 1.0;
    Ok(EigenPair {
        q,
        sign,
        size,
        lambda,
        phi,
        normalization_index: start,
        iterations,
        converged,
        degenerate: false,
        residual,
        aitken_lambda,
    })
}

/// `1 + 2^{-2q}` for plus, `1` for minus.
pub fn comparison_bound(sign: Sign, q: f64) -> f64 {
    match sign {
        Sign::Plus => 1.0 + (-2.0 * q).exp2(),
        Sign::Minus => 1.0,
    }
}

/// `1 + γ^{2q}`, the upper end of the set containing the point spectrum.
pub fn spectral_bound(q: f64) -> f64 {
    1.0 + GOLDEN_GAMMA.powf(2.0 * q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Q,
    Size,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub parameter: f64,
    pub lambda: f64,
    /// [`comparison_bound`] at this record's `q`.
    pub bound: f64,
    /// [`spectral_bound`] at this record's `q`.
    pub spectral_bound: f64,
    pub converged: bool,
    pub iterations: usize,
    pub hypothesis_holds: bool,
}

impl SweepRecord {
    fn from_pair(parameter: f64, pair: &EigenPair) -> SweepRecord {
        SweepRecord {
            parameter,
            lambda: pair.lambda,
            bound: comparison_bound(pair.sign, pair.q),
            spectral_bound: spectral_bound(pair.q),
            converged: pair.converged,
            iterations: pair.iterations,
            hypothesis_holds: pair.bound_hypothesis_holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub kind: SweepParameter,
    pub sign: Sign,
    /// Fixed `q` for size sweeps, fixed `N` for q sweeps.
    pub fixed: f64,
    pub records: Vec<SweepRecord>,
}

impl SweepCurve {
    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }

    pub fn parameters_increasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[0].parameter < w[1].parameter)
    }

    /// `λ_i ≤ λ_{i+1} + slack` along the curve.
    pub fn lambda_nondecreasing(&self, slack: f64) -> bool {
        self.records
            .windows(2)
            .all(|w| w[0].lambda <= w[1].lambda + slack)
    }
}

fn check_increasing(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} is empty")));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be strictly increasing"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSweep {
    pub curve: SweepCurve,
    /// Leading components of each eigenvector, one row per size.
    pub heads: Vec<Vec<f64>>,
    pub lambda_monotone: bool,
    /// Per tracked index `k`, whether `φ^N_k` is non-decreasing in `N`.
    pub component_monotone: Vec<bool>,
}

impl TruncationSweep {
    pub fn all_monotone(&self) -> bool {
        self.lambda_monotone && self.component_monotone.iter().all(|&b| b)
    }
}

pub fn truncation_sweep(q: f64, sign: Sign, sizes: &[usize], tol: f64) -> Result<TruncationSweep> {
    truncation_sweep_with(q, sign, sizes, tol, Execution::default())
}

pub fn truncation_sweep_with(
    q: f64,
    sign: Sign,
    sizes: &[usize],
    tol: f64,
    exec: Execution,
) -> Result<TruncationSweep> {
    check_q("truncation_sweep", q)?;
    check_tol(tol)?;
    let as_f64: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    check_increasing(&as_f64, "size list")?;
    let largest = build_truncation(q, sign, *sizes.last().unwrap())?;
    let pairs = map_ordered(exec, sizes, |&n| {
        largest
            .corner(n)
            .and_then(|m| dominant_eigenpair(&m, tol, DEFAULT_MAX_ITER))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let records = pairs
        .iter()
        .map(|p| SweepRecord::from_pair(p.size as f64, p))
        .collect();
    let curve = SweepCurve {
        kind: SweepParameter::Size,
        sign,
        fixed: q,
        records,
    };
    let heads: Vec<Vec<f64>> = pairs
        .iter()
        .map(|p| p.phi.iter().take(TRACKED_COMPONENTS).copied().collect())
        .collect();
    let component_monotone = (0..TRACKED_COMPONENTS)
        .map(|k| {
            heads.windows(2).all(|w| match (w[0].get(k), w[1].get(k)) {
                (Some(a), Some(b)) => *a <= *b + COMPONENT_MONOTONE_TOL,
                _ => true,
            })
        })
        .collect();
    Ok(TruncationSweep {
        lambda_monotone: curve.lambda_nondecreasing(LAMBDA_MONOTONE_TOL),
        curve,
        heads,
        component_monotone,
    })
}

pub fn q_sweep(q_grid: &[f64], sign: Sign, size: usize, tol: f64) -> Result<SweepCurve> {
    q_sweep_with(q_grid, sign, size, tol, Execution::default())
}

pub fn q_sweep_with(
    q_grid: &[f64],
    sign: Sign,
    size: usize,
    tol: f64,
    exec: Execution,
) -> Result<SweepCurve> {
    check_tol(tol)?;
    check_increasing(q_grid, "q grid")?;
    for &q in q_grid {
        check_q("q_sweep", q)?;
    }
    let records = map_ordered(exec, q_grid, |&q| {
        let m = build_truncation_seq(q, sign, size)?;
        let pair = dominant_eigenpair(&m, tol, DEFAULT_MAX_ITER)?;
        Ok(SweepRecord::from_pair(q, &pair))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve {
        kind: SweepParameter::Q,
        sign,
        fixed: size as f64,
        records,
    })
}

// Grid points already run in parallel; nested row parallelism only adds
// scheduling overhead at these sizes.
fn build_truncation_seq(q: f64, sign: Sign, size: usize) -> Result<TruncatedMatrix> {
    crate::farey_matrix::build_truncation_with(q, sign, size, Execution::Sequential)
}

/// Evenly spaced grid `min, min + step, ...` up to `max` (inclusive within
/// a 1e-9 step fraction). Points are `min + i * step`, not accumulated.
pub fn q_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(min < max) || !(min > 0.0) || !max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "q grid needs 0 < min < max and step > 0 (got {min}, {max}, {step})"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| min + i as f64 * step).collect())
}

/// `S_N(k) = Σ_{n ≤ k} φ_n² Γ(n+2q)/n!` for `k = 0..N`.
pub fn norm_partial_sums(pair: &EigenPair) -> Result<Vec<f64>> {
    if !pair.converged {
        return Err(Error::InvalidArgument(
            "norm partial sums need a converged eigenpair".into(),
        ));
    }
    let mut acc = 0.0;
    Ok(pair
        .phi
        .iter()
        .enumerate()
        .map(|(n, p)| {
            acc += p * p * diag_unchecked(pair.q, n);
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(q: f64, sign: Sign, n: usize) -> EigenPair {
        let m = build_truncation(q, sign, n).unwrap();
        dominant_eigenpair(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
    }

    #[test]
    fn one_by_one_plus() {
        let p = solve(0.5, Sign::Plus, 1);
        assert!((p.lambda - 1.0).abs() < 1e-15);
        assert_eq!(p.phi, vec![1.0]);
        assert!(p.converged);
    }

    #[test]
    fn rank_one_plus() {
        let p = solve(0.5, Sign::Plus, 2);
        assert!((p.lambda - 1.25).abs() < 1e-12);
        assert!((p.phi[0] - 1.0).abs() < 1e-15);
        assert!((p.phi[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn minus_two_by_two() {
        let p = solve(0.5, Sign::Minus, 2);
        assert!((p.lambda - 0.25).abs() < 1e-12);
        assert_eq!(p.phi, vec![0.0, 1.0]);
        assert_eq!(p.normalization_index, 1);
    }

    #[test]
    fn minus_one_by_one_is_degenerate() {
        let p = solve(0.5, Sign::Minus, 1);
        assert!(p.degenerate);
        assert_eq!(p.lambda, 0.0);
    }

    #[test]
    fn reference_lambda_n50() {
        // 40-digit power iteration on the exact matrix.
        let p = solve(0.5, Sign::Plus, 50);
        assert!(p.converged);
        assert!((p.lambda - 1.365_111_948_097_746_3).abs() < 1e-12);
        assert!(p.residual <= 10.0 * DEFAULT_TOL);
    }

    #[test]
    fn eigenvector_positive() {
        for sign in [Sign::Plus, Sign::Minus] {
            let p = solve(0.7, sign, 40);
            let start = sign.first_active_index();
            assert!(p.phi[start..].iter().all(|&x| x > 0.0));
            assert!(p.bound_hypothesis_holds());
        }
    }

    #[test]
    fn non_convergence_is_flagged() {
        let m = build_truncation(0.95, Sign::Plus, 50).unwrap();
        let p = dominant_eigenpair(&m, 1e-15, 3).unwrap();
        assert!(!p.converged);
        assert_eq!(p.iterations, 3);
        assert!(p.lambda > 0.0);
    }

    #[test]
    fn argument_validation() {
        let m = build_truncation(0.5, Sign::Plus, 4).unwrap();
        assert!(dominant_eigenpair(&m, 1e-3, 10).is_err());
        assert!(dominant_eigenpair(&m, 1e-16, 10).is_err());
        assert!(dominant_eigenpair(&m, 1e-10, 0).is_err());
        assert!(q_sweep(&[0.5, 0.4], Sign::Plus, 5, 1e-12).is_err());
        assert!(truncation_sweep(0.5, Sign::Plus, &[3, 3], 1e-12).is_err());
        assert!(q_grid(1.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn small_truncation_sweep() {
        let s = truncation_sweep(0.5, Sign::Plus, &[1, 2], DEFAULT_TOL).unwrap();
        assert!((s.curve.records[0].lambda - 1.0).abs() < 1e-15);
        assert!((s.curve.records[1].lambda - 1.25).abs() < 1e-12);
        assert!(s.all_monotone());
    }

    #[test]
    fn grid_is_index_based() {
        let g = q_grid(0.05, 1.5, 0.01).unwrap();
        assert_eq!(g.len(), 146);
        assert!((g[145] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn partial_sums() {
        let p = solve(0.5, Sign::Plus, 2);
        let s = norm_partial_sums(&p).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!((s[1] - 1.25).abs() < 1e-12);
        let p = solve(0.8, Sign::Minus, 2);
        assert_eq!(norm_partial_sums(&p).unwrap()[0], 0.0);
    }

    #[test]
    fn execution_modes_agree() {
        let grid = q_grid(0.2, 0.6, 0.1).unwrap();
        let a = q_sweep_with(&grid, Sign::Plus, 20, DEFAULT_TOL, Execution::Parallel).unwrap();
        let b = q_sweep_with(&grid, Sign::Plus, 20, DEFAULT_TOL, Execution::Sequential).unwrap();
        assert_eq!(a, b);
    }
}
