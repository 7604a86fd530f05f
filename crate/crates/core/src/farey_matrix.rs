//! Matrix representation of the signed transfer operators in the
//! generalized Laguerre basis.
//!
//! With `D = diag(Γ(n+2q)/n!)` and the symmetric Gram-type matrix
//! `C± = ((P± e_n, e_k))`, the eigenproblem becomes `A± Φ = λ Φ` with
//! `A± = D⁻¹ C±`:
//!
//! ```text
//! α±_kn = k! Γ(n+2q) / 2^(n+k+2q) · Σ_{m ≤ min(n,k)} (1 ± (-1)^m) / (Γ(m+2q) m! (n-m)! (k-m)!)
//! ```
//!
//! Only even `m` survive for [`Sign::Plus`] and only odd `m` for
//! [`Sign::Minus`], so every surviving term is positive.
//!
//! `α` is evaluated from its `m = 0` term `2^(1-2q-k) · Γ(n+2q) / (Γ(2q) n! 2^n)`
//! and the term ratio `(n-m)(k-m) / ((m+2q)(m+1))`, all in linear space. The
//! power `2^-k` is applied exactly, which makes `α⁺_0n = 2 α⁺_1n` hold to the
//! last bit. `c` is evaluated independently, one exponentiated log-sum per
//! term, so the `A = D⁻¹ C` identity compares two different numerical routes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exec::{fill_chunks, Execution};
use crate::specfun::ddouble::DoubleDouble;
use crate::specfun::{ln_factorial, ln_gamma_positive};

/// Largest supported row/column index.
pub const MAX_INDEX: usize = 400;

/// Number of terms used for the partial row-sum identities.
pub const ROW_SUM_TERMS: usize = 200;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Whether the summation index `m` contributes (`1 ± (-1)^m != 0`).
    #[inline]
    pub fn survives(self, m: usize) -> bool {
        match self {
            Sign::Plus => m.is_multiple_of(2),
            Sign::Minus => m % 2 == 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }

    /// `+1.0` or `-1.0`.
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// First index of the block on which `A±` is a positive matrix.
    pub fn first_active_index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!(
                "unknown sign '{other}', expected plus or minus"
            ))),
        }
    }
}

pub(crate) fn check_q(function: &'static str, q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(domain(function, q, "q > 0"))
    }
}

fn check_index(i: usize) -> Result<()> {
    if i > MAX_INDEX {
        Err(Error::IndexOutOfRange {
            index: i,
            max: MAX_INDEX,
        })
    } else {
        Ok(())
    }
}

/// `Γ(n+2q) / (Γ(2q) n! 2^n)` for `n = 0..len`, as a running product.
fn scaled_binomials(q: f64, len: usize) -> Vec<f64> {
    let two_q = 2.0 * q;
    let mut out = Vec::with_capacity(len);
    let mut acc = 1.0;
    for j in 0..len {
        if j > 0 {
            acc *= (j as f64 - 1.0 + two_q) / (2.0 * j as f64);
        }
        out.push(acc);
    }
    out
}

/// Core of `α±_kn` given the precomputed scaled binomial for column `n`.
fn alpha_from_binomial(q: f64, sign: Sign, k: usize, n: usize, binom_n: f64) -> f64 {
    let two_q = 2.0 * q;
    let mut term = 2.0 * (-two_q).exp2() * binom_n * 2f64.powi(-(k as i32));
    let mut sum = if sign.survives(0) { term } else { 0.0 };
    for m in 0..n.min(k) {
        let num = ((n - m) * (k - m)) as f64;
        let den = (m as f64 + two_q) * (m + 1) as f64;
        term *= num / den;
        if sign.survives(m + 1) {
            sum += term;
        }
    }
    sum
}

/// `α±_kn`: row `k`, column `n` of the non-symmetric matrix `A±`.
pub fn entry_alpha(q: f64, sign: Sign, k: usize, n: usize) -> Result<f64> {
    check_q("entry_alpha", q)?;
    check_index(k)?;
    check_index(n)?;
    let binom = scaled_binomials(q, n + 1)[n];
    Ok(alpha_from_binomial(q, sign, k, n, binom))
}

/// `c±_nk = (P± e_n, e_k)`, evaluated term by term in log space.
pub fn entry_c(q: f64, sign: Sign, n: usize, k: usize) -> Result<f64> {
    check_q("entry_c", q)?;
    check_index(k)?;
    check_index(n)?;
    Ok(c_unchecked(q, sign, n, k))
}

fn c_unchecked(q: f64, sign: Sign, n: usize, k: usize) -> f64 {
    let two_q = 2.0 * q;
    let outer = (ln_gamma_positive(n as f64 + two_q) + ln_gamma_positive(k as f64 + two_q))
        - ((n + k) as f64 + two_q) * LN_2
        + LN_2;
    (0..=n.min(k))
        .filter(|&m| sign.survives(m))
        .map(|m| {
            let inner = ln_gamma_positive(m as f64 + two_q)
                + ln_factorial(m)
                + (ln_factorial(n - m) + ln_factorial(k - m));
            (outer - inner).exp()
        })
        .sum()
}

/// `Γ(n+2q) / n!`, the squared norm of `e_n` in `L²(m_q)`.
pub fn diag_d(q: f64, n: usize) -> Result<f64> {
    check_q("diag_d", q)?;
    Ok(diag_unchecked(q, n))
}

pub(crate) fn diag_unchecked(q: f64, n: usize) -> f64 {
    (ln_gamma_positive(n as f64 + 2.0 * q) - ln_factorial(n)).exp()
}

/// North-west `N × N` corner of `A±`, dense, row-major (row `k`, column `n`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedMatrix {
    q: f64,
    sign: Sign,
    size: usize,
    entries: Vec<f64>,
}

impl TruncatedMatrix {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, k: usize, n: usize) -> f64 {
        self.entries[k * self.size + n]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.size..(k + 1) * self.size]
    }

    /// The leading `size × size` block, itself a valid truncation.
    pub fn corner(&self, size: usize) -> Result<TruncatedMatrix> {
        if size == 0 || size > self.size {
            return Err(Error::InvalidArgument(format!(
                "corner size {size} outside 1..={}",
                self.size
            )));
        }
        let mut entries = Vec::with_capacity(size * size);
        for k in 0..size {
            entries.extend_from_slice(&self.row(k)[..size]);
        }
        Ok(TruncatedMatrix {
            q: self.q,
            sign: self.sign,
            size,
            entries,
        })
    }
}

pub fn build_truncation(q: f64, sign: Sign, size: usize) -> Result<TruncatedMatrix> {
    build_truncation_with(q, sign, size, Execution::default())
}

/// As [`build_truncation`], filling rows with the given execution mode.
pub fn build_truncation_with(
    q: f64,
    sign: Sign,
    size: usize,
    exec: Execution,
) -> Result<TruncatedMatrix> {
    check_q("build_truncation", q)?;
    if size == 0 || size > MAX_INDEX {
        return Err(Error::InvalidArgument(format!(
            "truncation size {size} outside 1..={MAX_INDEX}"
        )));
    }
    let binom = scaled_binomials(q, size);
    let mut entries = vec![0.0; size * size];
    fill_chunks(exec, &mut entries, size, |k, row| {
        for (n, slot) in row.iter_mut().enumerate() {
            *slot = alpha_from_binomial(q, sign, k, n, binom[n]);
        }
    });
    Ok(TruncatedMatrix {
        q,
        sign,
        size,
        entries,
    })
}

/// A 2×2 determinant together with the magnitude of its two products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minor {
    pub determinant: f64,
    pub scale: f64,
}

impl Minor {
    fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Minor {
        // a d - b c with both products exact
        let ad = DoubleDouble::product_of(a, d);
        let bc = DoubleDouble::product_of(b, c);
        Minor {
            determinant: (ad - bc).to_f64(),
            scale: ad.hi.abs().max(bc.hi.abs()),
        }
    }

    /// Determinant relative to the product scale; zero when both vanish.
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.determinant / self.scale
        }
    }
}

/// `α_{k,n} α_{k+1,n+1} - α_{k+1,n} α_{k,n+1}`.
pub fn adjacent_minor(q: f64, sign: Sign, k: usize, n: usize) -> Result<Minor> {
    minor(q, sign, (k, k + 1), (n, n + 1))
}

/// Second-order minor on rows `k0 < k1` and columns `n0 < n1`.
pub fn minor(q: f64, sign: Sign, rows: (usize, usize), cols: (usize, usize)) -> Result<Minor> {
    if rows.0 >= rows.1 || cols.0 >= cols.1 {
        return Err(Error::InvalidArgument(
            "minor needs strictly increasing row and column pairs".into(),
        ));
    }
    let a = entry_alpha(q, sign, rows.0, cols.0)?;
    let b = entry_alpha(q, sign, rows.0, cols.1)?;
    let c = entry_alpha(q, sign, rows.1, cols.0)?;
    let d = entry_alpha(q, sign, rows.1, cols.1)?;
    Ok(Minor::from_entries(a, b, c, d))
}

pub(crate) fn matrix_minor(m: &TruncatedMatrix, k: usize, n: usize) -> Minor {
    Minor::from_entries(
        m.get(k, n),
        m.get(k, n + 1),
        m.get(k + 1, n),
        m.get(k + 1, n + 1),
    )
}

/// `Σ_{n < terms} α⁺_0n`, which tends to 2.
pub fn plus_row_sum(q: f64, terms: usize) -> Result<f64> {
    check_q("plus_row_sum", q)?;
    check_index(terms.saturating_sub(1))?;
    let binom = scaled_binomials(q, terms);
    Ok((0..terms)
        .map(|n| alpha_from_binomial(q, Sign::Plus, 0, n, binom[n]))
        .sum())
}

/// `Σ_{1 ≤ n < terms} α⁻_1n`, which tends to 1.
pub fn minus_row_sum(q: f64, terms: usize) -> Result<f64> {
    check_q("minus_row_sum", q)?;
    check_index(terms.saturating_sub(1))?;
    let binom = scaled_binomials(q, terms);
    Ok((1..terms)
        .map(|n| alpha_from_binomial(q, Sign::Minus, 1, n, binom[n]))
        .sum())
}

/// Tolerances for [`check_identities`].
pub mod tolerance {
    pub const HALVING: f64 = 1e-14;
    pub const CONSISTENCY: f64 = 1e-12;
    pub const SYMMETRY: f64 = 1e-13;
    pub const ADJACENT_MINOR: f64 = 1e-14;
    pub const ROW_SUM: f64 = 1e-8;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// Largest observed violation, in the units the tolerance is stated in.
    pub max_violation: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    fn upper(name: &str, max_violation: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name: name.to_string(),
            passed: max_violation <= tolerance,
            max_violation,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub q: f64,
    pub size: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Structural identities of `A±` at `(q, N)`; failures are reported as data.
pub fn check_identities(q: f64, size: usize) -> Result<IdentityReport> {
    check_q("check_identities", q)?;
    if size < 2 {
        return Err(Error::InvalidArgument(format!(
            "identity checks need N >= 2, got {size}"
        )));
    }
    let plus = build_truncation(q, Sign::Plus, size)?;
    let minus = build_truncation(q, Sign::Minus, size)?;
    let d: Vec<f64> = (0..size).map(|k| diag_unchecked(q, k)).collect();
    let mut checks = Vec::new();

    let min_plus = plus.entries().iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(IdentityCheck {
        name: "positivity_plus".into(),
        passed: min_plus > 0.0,
        max_violation: if min_plus > 0.0 { 0.0 } else { -min_plus },
        tolerance: 0.0,
    });
    let min_minus = minus
        .entries()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    checks.push(IdentityCheck::upper(
        "nonnegativity_minus",
        (-min_minus).max(0.0),
        0.0,
    ));

    let halving = (0..size)
        .map(|n| rel_diff(plus.get(0, n), 2.0 * plus.get(1, n)))
        .fold(0.0, f64::max);
    checks.push(IdentityCheck::upper(
        "halving_plus",
        halving,
        tolerance::HALVING,
    ));

    let null = (0..size)
        .map(|i| minus.get(0, i).abs().max(minus.get(i, 0).abs()))
        .fold(0.0, f64::max);
    checks.push(IdentityCheck::upper("minus_null_row_column", null, 0.0));

    let mut consistency: f64 = 0.0;
    let mut symmetry: f64 = 0.0;
    for (sign, a) in [(Sign::Plus, &plus), (Sign::Minus, &minus)] {
        for (k, &dk) in d.iter().enumerate() {
            for n in 0..size {
                let c_nk = c_unchecked(q, sign, n, k);
                consistency = consistency.max(rel_diff(a.get(k, n) * dk, c_nk));
                if n < k {
                    symmetry = symmetry.max(rel_diff(c_nk, c_unchecked(q, sign, k, n)));
                }
            }
        }
    }
    checks.push(IdentityCheck::upper(
        "d_inverse_c_consistency",
        consistency,
        tolerance::CONSISTENCY,
    ));
    checks.push(IdentityCheck::upper(
        "c_symmetry",
        symmetry,
        tolerance::SYMMETRY,
    ));

    for (name, a) in [
        ("adjacent_minors_plus", &plus),
        ("adjacent_minors_minus", &minus),
    ] {
        let mut worst: f64 = 0.0;
        for k in 0..size - 1 {
            for n in 0..size - 1 {
                worst = worst.max(-matrix_minor(a, k, n).relative());
            }
        }
        checks.push(IdentityCheck::upper(name, worst, tolerance::ADJACENT_MINOR));
    }

    let sum_plus = plus_row_sum(q, ROW_SUM_TERMS)?;
    checks.push(IdentityCheck::upper(
        "row_sum_plus",
        (sum_plus - 2.0).abs(),
        tolerance::ROW_SUM,
    ));
    let sum_minus = minus_row_sum(q, ROW_SUM_TERMS)?;
    checks.push(IdentityCheck::upper(
        "row_sum_minus",
        (sum_minus - 1.0).abs(),
        tolerance::ROW_SUM,
    ));

    Ok(IdentityReport { q, size, checks })
}
