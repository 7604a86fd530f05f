//! Aggregated verification suite for `farey-spectrum verify`.

use serde::Serialize;

use farey_spectrum::eigensolver::{dominant_eigenpair, DEFAULT_MAX_ITER, DEFAULT_TOL};
use farey_spectrum::farey_matrix::{build_truncation, check_identities, diag_d, entry_c, Sign};
use farey_spectrum::kernel_verify::{
    inner_product, matrix_element_by_quadrature, verify_intertwining, SampledFunction,
};
use farey_spectrum::specfun::gauss_laguerre;
use farey_spectrum::Result;

use crate::commands::json;
use crate::{Format, Options, Outcome, EXIT_VERIFICATION};

const IDENTITY_QS: [f64; 4] = [0.3, 0.5, 1.0, 1.5];
const IDENTITY_SIZE: usize = 64;
const KERNEL_QS: [f64; 2] = [0.5, 1.0];
const INTERTWINING_ORDER: usize = 60;
const INTERTWINING_TOL: f64 = 1e-6;
const MOMENT_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-9;
const MATRIX_ELEMENT_TOL: f64 = 1e-6;
const HAND_ORACLE_TOL: f64 = 1e-12;

#[derive(Debug, Serialize)]
struct SuiteResult {
    suite: String,
    passed: bool,
    max_violation: f64,
    tolerance: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    passed: bool,
    suites: Vec<SuiteResult>,
}

fn suite(name: impl Into<String>, violation: f64, tolerance: f64) -> SuiteResult {
    SuiteResult {
        suite: name.into(),
        passed: violation <= tolerance,
        max_violation: violation,
        tolerance,
    }
}

fn identities(out: &mut Vec<SuiteResult>) -> Result<()> {
    for q in IDENTITY_QS {
        let report = check_identities(q, IDENTITY_SIZE)?;
        for c in report.checks {
            out.push(SuiteResult {
                suite: format!("identity/{}/q={q}", c.name),
                passed: c.passed,
                max_violation: c.max_violation,
                tolerance: c.tolerance,
            });
        }
    }
    Ok(())
}

fn intertwining(out: &mut Vec<SuiteResult>) -> Result<()> {
    for q in KERNEL_QS {
        let rule = gauss_laguerre(INTERTWINING_ORDER, 2.0 * q - 1.0)?;
        let report = verify_intertwining(q, 3, &[0.5, 1.0, 2.0], &rule)?;
        out.push(suite(
            format!("intertwining/q={q}"),
            report.max_residual(),
            INTERTWINING_TOL,
        ));
    }
    Ok(())
}

fn quadrature(out: &mut Vec<SuiteResult>) -> Result<()> {
    for m in [4, 16, 64] {
        for alpha in [0.0, 0.5, 1.0] {
            let rule = gauss_laguerre(m, alpha)?;
            out.push(suite(
                format!("quadrature_moments/M={m}/alpha={alpha}"),
                rule.moment_error(),
                MOMENT_TOL,
            ));
        }
    }
    for q in IDENTITY_QS {
        let rule = gauss_laguerre(16, 2.0 * q - 1.0)?;
        let mut worst: f64 = 0.0;
        for n in 0..=6 {
            for m in 0..=6 {
                let ip = inner_product(
                    &SampledFunction::laguerre(n, q),
                    &SampledFunction::laguerre(m, q),
                    &rule,
                );
                let norm = diag_d(q, n)?;
                let expected = if n == m { norm } else { 0.0 };
                worst = worst.max((ip - expected).abs() / norm);
            }
        }
        out.push(suite(
            format!("orthogonality/q={q}"),
            worst,
            ORTHOGONALITY_TOL,
        ));
    }
    Ok(())
}

fn matrix_elements(out: &mut Vec<SuiteResult>) -> Result<()> {
    for q in KERNEL_QS {
        let rule = gauss_laguerre(40, 2.0 * q - 1.0)?;
        for sign in [Sign::Plus, Sign::Minus] {
            let mut worst: f64 = 0.0;
            for n in 0..=4 {
                for k in 0..=4 {
                    let (quad, _) = matrix_element_by_quadrature(q, sign, n, k, &rule)?;
                    let exact = entry_c(q, sign, n, k)?;
                    let scale = exact.abs().max((diag_d(q, n)? * diag_d(q, k)?).sqrt());
                    worst = worst.max((quad - exact).abs() / scale);
                }
            }
            out.push(suite(
                format!("matrix_elements/{sign}/q={q}"),
                worst,
                MATRIX_ELEMENT_TOL,
            ));
        }
    }
    Ok(())
}

fn hand_oracles(out: &mut Vec<SuiteResult>) -> Result<()> {
    let cases = [
        (Sign::Plus, 1, 1.0, vec![1.0]),
        (Sign::Plus, 2, 1.25, vec![1.0, 0.5]),
        (Sign::Minus, 2, 0.25, vec![0.0, 1.0]),
    ];
    for (sign, size, lambda, phi) in cases {
        let m = build_truncation(0.5, sign, size)?;
        let pair = dominant_eigenpair(&m, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let violation = pair
            .phi
            .iter()
            .zip(&phi)
            .map(|(a, b)| (a - b).abs())
            .fold((pair.lambda - lambda).abs(), f64::max);
        out.push(suite(
            format!("eigenpair/{sign}/N={size}"),
            violation,
            HAND_ORACLE_TOL,
        ));
    }
    Ok(())
}

pub fn run(opts: &Options) -> Result<Outcome> {
    let mut suites = Vec::new();
    hand_oracles(&mut suites)?;
    identities(&mut suites)?;
    quadrature(&mut suites)?;
    intertwining(&mut suites)?;
    matrix_elements(&mut suites)?;
    let passed = suites.iter().all(|s| s.passed);
    let report = Report { passed, suites };
    let body = match opts.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut s = format!(
                "# {}\nsuite,passed,max_violation,tolerance\n",
                farey_spectrum::export::TOOL_VERSION
            );
            for r in &report.suites {
                s.push_str(&format!(
                    "{},{},{:.16e},{:.16e}\n",
                    r.suite, r.passed, r.max_violation, r.tolerance
                ));
            }
            s
        }
    };
    Ok(Outcome {
        body,
        status: if passed { 0 } else { EXIT_VERIFICATION },
    })
}
