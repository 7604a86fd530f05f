//! Plain-text exports. CSV files start with `#` metadata lines, then a header
//! row; floats are written with 17 significant digits so binary64 values
//! round-trip exactly.

use std::fmt::Write as _;

use crate::eigensolver::{SweepCurve, SweepParameter, TruncationSweep};
use crate::farey_matrix::TruncatedMatrix;
use crate::transfer_map::ResidualTable;

pub const TOOL_VERSION: &str = concat!("farey-spectrum ", env!("CARGO_PKG_VERSION"));

/// 17 significant digits, scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn metadata(out: &mut String, pairs: &[(&str, String)]) {
    let _ = writeln!(out, "# {TOOL_VERSION}");
    for (k, v) in pairs {
        let _ = writeln!(out, "# {k}={v}");
    }
}

pub fn matrix_csv(m: &TruncatedMatrix) -> String {
    let mut out = String::new();
    metadata(
        &mut out,
        &[
            ("q", fmt_f64(m.q())),
            ("sign", m.sign().to_string()),
            ("N", m.size().to_string()),
        ],
    );
    out.push('k');
    for n in 0..m.size() {
        let _ = write!(out, ",{n}");
    }
    out.push('\n');
    for k in 0..m.size() {
        let _ = write!(out, "{k}");
        for &v in m.row(k) {
            let _ = write!(out, ",{}", fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

pub fn sweep_csv(curve: &SweepCurve) -> String {
    let mut out = String::new();
    let (fixed_name, fixed) = match curve.kind {
        SweepParameter::Q => ("N", format!("{}", curve.fixed as usize)),
        SweepParameter::Size => ("q", fmt_f64(curve.fixed)),
    };
    let kind = match curve.kind {
        SweepParameter::Q => "q",
        SweepParameter::Size => "N",
    };
    metadata(
        &mut out,
        &[
            ("parameter", kind.to_string()),
            ("sign", curve.sign.to_string()),
            (fixed_name, fixed),
        ],
    );
    out.push_str("parameter,lambda,bound,converged,iterations\n");
    for r in &curve.records {
        let parameter = match curve.kind {
            SweepParameter::Q => fmt_f64(r.parameter),
            SweepParameter::Size => format!("{}", r.parameter as usize),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            parameter,
            fmt_f64(r.lambda),
            fmt_f64(r.bound),
            r.converged,
            r.iterations
        );
    }
    out
}

/// Leading eigenvector components per size, one row per `N`.
pub fn heads_csv(sweep: &TruncationSweep) -> String {
    let mut out = String::new();
    metadata(
        &mut out,
        &[
            ("q", fmt_f64(sweep.curve.fixed)),
            ("sign", sweep.curve.sign.to_string()),
        ],
    );
    let width = sweep.heads.iter().map(Vec::len).max().unwrap_or(0);
    out.push('N');
    for k in 0..width {
        let _ = write!(out, ",phi_{k}");
    }
    out.push('\n');
    for (rec, head) in sweep.curve.records.iter().zip(&sweep.heads) {
        let _ = write!(out, "{}", rec.parameter as usize);
        for v in head {
            let _ = write!(out, ",{}", fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// `S_N(k)` curves, long format: one row per `(N, k)`.
pub fn norms_csv(q: f64, sign: &str, curves: &[(usize, Vec<f64>)]) -> String {
    let mut out = String::new();
    metadata(&mut out, &[("q", fmt_f64(q)), ("sign", sign.to_string())]);
    out.push_str("N,k,S\n");
    for (n, sums) in curves {
        for (k, s) in sums.iter().enumerate() {
            let _ = writeln!(out, "{n},{k},{}", fmt_f64(*s));
        }
    }
    out
}

pub fn residual_csv(table: &ResidualTable, size: usize) -> String {
    let mut out = String::new();
    metadata(
        &mut out,
        &[
            ("q", fmt_f64(table.q)),
            ("sign", table.sign.to_string()),
            ("N", size.to_string()),
            ("lambda", fmt_f64(table.lambda)),
        ],
    );
    out.push_str("x,f_value,transfer_value,relative_residual\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r.x),
            fmt_f64(r.f_value),
            fmt_f64(r.transfer_value),
            fmt_f64(r.relative_residual)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey_matrix::{build_truncation, Sign};

    #[test]
    fn seventeen_digits_roundtrip() {
        for v in [0.1, 1.0 / 3.0, 1.365_111_948_097_746_3, 3.29e-38, 0.0] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn matrix_layout() {
        let m = build_truncation(0.5, Sign::Plus, 2).unwrap();
        let csv = matrix_csv(&m);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# farey-spectrum"));
        assert_eq!(lines[2], "# sign=plus");
        assert_eq!(lines[3], "# N=2");
        assert_eq!(lines[4], "k,0,1");
        assert_eq!(lines[5], "0,1.0000000000000000e0,5.0000000000000000e-1");
        assert_eq!(lines.len(), 7);
    }
}
