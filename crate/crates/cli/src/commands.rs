use serde::Serialize;

use farey_spectrum::eigensolver::{
    dominant_eigenpair, norm_partial_sums, q_grid, q_sweep as run_q_sweep, truncation_sweep,
};
use farey_spectrum::export;
use farey_spectrum::farey_matrix::build_truncation;
use farey_spectrum::transfer_map::{default_x_grid, eigen_residual};
use farey_spectrum::{EigenPair, Result, Sign};

use crate::{Format, Options, Outcome, EXIT_NO_CONVERGENCE, EXIT_VERIFICATION};

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn ok(body: String) -> Outcome {
    Outcome { body, status: 0 }
}

fn status_for(converged: bool) -> u8 {
    if converged {
        0
    } else {
        EXIT_NO_CONVERGENCE
    }
}

fn solve(opts: &Options, size: usize) -> Result<EigenPair> {
    let m = build_truncation(opts.q, opts.sign, size)?;
    dominant_eigenpair(&m, opts.tol, opts.max_iter)
}

pub fn entries(opts: &Options) -> Result<Outcome> {
    let m = build_truncation(opts.q, opts.sign, opts.size)?;
    Ok(ok(match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => export::matrix_csv(&m),
        Format::Json => json(&m)?,
    }))
}

pub fn eigen(opts: &Options) -> Result<Outcome> {
    let pair = solve(opts, opts.size)?;
    let body = match opts.format.unwrap_or(Format::Json) {
        Format::Json => json(&pair)?,
        Format::Csv => {
            let mut s = format!(
                "# {}\n# q={}\n# sign={}\n# N={}\n# lambda={}\n# converged={}\nk,phi\n",
                export::TOOL_VERSION,
                export::fmt_f64(pair.q),
                pair.sign,
                pair.size,
                export::fmt_f64(pair.lambda),
                pair.converged
            );
            for (k, v) in pair.phi.iter().enumerate() {
                s.push_str(&format!("{k},{}\n", export::fmt_f64(*v)));
            }
            s
        }
    };
    Ok(Outcome {
        body,
        status: status_for(pair.converged || pair.degenerate),
    })
}

fn sizes(opts: &Options) -> Vec<usize> {
    match &opts.sizes {
        Some(list) => list.clone(),
        None => {
            let first = opts.sign.first_active_index() + 1;
            (first..=opts.size.max(first)).collect()
        }
    }
}

pub fn trunc_sweep(opts: &Options) -> Result<Outcome> {
    let sweep = truncation_sweep(opts.q, opts.sign, &sizes(opts), opts.tol)?;
    let body = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => export::sweep_csv(&sweep.curve),
        Format::Json => json(&sweep)?,
    };
    let status = if !sweep.curve.all_converged() {
        EXIT_NO_CONVERGENCE
    } else if !sweep.all_monotone() {
        EXIT_VERIFICATION
    } else {
        0
    };
    Ok(Outcome { body, status })
}

pub fn q_sweep(opts: &Options) -> Result<Outcome> {
    let grid = q_grid(opts.q_min, opts.q_max, opts.q_step)?;
    let curve = run_q_sweep(&grid, opts.sign, opts.size, opts.tol)?;
    let body = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => export::sweep_csv(&curve),
        Format::Json => json(&curve)?,
    };
    Ok(Outcome {
        body,
        status: status_for(curve.all_converged()),
    })
}

#[derive(Serialize)]
struct NormCurve {
    size: usize,
    converged: bool,
    partial_sums: Vec<f64>,
}

#[derive(Serialize)]
struct NormReport {
    q: f64,
    sign: Sign,
    curves: Vec<NormCurve>,
}

pub fn norms(opts: &Options) -> Result<Outcome> {
    let sizes = opts.sizes.clone().unwrap_or_else(|| vec![opts.size]);
    let mut curves = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let pair = solve(opts, n)?;
        // Unconverged pairs still get their partial sums, flagged.
        let flagged = EigenPair {
            converged: true,
            ..pair.clone()
        };
        curves.push(NormCurve {
            size: n,
            converged: pair.converged,
            partial_sums: norm_partial_sums(&flagged)?,
        });
    }
    let all_converged = curves.iter().all(|c| c.converged);
    let body = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<(usize, Vec<f64>)> = curves
                .iter()
                .map(|c| (c.size, c.partial_sums.clone()))
                .collect();
            export::norms_csv(opts.q, opts.sign.as_str(), &rows)
        }
        Format::Json => json(&NormReport {
            q: opts.q,
            sign: opts.sign,
            curves,
        })?,
    };
    Ok(Outcome {
        body,
        status: status_for(all_converged),
    })
}

pub fn residual(opts: &Options) -> Result<Outcome> {
    let pair = solve(opts, opts.size)?;
    let flagged = EigenPair {
        converged: true,
        ..pair.clone()
    };
    let table = eigen_residual(&flagged, &default_x_grid())?;
    let body = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => export::residual_csv(&table, opts.size),
        Format::Json => json(&table)?,
    };
    Ok(Outcome {
        body,
        status: status_for(pair.converged),
    })
}
