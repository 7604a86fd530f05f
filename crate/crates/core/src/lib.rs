//! Leading eigenvalues of the signed generalized transfer operators of the
//! Farey map, computed from north-west truncations of their matrix in a
//! generalized Laguerre basis.
//!
//! * [`specfun`]: log-gamma, Laguerre polynomials, Bessel series,
//!   Gauss–Laguerre rules.
//! * [`farey_matrix`]: entries of `A±`, `C±` and `D`, truncations, minors and
//!   structural identity checks.
//! * [`eigensolver`]: Perron pairs of truncations, sweeps over `N` and `q`,
//!   weighted-norm partial sums.
//! * [`kernel_verify`]: quadrature versions of the multiplication and
//!   Bessel-kernel operators for cross-checks.
//! * [`transfer_map`]: the Farey map, pointwise transfer operators and
//!   eigenfunction residuals.
//!
//! Sweeps and matrix construction run on rayon when the `parallel` feature is
//! enabled (the default); see [`Execution`].

pub mod eigensolver;
pub mod error;
pub mod exec;
pub mod export;
pub mod farey_matrix;
pub mod kernel_verify;
pub mod specfun;
pub mod transfer_map;

pub use eigensolver::{
    dominant_eigenpair, norm_partial_sums, q_grid, q_sweep, truncation_sweep, EigenPair,
    SweepCurve, SweepRecord, TruncationSweep,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use farey_matrix::{build_truncation, Sign, TruncatedMatrix};
