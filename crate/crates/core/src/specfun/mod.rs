//! Special-function primitives.

mod bessel;
pub(crate) mod ddouble;
mod gamma;
mod laguerre;
mod quadrature;

pub use bessel::{bessel_j, bessel_series, SeriesValue, ACCURACY_LOSS_RATIO, SERIES_CUTOFF};
pub use gamma::{ln_factorial, log_gamma};
pub use laguerre::{laguerre_eval, monomial_eval};
pub use quadrature::{gauss_laguerre, QuadratureRule, MAX_ORDER};

pub(crate) use gamma::ln_gamma_positive;
pub(crate) use laguerre::laguerre_alpha;
