use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use farey_spectrum::eigensolver::{
    dominant_eigenpair, norm_partial_sums, truncation_sweep, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use farey_spectrum::farey_matrix::{build_truncation, diag_d, minor, Sign};
use farey_spectrum::kernel_verify::{inner_product, SampledFunction};
use farey_spectrum::specfun::{bessel_j, gauss_laguerre, laguerre_eval};
use farey_spectrum::transfer_map::farey;

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Exact value and absolute term sum of `Σ_j (-1)^j C(n+α, n-j) t^j / j!`.
fn laguerre_exact(n: usize, alpha: f64, t: f64) -> (f64, f64) {
    let alpha = rational(alpha);
    let t = rational(t);
    let one = BigRational::from_integer(BigInt::from(1));
    let mut sum = BigRational::zero();
    let mut abs_sum = BigRational::zero();
    for j in 0..=n {
        let mut binom = one.clone();
        for i in 1..=(n - j) {
            let i = BigRational::from_integer(BigInt::from(i));
            binom = binom * (BigRational::from_integer(BigInt::from(j)) + &alpha + &i) / i;
        }
        let mut power = one.clone();
        for i in 1..=j {
            power = power * &t / BigRational::from_integer(BigInt::from(i));
        }
        let term = binom * power;
        abs_sum += term.abs();
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    (sum.to_f64().unwrap(), abs_sum.to_f64().unwrap())
}

fn q_choice() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.3, 0.5, 1.0, 1.5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laguerre_recurrence_matches_exact_sum(
        n in 0usize..=20,
        q in q_choice(),
        t in prop::sample::select(vec![0.1, 1.0, 10.0]),
    ) {
        let got = laguerre_eval(n, q, t).unwrap();
        let (exact, scale) = laguerre_exact(n, 2.0 * q - 1.0, t);
        prop_assert!((got - exact).abs() <= 1e-13 * scale.max(1.0), "{got} vs {exact}");
    }

    #[test]
    fn laguerre_basis_is_orthogonal(q in 0.05f64..2.0, n in 0usize..=6, m in 0usize..=6) {
        let rule = gauss_laguerre(16, 2.0 * q - 1.0).unwrap();
        let ip = inner_product(
            &SampledFunction::laguerre(n, q),
            &SampledFunction::laguerre(m, q),
            &rule,
        );
        let norm = diag_d(q, n).unwrap();
        if n == m {
            prop_assert!((ip - norm).abs() <= 1e-9 * norm);
        } else {
            prop_assert!(ip.abs() <= 1e-9 * norm, "({n},{m}) = {ip}");
        }
    }

    #[test]
    fn half_integer_bessel(x in 0.1f64..20.0) {
        let c = (2.0 / (std::f64::consts::PI * x)).sqrt();
        let j_half = c * x.sin();
        let j_three_halves = c * (x.sin() / x - x.cos());
        prop_assert!((bessel_j(0.5, x).unwrap().value - j_half).abs() < 1e-10);
        prop_assert!((bessel_j(1.5, x).unwrap().value - j_three_halves).abs() < 1e-10);
    }

    #[test]
    fn second_order_minors_nonnegative(
        q in 0.1f64..2.0,
        plus in any::<bool>(),
        k0 in 0usize..60, dk in 1usize..8,
        n0 in 0usize..60, dn in 1usize..8,
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let m = minor(q, sign, (k0, k0 + dk), (n0, n0 + dn)).unwrap();
        prop_assert!(m.relative() >= -1e-12, "relative minor {}", m.relative());
    }

    #[test]
    fn truncation_sweep_is_monotone(q in 0.05f64..1.5, plus in any::<bool>()) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let first = if plus { 1 } else { 2 };
        let sizes: Vec<usize> = (first..=30).collect();
        let sweep = truncation_sweep(q, sign, &sizes, DEFAULT_TOL).unwrap();
        prop_assert!(sweep.curve.all_converged());
        prop_assert!(sweep.lambda_monotone);
        prop_assert!(sweep.component_monotone.iter().all(|&b| b));
    }

    #[test]
    fn perron_vector_signs(q in 0.05f64..2.0, size in 2usize..40, plus in any::<bool>()) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let m = build_truncation(q, sign, size).unwrap();
        let p = dominant_eigenpair(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(p.converged && p.lambda > 0.0);
        prop_assert_eq!(p.phi[p.normalization_index], 1.0);
        if plus {
            prop_assert!(p.phi.iter().all(|&v| v > 0.0));
        } else {
            prop_assert_eq!(p.phi[0], 0.0);
            prop_assert!(p.phi[1..].iter().all(|&v| v > 0.0));
        }
        let sums = norm_partial_sums(&p).unwrap();
        prop_assert!(sums.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn farey_maps_unit_interval_to_itself(x in 0.0f64..=1.0) {
        let y = farey(x).unwrap();
        prop_assert!((0.0..=1.0).contains(&y));
    }
}
