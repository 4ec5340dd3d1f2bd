use num_complex::Complex64;
use randfourier::coefficients::CoefficientSequence;
use randfourier::engine::SeriesRealization;
use randfourier::fourier_model::FourierFunction;
use randfourier::processes::ProcessFamily;

fn family() -> ProcessFamily {
    ProcessFamily::gaussian("3*sqrt(log(k+2))", "0").unwrap()
}

fn coefficients() -> CoefficientSequence {
    CoefficientSequence::power_law(0.8, 1.0).unwrap()
}

#[test]
fn centered_sums_have_mean_zero_and_the_predicted_variance() {
    // For f(x) = e^{2iπx} the centered sum has variance Σ|a_k|²(1 − |φ_k(α)|²).
    let (n, alpha, seeds) = (64u64, 0.05, 400u64);
    let p = family();
    let a = coefficients();
    let var: f64 = (0..=n).map(|k| a.get(k).norm_sqr() * (1.0 - p.char_fn(k, alpha).unwrap().norm_sqr())).sum();
    let draws: Vec<Complex64> = (0..seeds)
        .map(|s| {
            SeriesRealization::new(s, p.clone(), a.clone(), FourierFunction::monomial(1))
                .unwrap()
                .centered_partial_sum(n, alpha)
                .unwrap()
        })
        .collect();
    let mean = draws.iter().sum::<Complex64>() / seeds as f64;
    assert!(mean.norm() <= 5.0 * (var / seeds as f64).sqrt(), "mean {mean}, var {var}");
    let sample_var = draws.iter().map(|d| (d - mean).norm_sqr()).sum::<f64>() / (seeds - 1) as f64;
    assert!((sample_var / var - 1.0).abs() < 0.25, "{sample_var} vs {var}");
}

#[test]
fn partial_sums_are_linear_in_the_test_function() {
    let f = FourierFunction::new([(1, Complex64::new(0.5, -1.0)), (3, Complex64::new(2.0, 0.0))]).unwrap();
    let g = FourierFunction::new([(-2, Complex64::new(1.0, 1.0)), (3, Complex64::new(-0.5, 0.25))]).unwrap();
    let sum = &f + &g;
    let make = |h: &FourierFunction| SeriesRealization::new(5, family(), coefficients(), h.clone()).unwrap();
    let (rf, rg, rs) = (make(&f), make(&g), make(&sum));
    for alpha in [0.3, 1.1, 1.7, 25.0] {
        for n in [10u64, 200] {
            let lhs = rs.partial_sum(n, alpha).unwrap();
            let rhs = rf.partial_sum(n, alpha).unwrap() + rg.partial_sum(n, alpha).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()), "α={alpha}, n={n}");
            let lhs = rs.centered_partial_sum(n, alpha).unwrap();
            let rhs = rf.centered_partial_sum(n, alpha).unwrap() + rg.centered_partial_sum(n, alpha).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()), "α={alpha}, n={n}");
        }
    }
}

#[test]
fn realizations_do_not_depend_on_materialization_order() {
    let a = SeriesRealization::new(9, family(), coefficients(), FourierFunction::cosine_pair(1)).unwrap();
    let b = SeriesRealization::new(9, family(), coefficients(), FourierFunction::cosine_pair(1)).unwrap();
    a.extend_to(1000).unwrap();
    for n in [3, 50, 400, 1000] {
        b.extend_to(n).unwrap();
    }
    assert_eq!(a.xs(1000).unwrap(), b.xs(1000).unwrap());
    assert_eq!(a.x(77).unwrap(), family().draw(9, 77).unwrap());
    let other = SeriesRealization::new(10, family(), coefficients(), FourierFunction::cosine_pair(1)).unwrap();
    assert_ne!(a.xs(20).unwrap(), other.xs(20).unwrap());
}
