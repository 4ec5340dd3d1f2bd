use randfourier::coefficients::CoefficientSequence;
use randfourier::counterexample::{
    dirichlet_integral, dirichlet_integral_default, dirichlet_integral_exact, l2_identity_check, l2_identity_exact, support,
    CounterexampleConfig,
};
use randfourier::processes::char_fn_modulus_uniform_integers;

#[test]
fn supports_partition_the_positive_integers() {
    let mut next = 1;
    for k in 1..=2000u64 {
        let (lo, hi) = support(k);
        assert_eq!(lo, next);
        assert_eq!(hi - lo + 1, 2 * k + 1);
        next = hi + 1;
    }
}

#[test]
fn integrals_match_the_antiderivative_oracle() {
    for k in [1u64, 2, 5, 10, 37, 100] {
        let v = dirichlet_integral_default(k).unwrap();
        assert!((0.0..=1.0).contains(&v));
        assert!((v - dirichlet_integral_exact(k)).abs() < 1e-4, "k={k}");
    }
}

#[test]
fn integrals_agree_with_a_direct_riemann_sum() {
    // Independent midpoint rule on a much finer grid.
    for k in [3u64, 20] {
        let n = 200_000;
        let direct: f64 = (0..n)
            .map(|i| {
                let d = 1.0 - char_fn_modulus_uniform_integers(k, (i as f64 + 0.5) / n as f64);
                d * d
            })
            .sum::<f64>()
            / n as f64;
        assert!((dirichlet_integral_default(k).unwrap() - direct).abs() < 1e-4, "k={k}");
    }
}

#[test]
fn refining_the_quadrature_changes_little() {
    for k in [4u64, 50] {
        let lobes = 2 * k as usize + 1;
        let coarse = dirichlet_integral(k, 64 * lobes).unwrap();
        let fine = dirichlet_integral(k, 256 * lobes).unwrap();
        assert!((coarse - fine).abs() < 1e-4, "k={k}");
    }
}

#[test]
fn l2_sides_equal_the_exact_orthogonality_value() {
    let a = CoefficientSequence::power_law(0.5, 1.0).unwrap();
    for k_max in [1u64, 5, 30, 120] {
        let exact = l2_identity_exact(&a, k_max);
        for seed in 0..3 {
            let id = l2_identity_check(&CounterexampleConfig::new(a.clone(), k_max), seed).unwrap();
            assert!((id.lhs - exact).abs() <= 1e-9 * exact, "k_max={k_max}");
            assert!((id.rhs - exact).abs() <= 1e-9 * exact, "k_max={k_max}");
        }
    }
}
