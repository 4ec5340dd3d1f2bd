//! The optimality construction: `X_k` uniform on the `2k+1` integers of
//! `[k², (k+1)² − 1]` and `f(α) = e^{2iπα}`.
//!
//! Supports are disjoint, so the centered terms are orthogonal in `L²(0,1)`
//! and the mean square of the centered sum is the sum of the per-term mean
//! squares. When `Σ|a_k|² = ∞` that mass diverges.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientSequence;
use crate::error::{Error, Result};
use crate::fourier_model::unit_phase;
use crate::processes::{char_fn_modulus_uniform_integers, ProcessFamily};
use crate::summation::NeumaierSum;

/// Nodes per lobe of the Dirichlet kernel required by the trapezoid rule.
pub const MIN_NODES_PER_LOBE: usize = 8;
/// Nodes per lobe used when no resolution is given.
pub const DEFAULT_NODES_PER_LOBE: usize = 64;

/// Support `[k², (k+1)² − 1]` of `X_k`.
pub fn support(k: u64) -> (u64, u64) {
    (k * k, (k + 1) * (k + 1) - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    #[serde(default = "default_coefficients")]
    pub a: CoefficientSequence,
    pub k_max: u64,
    /// Trapezoid nodes on `[0, 1]` for the mean square of the centered sum;
    /// chosen automatically when absent.
    #[serde(default)]
    pub quadrature_points: Option<usize>,
}

fn default_coefficients() -> CoefficientSequence {
    CoefficientSequence::power_law(0.5, 1.0).expect("valid")
}

impl CounterexampleConfig {
    pub fn new(a: CoefficientSequence, k_max: u64) -> Self {
        Self { a, k_max, quadrature_points: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::InvalidParameter("k_max must be at least 1".into()));
        }
        if self.k_max > 100_000 {
            return Err(Error::InvalidParameter(format!("k_max = {} exceeds 100000", self.k_max)));
        }
        Ok(())
    }

    /// Nodes needed so that the trapezoid rule integrates `|C|²` exactly:
    /// more than the spread of the integer frequencies of `C`.
    pub fn min_l2_points(&self) -> usize {
        support(self.k_max).1 as usize + 1
    }

    pub fn l2_points(&self) -> usize {
        self.quadrature_points.unwrap_or_else(|| {
            (self.min_l2_points().max(DEFAULT_NODES_PER_LOBE * (2 * self.k_max as usize + 1))).next_power_of_two()
        })
    }
}

/// Trapezoid sum over one period with `n` nodes (`n + 1` with the endpoint
/// counted at half weight on each side).
fn periodic_trapezoid(n: usize, f: impl Fn(f64) -> f64 + Sync) -> f64 {
    let parts: Vec<f64> = (0..n).into_par_iter().with_min_len(4096).map(|i| f(i as f64 / n as f64)).collect();
    parts.into_iter().collect::<NeumaierSum>().value() / n as f64
}

/// `I_k = ∫_0^1 (1 − |φ_k(α)|)² dα` by the trapezoid rule.
pub fn dirichlet_integral(k: u64, quadrature_points: usize) -> Result<f64> {
    let lobes = 2 * k as usize + 1;
    if quadrature_points < MIN_NODES_PER_LOBE * lobes {
        return Err(Error::QuadratureUnderResolved(format!(
            "{quadrature_points} nodes for k={k}; need at least {}",
            MIN_NODES_PER_LOBE * lobes
        )));
    }
    if k == 0 {
        return Ok(0.0);
    }
    Ok(periodic_trapezoid(quadrature_points, |a| {
        let d = 1.0 - char_fn_modulus_uniform_integers(k, a);
        d * d
    }))
}

/// `I_k` at the default resolution.
pub fn dirichlet_integral_default(k: u64) -> Result<f64> {
    dirichlet_integral(k, DEFAULT_NODES_PER_LOBE * (2 * k as usize + 1))
}

/// `I_k` from the antiderivative of the Dirichlet kernel.
///
/// With `n = 2k+1`, `D(α) = (1 + 2Σ_{m≤k} cos 2πmα)/n` has the antiderivative
/// `G(α) = (α + Σ_{m≤k} sin(2πmα)/(πm))/n` and keeps its sign between the
/// zeros `i/n`, so `∫|D| = Σ_i |G((i+1)/n) − G(i/n)|`. With `∫D² = 1/n`,
/// `I_k = 1 − 2∫|D| + 1/n`.
pub fn dirichlet_integral_exact(k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let n = 2 * k + 1;
    let g = |i: u64| {
        let a = i as f64 / n as f64;
        let mut s = NeumaierSum::new();
        s.add(a);
        for m in 1..=k {
            s.add((2.0 * std::f64::consts::PI * m as f64 * a).sin() / (std::f64::consts::PI * m as f64));
        }
        s.value() / n as f64
    };
    let nodes: Vec<f64> = (0..=n).map(g).collect();
    let abs_integral: f64 = nodes.windows(2).map(|w| (w[1] - w[0]).abs()).collect::<NeumaierSum>().value();
    1.0 - 2.0 * abs_integral + 1.0 / n as f64
}

/// `(k, I_k)` for each `k`.
pub fn dirichlet_table(ks: &[u64]) -> Result<Vec<(u64, f64)>> {
    ks.iter().map(|&k| Ok((k, dirichlet_integral_default(k)?))).collect()
}

/// Both sides of the orthogonality identity for one realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2Identity {
    pub k_max: u64,
    /// `∫_0^1 |Σ_{k ≤ k_max} a_k [e^{2iπαX_k} − E e^{2iπαX_k}]|² dα`.
    pub lhs: f64,
    /// `Σ_k |a_k|² ∫_0^1 |e^{2iπαX_k} − E e^{2iπαX_k}|² dα`.
    pub rhs: f64,
}

/// Per-term mean square `∫_0^1 |e^{2iπαx} − φ_k(α)|² dα` for `x` in the
/// support of `X_k`. After removing the common phase `e^{2iπαk²}` the
/// integrand is a trigonometric polynomial of degree `2k`, which the
/// trapezoid rule with `64(2k+1)` nodes integrates exactly.
fn term_mean_square(k: u64, x: u64) -> f64 {
    let n = 2 * k + 1;
    let shift = (x - k * k) as f64;
    periodic_trapezoid(DEFAULT_NODES_PER_LOBE * n as usize, |a| {
        // φ_k(α) e^{−2iπαk²} = e^{iπα·2k} D(α)
        let psi = unit_phase(a * k as f64) * crate::processes::dirichlet_ratio(n, a);
        (unit_phase(a * shift) - psi).norm_sqr()
    })
}

/// Centered sum on the `N`-node grid, via one inverse FFT of its integer
/// frequency table.
fn centered_sum_on_grid(a: &[Complex64], xs: &[u64], points: usize) -> Vec<Complex64> {
    let mut spectrum = vec![Complex64::new(0.0, 0.0); points];
    for (i, (&ak, &x)) in a.iter().zip(xs).enumerate() {
        let k = i as u64 + 1;
        let (lo, hi) = support(k);
        let w = ak / (2 * k + 1) as f64;
        for n in lo..=hi {
            spectrum[n as usize % points] -= w;
        }
        spectrum[x as usize % points] += ak;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(points).process(&mut spectrum);
    spectrum
}

/// The centered sum's draws `X_1..=X_{k_max}` for a seed.
fn draws(config: &CounterexampleConfig, seed: u64) -> Result<Vec<u64>> {
    let family = ProcessFamily::dirichlet_counterexample();
    (1..=config.k_max).map(|k| Ok(family.draw(seed, k)? as u64)).collect()
}

fn l2_sides(config: &CounterexampleConfig, xs: &[u64], k_max: u64, points: usize) -> L2Identity {
    let a: Vec<Complex64> = (1..=k_max).map(|k| config.a.get(k)).collect();
    let values = centered_sum_on_grid(&a, &xs[..k_max as usize], points);
    let lhs = values.iter().map(|v| v.norm_sqr()).collect::<NeumaierSum>().value() / points as f64;
    let rhs = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let ak = a[k as usize - 1].norm_sqr();
            if ak == 0.0 { 0.0 } else { ak * term_mean_square(k, xs[k as usize - 1]) }
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .collect::<NeumaierSum>()
        .value();
    L2Identity { k_max, lhs, rhs }
}

/// Trapezoid mean square of the centered sum up to `k_max` and the sum of
/// the per-term mean squares.
pub fn l2_identity_check(config: &CounterexampleConfig, seed: u64) -> Result<L2Identity> {
    config.validate()?;
    let points = config.l2_points();
    if points < config.min_l2_points() {
        return Err(Error::QuadratureUnderResolved(format!(
            "{points} nodes cannot resolve frequencies up to {}; need at least {}",
            support(config.k_max).1,
            config.min_l2_points()
        )));
    }
    let xs = draws(config, seed)?;
    Ok(l2_sides(config, &xs, config.k_max, points))
}

/// `Σ_{k ≤ K} |a_k|² (1 − 1/(2k+1))`, the exact value of both sides.
pub fn l2_identity_exact(a: &CoefficientSequence, k_max: u64) -> f64 {
    (1..=k_max).map(|k| a.get(k).norm_sqr() * (2 * k) as f64 / (2 * k + 1) as f64).collect::<NeumaierSum>().value()
}

/// Dyadic cut-offs `1, 2, 4, …` below `k_max`, then `k_max`.
pub fn default_cutoffs(k_max: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(1u64), |&k| Some(2 * k)).take_while(|&k| k < k_max).collect();
    v.push(k_max);
    v
}

/// `(K, median over seeds of the left side at k_max = K)` for each cut-off.
pub fn divergence_profile(config: &CounterexampleConfig, cutoffs: &[u64], seeds: &[u64]) -> Result<Vec<(u64, f64)>> {
    config.validate()?;
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("no seeds".into()));
    }
    if cutoffs.iter().any(|&k| k == 0 || k > config.k_max) {
        return Err(Error::InvalidParameter(format!("cut-offs must lie in [1, {}]", config.k_max)));
    }
    let all: Vec<Vec<u64>> = seeds.iter().map(|&s| draws(config, s)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(cutoffs.len());
    for &k in cutoffs {
        let sub = CounterexampleConfig { a: config.a.clone(), k_max: k, quadrature_points: None };
        let points = sub.min_l2_points().next_power_of_two();
        let mut values: Vec<f64> = all
            .iter()
            .map(|xs| {
                let a: Vec<Complex64> = (1..=k).map(|i| config.a.get(i)).collect();
                let grid = centered_sum_on_grid(&a, &xs[..k as usize], points);
                grid.iter().map(|v| v.norm_sqr()).collect::<NeumaierSum>().value() / points as f64
            })
            .collect();
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = if values.len() % 2 == 1 { values[mid] } else { 0.5 * (values[mid - 1] + values[mid]) };
        out.push((k, median));
    }
    Ok(out)
}
