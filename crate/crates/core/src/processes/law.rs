//! Concrete laws of a single `X_k`: exact characteristic functions under
//! the convention `φ(t) = E e^{2iπtX}`, samplers, and absolute moments.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Cauchy, Distribution, Exp, Normal, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::fourier_model::unit_phase;
use crate::quadrature;

/// Above this power a Gaussian convolution power is drawn as `√k·Z`.
pub const GAUSSIAN_SHORTCUT_POWER: u64 = 10_000;

const MOMENT_REL_TOL: f64 = 1e-8;

/// Reference law `X` used by scale-shift families and convolution powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseLaw {
    #[serde(alias = "standard_gaussian")]
    Gaussian,
    Exponential { lambda: f64 },
    Cauchy { scale: f64 },
    Laplace { scale: f64 },
    /// Finitely supported law, `points = [(x, p), ...]`.
    PointMassMixture { points: Vec<(f64, f64)> },
}

/// Law of one `X_k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    /// Uniform on `[μ − σ/2, μ + σ/2]`.
    UniformInterval { mu: f64, sigma: f64 },
    /// Law of `σ·X + μ`.
    ScaleShift { base: BaseLaw, sigma: f64, mu: f64 },
    /// `k`-fold convolution of the base law; power 0 is the point mass at 0.
    ConvPower { base: BaseLaw, power: u64 },
    /// Uniform on the integers of `[lo, hi]`.
    UniformIntegers { lo: i64, hi: i64 },
    Poisson { lambda: f64 },
}

/// `sin(x)/x` with the removable point filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `sin(πnt) / (n sin(πt))`, the normalized Dirichlet kernel, with the
/// removable points at integer `t` evaluated by their limit.
pub fn dirichlet_ratio(n: u64, t: f64) -> f64 {
    let m = t.round();
    let eps = t - m;
    // sin(πn(m+ε)) / sin(π(m+ε)) = (−1)^{m(n−1)} sin(πnε)/sin(πε)
    let sign = if (m as i64).rem_euclid(2) == 1 && n % 2 == 0 { -1.0 } else { 1.0 };
    let nf = n as f64;
    let r = if eps.abs() < 1e-9 {
        1.0 - (nf * nf - 1.0) * (PI * eps).powi(2) / 6.0
    } else {
        (PI * nf * eps).sin() / (nf * (PI * eps).sin())
    };
    sign * r
}

impl BaseLaw {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            BaseLaw::Gaussian => Ok(()),
            BaseLaw::Exponential { lambda } if !(*lambda > 0.0 && lambda.is_finite()) => {
                bad(format!("exponential rate must be positive, got {lambda}"))
            }
            BaseLaw::Cauchy { scale } | BaseLaw::Laplace { scale } if !(*scale > 0.0 && scale.is_finite()) => {
                bad(format!("scale must be positive, got {scale}"))
            }
            BaseLaw::PointMassMixture { points } => {
                if points.is_empty() {
                    return bad("point mass mixture needs at least one point".into());
                }
                if points.iter().any(|(x, p)| !x.is_finite() || !(*p >= 0.0)) {
                    return bad("mixture points must be finite with non-negative weights".into());
                }
                let total: f64 = points.iter().map(|p| p.1).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return bad(format!("mixture probabilities sum to {total}, not 1"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn char_fn(&self, t: f64) -> Complex64 {
        match self {
            BaseLaw::Gaussian => Complex64::new((-2.0 * PI * PI * t * t).exp(), 0.0),
            BaseLaw::Exponential { lambda } => Complex64::new(*lambda, 0.0) / Complex64::new(*lambda, -2.0 * PI * t),
            BaseLaw::Cauchy { scale } => Complex64::new((-2.0 * PI * scale * t.abs()).exp(), 0.0),
            BaseLaw::Laplace { scale } => Complex64::new(1.0 / (1.0 + (2.0 * PI * scale * t).powi(2)), 0.0),
            BaseLaw::PointMassMixture { points } => points.iter().map(|&(x, p)| p * unit_phase(t * x)).sum(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            BaseLaw::Gaussian => Normal::new(0.0, 1.0).expect("valid").sample(rng),
            BaseLaw::Exponential { lambda } => Exp::new(*lambda).expect("validated").sample(rng),
            BaseLaw::Cauchy { scale } => Cauchy::new(0.0, *scale).expect("validated").sample(rng),
            BaseLaw::Laplace { scale } => {
                let u: f64 = rng.random::<f64>() - 0.5;
                -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            BaseLaw::PointMassMixture { points } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(x, p) in points {
                    acc += p;
                    if u < acc {
                        return x;
                    }
                }
                points.last().expect("non-empty").0
            }
        }
    }

    pub fn mean(&self) -> Option<f64> {
        match self {
            BaseLaw::Gaussian | BaseLaw::Laplace { .. } => Some(0.0),
            BaseLaw::Exponential { lambda } => Some(1.0 / lambda),
            BaseLaw::Cauchy { .. } => None,
            BaseLaw::PointMassMixture { points } => Some(points.iter().map(|(x, p)| x * p).sum()),
        }
    }

    /// `E X²`, `None` when infinite.
    pub fn second_moment(&self) -> Option<f64> {
        match self {
            BaseLaw::Gaussian => Some(1.0),
            BaseLaw::Exponential { lambda } => Some(2.0 / (lambda * lambda)),
            BaseLaw::Cauchy { .. } => None,
            BaseLaw::Laplace { scale } => Some(2.0 * scale * scale),
            BaseLaw::PointMassMixture { points } => Some(points.iter().map(|(x, p)| x * x * p).sum()),
        }
    }

    fn density(&self, x: f64) -> f64 {
        match self {
            BaseLaw::Gaussian => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
            BaseLaw::Exponential { lambda } => {
                if x < 0.0 {
                    0.0
                } else {
                    lambda * (-lambda * x).exp()
                }
            }
            BaseLaw::Cauchy { scale } => scale / (PI * (scale * scale + x * x)),
            BaseLaw::Laplace { scale } => (-x.abs() / scale).exp() / (2.0 * scale),
            BaseLaw::PointMassMixture { .. } => unreachable!("mixtures are summed, not integrated"),
        }
    }

    pub fn label(&self) -> String {
        match self {
            BaseLaw::Gaussian => "N(0,1)".into(),
            BaseLaw::Exponential { lambda } => format!("Exp({lambda})"),
            BaseLaw::Cauchy { scale } => format!("Cauchy({scale})"),
            BaseLaw::Laplace { scale } => format!("Laplace({scale})"),
            BaseLaw::PointMassMixture { points } => format!("mixture{points:?}"),
        }
    }

    fn infinite(&self, beta: f64) -> Error {
        Error::InfiniteMoment { law: self.label(), beta }
    }

    /// `E|X|^β`.
    pub fn abs_moment(&self, beta: f64) -> Result<f64> {
        match self {
            BaseLaw::Gaussian => Ok(2f64.powf(beta / 2.0) * gamma((beta + 1.0) / 2.0) / PI.sqrt()),
            BaseLaw::Exponential { lambda } => Ok(gamma(beta + 1.0) / lambda.powf(beta)),
            BaseLaw::Laplace { scale } => Ok(scale.powf(beta) * gamma(beta + 1.0)),
            BaseLaw::Cauchy { scale } => {
                if beta < 1.0 {
                    Ok(scale.powf(beta) / (PI * beta / 2.0).cos())
                } else {
                    Err(self.infinite(beta))
                }
            }
            BaseLaw::PointMassMixture { points } => Ok(points.iter().map(|(x, p)| p * x.abs().powf(beta)).sum()),
        }
    }

    /// `E|σX + μ|^β`; closed form when `μ = 0`, quadrature otherwise.
    pub fn shifted_abs_moment(&self, sigma: f64, mu: f64, beta: f64) -> Result<f64> {
        if let BaseLaw::PointMassMixture { points } = self {
            return Ok(points.iter().map(|(x, p)| p * (sigma * x + mu).abs().powf(beta)).sum());
        }
        if mu == 0.0 {
            return Ok(sigma.abs().powf(beta) * self.abs_moment(beta)?);
        }
        if sigma == 0.0 {
            return Ok(mu.abs().powf(beta));
        }
        if let BaseLaw::Cauchy { .. } = self {
            if beta >= 1.0 {
                return Err(self.infinite(beta));
            }
        }
        // Split at the kink x = −μ/σ and map each side onto a half-line.
        let kink = -mu / sigma;
        let integrand = |x: f64| (sigma * x + mu).abs().powf(beta) * self.density(x);
        let upper = quadrature::integrate_upper_half_line(integrand, kink, MOMENT_REL_TOL)?;
        let lower = quadrature::integrate_lower_half_line(integrand, kink, MOMENT_REL_TOL)?;
        Ok(upper + lower)
    }
}

impl Law {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            Law::UniformInterval { mu, sigma } => {
                if !mu.is_finite() || !(*sigma > 0.0 && sigma.is_finite()) {
                    return bad(format!("uniform interval needs finite μ and σ > 0, got μ={mu}, σ={sigma}"));
                }
                Ok(())
            }
            Law::ScaleShift { base, sigma, mu } => {
                if !mu.is_finite() || !sigma.is_finite() {
                    return bad(format!("scale-shift parameters must be finite, got σ={sigma}, μ={mu}"));
                }
                base.validate()
            }
            Law::ConvPower { base, .. } => base.validate(),
            Law::UniformIntegers { lo, hi } => {
                if lo > hi {
                    return bad(format!("uniform integers needs lo ≤ hi, got [{lo}, {hi}]"));
                }
                Ok(())
            }
            Law::Poisson { lambda } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return bad(format!("Poisson rate must be positive, got {lambda}"));
                }
                Ok(())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Law::UniformInterval { mu, sigma } => format!("U[{mu}±{sigma}/2]"),
            Law::ScaleShift { base, sigma, mu } => format!("{sigma}·{}+{mu}", base.label()),
            Law::ConvPower { base, power } => format!("{}^*{power}", base.label()),
            Law::UniformIntegers { lo, hi } => format!("U{{{lo}..{hi}}}"),
            Law::Poisson { lambda } => format!("Poisson({lambda})"),
        }
    }

    /// `φ(t) = E e^{2iπtX}` in closed form.
    pub fn char_fn(&self, t: f64) -> Complex64 {
        match self {
            Law::UniformInterval { mu, sigma } => unit_phase(t * mu) * sinc(PI * t * sigma),
            Law::ScaleShift { base, sigma, mu } => unit_phase(t * mu) * base.char_fn(sigma * t),
            Law::ConvPower { base, power } => match base {
                // Real CFs are raised directly; powi keeps the sign of negative bases.
                BaseLaw::Gaussian => Complex64::new((-2.0 * PI * PI * t * t * *power as f64).exp(), 0.0),
                _ => pow_u64(base.char_fn(t), *power),
            },
            Law::UniformIntegers { lo, hi } => {
                let n = (hi - lo + 1) as u64;
                let center = 0.5 * (*lo as f64 + *hi as f64);
                unit_phase(t * center) * dirichlet_ratio(n, t)
            }
            Law::Poisson { lambda } => {
                let z = unit_phase(t) - 1.0;
                (z * *lambda).exp()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Law::UniformInterval { mu, sigma } => mu + sigma * (rng.random::<f64>() - 0.5),
            Law::ScaleShift { base, sigma, mu } => sigma * base.sample(rng) + mu,
            Law::ConvPower { base, power } => {
                if matches!(base, BaseLaw::Gaussian) && *power > GAUSSIAN_SHORTCUT_POWER {
                    (*power as f64).sqrt() * BaseLaw::Gaussian.sample(rng)
                } else {
                    (0..*power).map(|_| base.sample(rng)).sum()
                }
            }
            Law::UniformIntegers { lo, hi } => rng.random_range(*lo..=*hi) as f64,
            Law::Poisson { lambda } => Poisson::new(*lambda).expect("validated").sample(rng),
        }
    }

    /// True when the law charges only integers, so `φ` is 1-periodic.
    pub fn is_integer_valued(&self) -> bool {
        let integer_mixture = |b: &BaseLaw| match b {
            BaseLaw::PointMassMixture { points } => points.iter().all(|(x, _)| x.fract() == 0.0),
            _ => false,
        };
        match self {
            Law::UniformIntegers { .. } | Law::Poisson { .. } => true,
            Law::ConvPower { base, power } => *power == 0 || integer_mixture(base),
            Law::ScaleShift { base, sigma, mu } => integer_mixture(base) && sigma.fract() == 0.0 && mu.fract() == 0.0,
            Law::UniformInterval { .. } => false,
        }
    }

    /// `E X²`, `None` when infinite.
    pub fn second_moment(&self) -> Option<f64> {
        match self {
            Law::UniformInterval { mu, sigma } => Some(mu * mu + sigma * sigma / 12.0),
            Law::ScaleShift { base, sigma, mu } => {
                let m1 = base.mean()?;
                let m2 = base.second_moment()?;
                Some(sigma * sigma * m2 + 2.0 * sigma * mu * m1 + mu * mu)
            }
            Law::ConvPower { base, power } => {
                let k = *power as f64;
                let m1 = base.mean()?;
                let var = base.second_moment()? - m1 * m1;
                Some(k * var + (k * m1).powi(2))
            }
            Law::UniformIntegers { lo, hi } => {
                // Mean of x² over lo..=hi via the sum-of-squares formula.
                let s = |n: f64| n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
                let (lo, hi) = (*lo as f64, *hi as f64);
                let total = if lo >= 0.0 {
                    s(hi) - s(lo - 1.0)
                } else if hi <= 0.0 {
                    s(-lo) - s(-hi - 1.0)
                } else {
                    s(hi) + s(-lo)
                };
                Some(total / (hi - lo + 1.0))
            }
            Law::Poisson { lambda } => Some(lambda + lambda * lambda),
        }
    }

    /// `E|X|^β`.
    pub fn abs_moment(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("moment exponent must be positive, got {beta}")));
        }
        match self {
            Law::UniformInterval { mu, sigma } => {
                let (a, b) = (mu - sigma / 2.0, mu + sigma / 2.0);
                let anti = |x: f64| x.signum() * x.abs().powf(beta + 1.0) / (beta + 1.0);
                Ok((anti(b) - anti(a)) / (b - a))
            }
            Law::ScaleShift { base, sigma, mu } => base.shifted_abs_moment(*sigma, *mu, beta),
            Law::ConvPower { base, power } => conv_power_abs_moment(base, *power, beta),
            Law::UniformIntegers { lo, hi } => {
                let n = (hi - lo + 1) as u64;
                if n > 50_000_000 {
                    return Err(Error::MomentUnavailable { law: self.label(), beta });
                }
                let s = crate::summation::sum((*lo..=*hi).map(|x| (x as f64).abs().powf(beta)));
                Ok(s / n as f64)
            }
            Law::Poisson { lambda } => Ok(poisson_abs_moment(*lambda, beta)),
        }
    }
}

fn pow_u64(z: Complex64, mut e: u64) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

fn conv_power_abs_moment(base: &BaseLaw, power: u64, beta: f64) -> Result<f64> {
    if power == 0 {
        return Ok(0.0);
    }
    let k = power as f64;
    let unavailable = || Error::MomentUnavailable { law: format!("{}^*{power}", base.label()), beta };
    match base {
        BaseLaw::Gaussian => Ok(k.powf(beta / 2.0) * base.abs_moment(beta)?),
        // Sums of i.i.d. Cauchy(s) are Cauchy(ks).
        BaseLaw::Cauchy { scale } => BaseLaw::Cauchy { scale: k * scale }.abs_moment(beta),
        // Sums of i.i.d. Exp(λ) are Gamma(k, λ).
        BaseLaw::Exponential { lambda } => Ok((ln_gamma(k + beta) - ln_gamma(k)).exp() / lambda.powf(beta)),
        BaseLaw::Laplace { scale } if beta == 2.0 => Ok(2.0 * k * scale * scale),
        BaseLaw::PointMassMixture { points } => {
            if beta == 2.0 {
                let m1 = base.mean().expect("finite");
                let var = base.second_moment().expect("finite") - m1 * m1;
                return Ok(k * var + (k * m1).powi(2));
            }
            // Integer support: exact law of the sum by repeated convolution.
            if points.iter().any(|(x, _)| x.fract() != 0.0) {
                return Err(unavailable());
            }
            let lo = points.iter().map(|p| p.0 as i64).min().expect("non-empty");
            let hi = points.iter().map(|p| p.0 as i64).max().expect("non-empty");
            let span = (hi - lo) as u64;
            if span.saturating_mul(power) > 2_000_000 || power > 100_000 {
                return Err(unavailable());
            }
            let mut step = vec![0.0; span as usize + 1];
            for &(x, p) in points {
                step[(x as i64 - lo) as usize] += p;
            }
            let mut pmf = vec![1.0];
            for _ in 0..power {
                let mut next = vec![0.0; pmf.len() + span as usize];
                for (i, &a) in pmf.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    for (j, &b) in step.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                pmf = next;
            }
            let offset = lo * power as i64;
            Ok(pmf.iter().enumerate().map(|(i, p)| p * ((offset + i as i64) as f64).abs().powf(beta)).sum())
        }
        BaseLaw::Laplace { .. } => Err(unavailable()),
    }
}

fn poisson_abs_moment(lambda: f64, beta: f64) -> f64 {
    // Sum in log space until well past the mode and terms are negligible.
    let mut acc = crate::summation::NeumaierSum::new();
    let stop = (lambda + 40.0 * lambda.sqrt() + 60.0).ceil() as u64;
    for x in 1..=stop {
        let xf = x as f64;
        let log_term = -lambda + xf * lambda.ln() - ln_gamma(xf + 1.0) + beta * xf.ln();
        acc.add(log_term.exp());
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn gauss_shift(sigma: f64, mu: f64) -> Law {
        Law::ScaleShift { base: BaseLaw::Gaussian, sigma, mu }
    }

    #[test]
    fn char_fn_examples() {
        let laws = [
            Law::UniformInterval { mu: 0.3, sigma: 2.0 },
            gauss_shift(1.0, 0.0),
            Law::ConvPower { base: BaseLaw::Laplace { scale: 1.0 }, power: 3 },
            Law::UniformIntegers { lo: 4, hi: 8 },
            Law::Poisson { lambda: 2.0 },
            Law::ScaleShift { base: BaseLaw::Exponential { lambda: 1.0 }, sigma: 2.0, mu: -1.0 },
            Law::ScaleShift { base: BaseLaw::Cauchy { scale: 1.0 }, sigma: 1.0, mu: 0.5 },
        ];
        for law in &laws {
            assert!((law.char_fn(0.0) - 1.0).norm() < 1e-15, "{}", law.label());
        }
        assert!(Law::UniformInterval { mu: 0.0, sigma: 1.0 }.char_fn(1.0).norm() < 1e-15);
        let p = Law::Poisson { lambda: 1.0 }.char_fn(0.5).norm();
        assert!((p - (-2f64).exp()).abs() < 1e-15);
        assert!((p - 0.135335).abs() < 1e-6);
        // Standard Gaussian under the 2π convention.
        assert!((gauss_shift(1.0, 0.0).char_fn(0.3).re - (-2.0 * PI * PI * 0.09).exp()).abs() < 1e-15);
    }

    #[test]
    fn uniform_integers_cf_matches_direct_average() {
        for &(lo, hi) in &[(4i64, 8i64), (-3, 2), (9, 15), (0, 1)] {
            let law = Law::UniformIntegers { lo, hi };
            for &t in &[0.1, 0.25, 0.5, 1.0, 1.0 + 1e-12, 2.37, -0.7] {
                let direct: Complex64 =
                    (lo..=hi).map(|x| unit_phase(t * x as f64)).sum::<Complex64>() / (hi - lo + 1) as f64;
                assert!((law.char_fn(t) - direct).norm() < 1e-12, "[{lo},{hi}] t={t}");
            }
        }
    }

    #[test]
    fn dirichlet_ratio_removable_points() {
        assert_eq!(dirichlet_ratio(5, 0.0), 1.0);
        assert!((dirichlet_ratio(4, 1.0) + 1.0).abs() < 1e-15);
        assert!((dirichlet_ratio(4, 2.0) - 1.0).abs() < 1e-15);
        assert!((dirichlet_ratio(3, 1.0) - 1.0).abs() < 1e-15);
        let near = dirichlet_ratio(7, 1e-11);
        assert!((near - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry() {
        let laws = [
            Law::UniformInterval { mu: 1.3, sigma: 0.4 },
            Law::ScaleShift { base: BaseLaw::Exponential { lambda: 2.0 }, sigma: 1.0, mu: 0.0 },
            Law::Poisson { lambda: 3.0 },
            Law::UniformIntegers { lo: 2, hi: 9 },
        ];
        for law in &laws {
            for &t in &[0.1, 0.77, 3.2] {
                assert!((law.char_fn(-t) - law.char_fn(t).conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn sampling_degenerate_and_mean() {
        let mut rng = stream(3, 0);
        let point = Law::UniformIntegers { lo: 4, hi: 4 };
        assert!((0..100).all(|_| point.sample(&mut rng) == 4.0));

        let n = 100_000;
        let u = Law::UniformInterval { mu: 0.0, sigma: 1.0 };
        let mean = (0..n).map(|_| u.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 * (1.0 / 12f64.sqrt()) / (n as f64).sqrt());

        let c = Law::ConvPower { base: BaseLaw::Gaussian, power: 4 };
        let draws: Vec<f64> = (0..n).map(|_| c.sample(&mut rng)).collect();
        let m = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 4.0).abs() < 0.05 * 4.0, "var={var}");
    }

    #[test]
    fn gaussian_shortcut_has_the_right_spread() {
        let mut rng = stream(9, 0);
        let big = Law::ConvPower { base: BaseLaw::Gaussian, power: 40_000 };
        let n = 20_000;
        let var = (0..n).map(|_| big.sample(&mut rng).powi(2)).sum::<f64>() / n as f64;
        assert!((var / 40_000.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn moments_closed_forms() {
        assert!((BaseLaw::Gaussian.abs_moment(2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((BaseLaw::Gaussian.abs_moment(1.0).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-12);
        assert!((BaseLaw::Laplace { scale: 2.0 }.abs_moment(2.0).unwrap() - 8.0).abs() < 1e-12);
        assert!(matches!(BaseLaw::Cauchy { scale: 1.0 }.abs_moment(2.0), Err(Error::InfiniteMoment { .. })));
        assert!((BaseLaw::Cauchy { scale: 1.0 }.abs_moment(0.5).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let u = Law::UniformInterval { mu: 0.0, sigma: 2.0 };
        assert!((u.abs_moment(2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(Law::UniformIntegers { lo: 4, hi: 4 }.abs_moment(1.0).unwrap(), 4.0);
        let pois = Law::Poisson { lambda: 3.0 };
        assert!((pois.abs_moment(1.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((pois.abs_moment(2.0).unwrap() - 12.0).abs() < 1e-11);
    }

    #[test]
    fn shifted_moments_by_quadrature() {
        // E(Z + μ)² = 1 + μ²; E|Z + μ| = 2φ(μ) + μ(2Φ(μ) − 1).
        let g = BaseLaw::Gaussian;
        let m2 = g.shifted_abs_moment(2.0, 1.5, 2.0).unwrap();
        assert!((m2 - (4.0 + 2.25)).abs() < 1e-7 * m2);
        let mu: f64 = 0.7;
        let pdf = (-0.5 * mu * mu).exp() / (2.0 * PI).sqrt();
        let cdf = 0.5 * (1.0 + statrs::function::erf::erf(mu / 2f64.sqrt()));
        let m1 = g.shifted_abs_moment(1.0, mu, 1.0).unwrap();
        assert!((m1 - (2.0 * pdf + mu * (2.0 * cdf - 1.0))).abs() < 1e-8);
        let e = BaseLaw::Exponential { lambda: 2.0 };
        let m = e.shifted_abs_moment(1.0, -0.5, 2.0).unwrap();
        // E(X − 1/2)² = Var + (E X − 1/2)² = 1/4.
        assert!((m - 0.25).abs() < 1e-8);
    }

    #[test]
    fn conv_power_moments() {
        let c = Law::ConvPower { base: BaseLaw::Gaussian, power: 9 };
        assert!((c.abs_moment(2.0).unwrap() - 9.0).abs() < 1e-12);
        let e = Law::ConvPower { base: BaseLaw::Exponential { lambda: 1.0 }, power: 3 };
        // Gamma(3,1): E X² = k(k+1) = 12.
        assert!((e.abs_moment(2.0).unwrap() - 12.0).abs() < 1e-9);
        let coin = BaseLaw::PointMassMixture { points: vec![(-1.0, 0.5), (1.0, 0.5)] };
        let walk = Law::ConvPower { base: coin, power: 4 };
        // |S_4| ∈ {0, 2, 4} with probabilities 6/16, 8/16, 2/16.
        assert!((walk.abs_moment(1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!(matches!(
            Law::ConvPower { base: BaseLaw::Laplace { scale: 1.0 }, power: 3 }.abs_moment(1.0),
            Err(Error::MomentUnavailable { .. })
        ));
    }

    #[test]
    fn second_moment_of_integer_ranges() {
        for &(lo, hi) in &[(4i64, 8i64), (-3, 2), (-9, -2), (0, 0)] {
            let direct = (lo..=hi).map(|x| (x * x) as f64).sum::<f64>() / (hi - lo + 1) as f64;
            let v = Law::UniformIntegers { lo, hi }.second_moment().unwrap();
            assert!((v - direct).abs() < 1e-12, "[{lo},{hi}]");
        }
    }

    #[test]
    fn validation() {
        assert!(Law::UniformIntegers { lo: 3, hi: 2 }.validate().is_err());
        assert!(Law::UniformInterval { mu: 0.0, sigma: 0.0 }.validate().is_err());
        assert!(Law::Poisson { lambda: -1.0 }.validate().is_err());
        let bad = BaseLaw::PointMassMixture { points: vec![(0.0, 0.3), (1.0, 0.3)] };
        assert!(bad.validate().is_err());
        let json: BaseLaw = serde_json::from_str(r#"{"kind":"point_mass_mixture","points":[[0,0.5],[2,0.5]]}"#).unwrap();
        assert!(json.validate().is_ok());
    }
}
