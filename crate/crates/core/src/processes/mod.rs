//! Independent processes `(X_k)`: per-index laws built from parameter
//! formulas in `k`, with exact characteristic functions and moment gauges.

mod envelope;
mod law;

pub use envelope::CfEnvelope;
pub use law::{dirichlet_ratio, sinc, BaseLaw, Law, GAUSSIAN_SHORTCUT_POWER};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coefficients::GrowthRegime;
use crate::error::{Error, Result};
use crate::expr::ParamExpr;
use crate::fourier_model::FourierFunction;
use crate::rng::stream;
use crate::summation::ComplexSum;
use crate::trend::ols_slope;

/// Largest magnitude accepted for integer-valued parameters.
const MAX_INTEGER_PARAM: f64 = 9.0e15;

fn zero_expr() -> ParamExpr {
    ParamExpr::constant(0.0)
}

fn index_expr() -> ParamExpr {
    ParamExpr::parse("k").expect("valid")
}

fn default_beta() -> f64 {
    2.0
}

/// Law of `X_k` as a function of `k`; every parameter is a formula in `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum LawTemplate {
    UniformInterval {
        #[serde(default = "zero_expr")]
        mu: ParamExpr,
        sigma: ParamExpr,
    },
    ScaleShift {
        base: BaseLaw,
        sigma: ParamExpr,
        #[serde(default = "zero_expr")]
        mu: ParamExpr,
    },
    ConvPower {
        base: BaseLaw,
        #[serde(default = "index_expr")]
        power: ParamExpr,
    },
    UniformIntegers { lo: ParamExpr, hi: ParamExpr },
    Poisson { lambda: ParamExpr },
}

/// A process family: the rule `k ↦ law(X_k)`, the moment exponent `β`, and
/// an optional claimed growth regime for `Φ_β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessFamily {
    pub law: LawTemplate,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthRegime>,
}

fn eval_real(e: &ParamExpr, k: u64, name: &str) -> Result<f64> {
    let v = e.eval(k);
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} = {e} is not finite at k={k}")));
    }
    Ok(v)
}

fn eval_integer(e: &ParamExpr, k: u64, name: &str) -> Result<i64> {
    let v = eval_real(e, k, name)?.round();
    if v.abs() > MAX_INTEGER_PARAM {
        return Err(Error::InvalidParameter(format!("{name} = {e} is out of integer range at k={k}")));
    }
    Ok(v as i64)
}

impl ProcessFamily {
    pub fn new(law: LawTemplate, beta: f64, growth: Option<GrowthRegime>) -> Result<Self> {
        let family = Self { law, beta, growth };
        family.validate()?;
        Ok(family)
    }

    /// `X_k` uniform on `[μ_k − σ_k/2, μ_k + σ_k/2]`.
    pub fn uniform_interval(mu: &str, sigma: &str) -> Result<Self> {
        Self::new(
            LawTemplate::UniformInterval { mu: ParamExpr::parse(mu)?, sigma: ParamExpr::parse(sigma)? },
            2.0,
            None,
        )
    }

    /// `X_k = σ_k·Z + μ_k` with `Z` standard Gaussian.
    pub fn gaussian(sigma: &str, mu: &str) -> Result<Self> {
        Self::new(
            LawTemplate::ScaleShift { base: BaseLaw::Gaussian, sigma: ParamExpr::parse(sigma)?, mu: ParamExpr::parse(mu)? },
            2.0,
            Some(GrowthRegime::Polynomial { d: 1.0 }),
        )
    }

    /// `X_k` is the `k`-fold convolution power of `base`.
    pub fn conv_power(base: BaseLaw) -> Result<Self> {
        Self::new(LawTemplate::ConvPower { base, power: index_expr() }, 2.0, Some(GrowthRegime::Polynomial { d: 1.0 }))
    }

    /// `X_k` uniform on the `2k+1` integers of `[k², (k+1)² − 1]`.
    pub fn dirichlet_counterexample() -> Self {
        Self::new(
            LawTemplate::UniformIntegers {
                lo: ParamExpr::parse("k^2").expect("valid"),
                hi: ParamExpr::parse("(k+1)^2 - 1").expect("valid"),
            },
            1.0,
            Some(GrowthRegime::Polynomial { d: 2.0 }),
        )
        .expect("valid")
    }

    /// `X_k ≡ c` for every `k`.
    pub fn constant(c: i64) -> Self {
        let e = ParamExpr::constant(c as f64);
        Self::new(LawTemplate::UniformIntegers { lo: e.clone(), hi: e }, 1.0, None).expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("β must be positive, got {}", self.beta)));
        }
        if let Some(g) = &self.growth {
            g.validate()?;
        }
        if let LawTemplate::ScaleShift { base, .. } | LawTemplate::ConvPower { base, .. } = &self.law {
            base.validate()?;
        }
        Ok(())
    }

    /// Concrete law of `X_k`.
    pub fn law_at(&self, k: u64) -> Result<Law> {
        let law = match &self.law {
            LawTemplate::UniformInterval { mu, sigma } => {
                Law::UniformInterval { mu: eval_real(mu, k, "mu")?, sigma: eval_real(sigma, k, "sigma")? }
            }
            LawTemplate::ScaleShift { base, sigma, mu } => Law::ScaleShift {
                base: base.clone(),
                sigma: eval_real(sigma, k, "sigma")?,
                mu: eval_real(mu, k, "mu")?,
            },
            LawTemplate::ConvPower { base, power } => {
                let p = eval_integer(power, k, "power")?;
                if p < 0 {
                    return Err(Error::InvalidParameter(format!("convolution power {p} is negative at k={k}")));
                }
                Law::ConvPower { base: base.clone(), power: p as u64 }
            }
            LawTemplate::UniformIntegers { lo, hi } => {
                Law::UniformIntegers { lo: eval_integer(lo, k, "lo")?, hi: eval_integer(hi, k, "hi")? }
            }
            LawTemplate::Poisson { lambda } => Law::Poisson { lambda: eval_real(lambda, k, "lambda")? },
        };
        law.validate()?;
        Ok(law)
    }

    /// True when every `X_k` is integer valued, so each `φ_k` is 1-periodic.
    pub fn is_integer_valued(&self) -> bool {
        match &self.law {
            LawTemplate::UniformIntegers { .. } | LawTemplate::Poisson { .. } => true,
            LawTemplate::ConvPower { base: BaseLaw::PointMassMixture { points }, .. } => {
                points.iter().all(|(x, _)| x.fract() == 0.0)
            }
            _ => false,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, k: u64, rng: &mut R) -> Result<f64> {
        Ok(self.law_at(k)?.sample(rng))
    }

    /// The draw of `X_k` in the realization selected by `seed`.
    pub fn draw(&self, seed: u64, k: u64) -> Result<f64> {
        self.sample(k, &mut stream(seed, k))
    }

    pub fn char_fn(&self, k: u64, t: f64) -> Result<Complex64> {
        Ok(self.law_at(k)?.char_fn(t))
    }

    /// `Φ_β(N) = 2 + max(N, E|X_N|^β)`.
    pub fn moment_bound(&self, n: u64) -> Result<f64> {
        let m = self.law_at(n)?.abs_moment(self.beta)?;
        Ok(2.0 + (n as f64).max(m))
    }

    /// `E f(αX_k) = Σ_j f̂(j) φ_k(jα)`.
    pub fn mean_of_f(&self, k: u64, f: &FourierFunction, alpha: f64) -> Result<Complex64> {
        let law = self.law_at(k)?;
        let mut acc = ComplexSum::new();
        for (j, c) in f.iter() {
            acc.add(c * law.char_fn(j as f64 * alpha));
        }
        Ok(acc.value())
    }

    /// Checks the claimed growth regime against `Φ_β` on log-spaced indices
    /// up to `horizon`: the fitted growth exponent over the upper half may
    /// not exceed the claim by more than 0.05. `None` when no claim is made.
    pub fn growth_claim_consistent(&self, horizon: u64) -> Result<Option<bool>> {
        let Some(regime) = self.growth else { return Ok(None) };
        let mut points = Vec::new();
        let mut n = 2u64;
        while n <= horizon {
            points.push((n, self.moment_bound(n)?));
            n = (n as f64 * 1.5).ceil() as u64;
        }
        let upper = &points[points.len() / 2..];
        let fitted: Vec<(f64, f64)> = match regime {
            GrowthRegime::Polynomial { .. } => upper.iter().map(|&(n, phi)| ((n as f64).ln(), phi.ln())).collect(),
            GrowthRegime::Subexponential { .. } => {
                upper.iter().map(|&(n, phi)| ((n as f64).ln(), phi.log2().ln())).collect()
            }
        };
        let slope = ols_slope(&fitted).unwrap_or(0.0);
        let claim = match regime {
            GrowthRegime::Polynomial { d } => d,
            GrowthRegime::Subexponential { gamma } => gamma,
        };
        Ok(Some(slope <= claim + 0.05))
    }
}

/// `|E e^{2iπαX_k}|` for `X_k` uniform on the `2k+1` integers of
/// `[k², (k+1)² − 1]`.
pub fn char_fn_modulus_uniform_integers(k: u64, alpha: f64) -> f64 {
    dirichlet_ratio(2 * k + 1, alpha).abs()
}
