//! Coefficient sequences `(a_k)` and the summability criteria they must meet.
//!
//! Two representations are supported: the closed-form power law
//! `a_k = scale·k^{-δ}`, and an explicit finite prefix followed by a tail
//! rule. Criteria are decided exactly for power laws; explicit prefixes only
//! produce diagnostics for the infinite series conditions, since no finite
//! prefix certifies an infinite sum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;
use crate::trend;

/// Growth class of the moment gauge `Φ_β(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthRegime {
    /// `Φ_β(N) = O(N^d)`.
    Polynomial { d: f64 },
    /// `Φ_β(N) = O(2^{N^γ})`, `0 < γ < 1`.
    Subexponential { gamma: f64 },
}

impl GrowthRegime {
    pub fn polynomial(d: f64) -> Result<Self> {
        let r = GrowthRegime::Polynomial { d };
        r.validate()?;
        Ok(r)
    }

    pub fn subexponential(gamma: f64) -> Result<Self> {
        let r = GrowthRegime::Subexponential { gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GrowthRegime::Polynomial { d } if !(d > 0.0 && d.is_finite()) => {
                Err(Error::InvalidParameter(format!("polynomial growth needs d > 0, got {d}")))
            }
            GrowthRegime::Subexponential { gamma } if !(gamma > 0.0 && gamma < 1.0) => {
                Err(Error::InvalidParameter(format!("subexponential growth needs 0 < γ < 1, got {gamma}")))
            }
            _ => Ok(()),
        }
    }

    /// Denominator of the condition series: `n√log n` or `n^{1-γ/2}`.
    fn condition_denominator(&self, n: f64) -> f64 {
        match *self {
            GrowthRegime::Polynomial { .. } => n * n.ln().sqrt(),
            GrowthRegime::Subexponential { gamma } => n.powf(1.0 - gamma / 2.0),
        }
    }

    /// Block boundary `N_k`: `2^{2^k}` (polynomial) or `2^k` (subexponential).
    pub fn block_boundary(&self, k: usize) -> Result<u128> {
        let exponent: u32 = match self {
            GrowthRegime::Polynomial { .. } => {
                if k >= 7 {
                    return Err(Error::Overflow { k });
                }
                1u32 << k
            }
            GrowthRegime::Subexponential { .. } => u32::try_from(k).map_err(|_| Error::Overflow { k })?,
        };
        if exponent >= 128 {
            return Err(Error::Overflow { k });
        }
        Ok(1u128 << exponent)
    }
}

/// Rule giving `a_k` beyond an explicit prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailRule {
    Zero,
    PowerLaw { delta: f64, scale: f64 },
    /// Repeat the explicit values cyclically.
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientKind {
    PowerLaw { delta: f64, scale: f64 },
    /// `values[i]` is `a_{i+1}`.
    Explicit { values: Vec<Complex64>, tail: TailRule },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    kind: CoefficientKind,
    a0: Complex64,
    description: String,
}

/// `√(Σ_{k≥n}|a_k|²)` with the bracket it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEnergy {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl TailEnergy {
    fn exact(v: f64) -> Self {
        Self { value: v, lower: v, upper: v }
    }

    pub fn error_bar(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConditionVerdict {
    Holds,
    Fails { reason: String },
    Inconclusive { partial_sum: f64, horizon: u64, trend_slope: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationFlag {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalVariation {
    pub partial_sum: f64,
    pub horizon: u64,
    pub flag: VariationFlag,
    /// Value of the full series when it is known in closed form.
    pub limit: Option<f64>,
}

impl CoefficientSequence {
    pub fn power_law(delta: f64, scale: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite() && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("power law needs δ > 0 and finite scale, got δ={delta}, scale={scale}")));
        }
        Ok(Self {
            kind: CoefficientKind::PowerLaw { delta, scale },
            a0: Complex64::new(0.0, 0.0),
            description: format!("{scale}·k^-{delta}"),
        })
    }

    pub fn explicit(values: Vec<Complex64>, tail: TailRule) -> Result<Self> {
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidParameter("explicit coefficients must be finite".into()));
        }
        match tail {
            TailRule::PowerLaw { delta, scale } if !(delta > 0.0 && delta.is_finite() && scale.is_finite()) => {
                return Err(Error::InvalidParameter("power-law tail needs δ > 0 and finite scale".into()));
            }
            TailRule::Periodic if values.is_empty() => {
                return Err(Error::InvalidParameter("periodic tail needs at least one value".into()));
            }
            _ => {}
        }
        let description = format!("explicit[{}] + {:?} tail", values.len(), tail);
        Ok(Self { kind: CoefficientKind::Explicit { values, tail }, a0: Complex64::new(0.0, 0.0), description })
    }

    pub fn zero() -> Self {
        Self::explicit(Vec::new(), TailRule::Zero).expect("valid")
    }

    pub fn with_a0(mut self, a0: Complex64) -> Self {
        self.a0 = a0;
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    pub fn kind(&self) -> &CoefficientKind {
        &self.kind
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    /// `a_k`; index 0 returns the separately stored `a_0`.
    pub fn get(&self, k: u64) -> Complex64 {
        if k == 0 {
            return self.a0;
        }
        match &self.kind {
            CoefficientKind::PowerLaw { delta, scale } => Complex64::new(scale * (k as f64).powf(-delta), 0.0),
            CoefficientKind::Explicit { values, tail } => {
                let idx = (k - 1) as usize;
                if let Some(v) = values.get(idx) {
                    return *v;
                }
                match tail {
                    TailRule::Zero => Complex64::new(0.0, 0.0),
                    TailRule::PowerLaw { delta, scale } => Complex64::new(scale * (k as f64).powf(-delta), 0.0),
                    TailRule::Periodic => values[idx % values.len()],
                }
            }
        }
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        let real = |v: &Complex64| v.im == 0.0;
        real(&self.a0)
            && match &self.kind {
                CoefficientKind::PowerLaw { .. } => true,
                CoefficientKind::Explicit { values, .. } => values.iter().all(real),
            }
    }

    /// True when `a_k = 0` for every `k ≥ 1`.
    pub fn is_identically_zero(&self) -> bool {
        match &self.kind {
            CoefficientKind::PowerLaw { scale, .. } => *scale == 0.0,
            CoefficientKind::Explicit { values, tail } => {
                values.iter().all(|v| v.norm() == 0.0)
                    && match tail {
                        TailRule::Zero | TailRule::Periodic => true,
                        TailRule::PowerLaw { scale, .. } => *scale == 0.0,
                    }
            }
        }
    }

    /// `Σ_{k=lo}^{hi} |a_k|²` for `1 ≤ lo`, `hi` inclusive.
    pub fn energy_range(&self, lo: u128, hi: u128) -> Result<f64> {
        let lo = lo.max(1);
        if hi < lo {
            return Ok(0.0);
        }
        match &self.kind {
            CoefficientKind::PowerLaw { delta, scale } => Ok(scale * scale * power_sum(2.0 * delta, lo, Some(hi))),
            CoefficientKind::Explicit { values, tail } => {
                let len = values.len() as u128;
                let mut acc = NeumaierSum::new();
                for k in lo..=hi.min(len) {
                    acc.add(values[(k - 1) as usize].norm_sqr());
                }
                let tail_lo = lo.max(len + 1);
                if tail_lo <= hi {
                    acc.add(tail_energy_range(values, tail, tail_lo, hi)?);
                }
                Ok(acc.value())
            }
        }
    }

    /// `√(Σ_{k≥n}|a_k|²)`.
    ///
    /// Power-law tails use the integral bracket
    /// `∫_n^∞ x^{-2δ} ≤ Σ_{k≥n} k^{-2δ} ≤ ∫_{n-1}^∞ x^{-2δ}` and return its
    /// midpoint; the bracket is kept as the error bar.
    pub fn tail_energy(&self, n: u64) -> Result<TailEnergy> {
        if n == 0 {
            return Err(Error::InvalidParameter("tail_energy needs n ≥ 1".into()));
        }
        match &self.kind {
            CoefficientKind::PowerLaw { delta, scale } => {
                let (lo, hi) = power_tail_bracket(*delta, n)?;
                let s2 = scale * scale;
                Ok(bracket_to_energy(s2 * lo, s2 * hi))
            }
            CoefficientKind::Explicit { values, tail } => {
                let len = values.len() as u64;
                let mut prefix = NeumaierSum::new();
                for k in n..=len {
                    prefix.add(values[(k - 1) as usize].norm_sqr());
                }
                let p = prefix.value();
                let tail_start = n.max(len + 1);
                match tail {
                    TailRule::Zero => Ok(TailEnergy::exact(p.sqrt())),
                    TailRule::PowerLaw { delta, scale } => {
                        let (lo, hi) = power_tail_bracket(*delta, tail_start)?;
                        let s2 = scale * scale;
                        Ok(bracket_to_energy(p + s2 * lo, p + s2 * hi))
                    }
                    TailRule::Periodic => {
                        if values.iter().all(|v| v.norm() == 0.0) {
                            Ok(TailEnergy::exact(0.0))
                        } else {
                            Err(Error::Divergent("periodic nonzero tail has infinite energy".into()))
                        }
                    }
                }
            }
        }
    }

    /// Partial sum `Σ_{k=1}^{horizon} |a_k − a_{k+1}|` and convergence flag.
    pub fn total_variation(&self, horizon: u64) -> Result<TotalVariation> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("total_variation needs horizon ≥ 1".into()));
        }
        let mut acc = NeumaierSum::new();
        let mut prev = self.get(1);
        for k in 1..=horizon {
            let next = self.get(k + 1);
            acc.add((prev - next).norm());
            prev = next;
        }
        let partial_sum = acc.value();
        let (flag, limit) = match &self.kind {
            // Monotone: the series telescopes to |a_1|.
            CoefficientKind::PowerLaw { scale, .. } => (VariationFlag::Holds, Some(scale.abs())),
            CoefficientKind::Explicit { values, tail } => {
                let len = values.len() as u64;
                match tail {
                    TailRule::Zero | TailRule::PowerLaw { .. } => {
                        let mut full = NeumaierSum::new();
                        let mut prev = self.get(1);
                        for k in 1..=len {
                            let next = self.get(k + 1);
                            full.add((prev - next).norm());
                            prev = next;
                        }
                        // Past the prefix the tail is zero or monotone.
                        full.add(self.get(len + 1).norm());
                        (VariationFlag::Holds, Some(full.value()))
                    }
                    TailRule::Periodic => {
                        let period: f64 =
                            (0..values.len()).map(|i| (values[i] - values[(i + 1) % values.len()]).norm()).sum();
                        if period == 0.0 {
                            (VariationFlag::Holds, Some(partial_sum))
                        } else {
                            (VariationFlag::Fails, None)
                        }
                    }
                }
            }
        };
        Ok(TotalVariation { partial_sum, horizon, flag, limit })
    }

    /// n-th term of condition (1) or (2): `√(Σ_{k≥n}|a_k|²) / denominator(n)`.
    pub fn condition_term(&self, regime: &GrowthRegime, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::InvalidParameter("condition series starts at n = 2".into()));
        }
        Ok(self.tail_energy(n)?.value / regime.condition_denominator(n as f64))
    }

    /// Partial sums of the condition series from `n = 2`, recorded at each
    /// power of ten and at `horizon`.
    pub fn condition_partial_sums(&self, regime: &GrowthRegime, horizon: u64) -> Result<Vec<(u64, f64)>> {
        let mut out = Vec::new();
        let mut acc = NeumaierSum::new();
        let mut next_mark = 10u64;
        // Suffix energies for explicit prefixes are accumulated once.
        let energies = self.suffix_energies(horizon)?;
        for n in 2..=horizon {
            let tail = match &energies {
                Some(e) => e[(n - 2) as usize],
                None => self.tail_energy(n)?.value,
            };
            acc.add(tail / regime.condition_denominator(n as f64));
            if n == next_mark || n == horizon {
                out.push((n, acc.value()));
                next_mark = next_mark.saturating_mul(10);
            }
        }
        Ok(out)
    }

    /// Tail energies for n = 2..=horizon, computed in one backward sweep for
    /// explicit prefixes. `None` for power laws (closed form per n is cheaper).
    fn suffix_energies(&self, horizon: u64) -> Result<Option<Vec<f64>>> {
        let CoefficientKind::Explicit { values, .. } = &self.kind else {
            return Ok(None);
        };
        let len = values.len() as u64;
        let mut out = vec![0.0; horizon.saturating_sub(1) as usize];
        for n in (len + 1).max(2)..=horizon {
            out[(n - 2) as usize] = self.tail_energy(n)?.value;
        }
        // Inside the prefix: energy beyond the prefix plus a running suffix sum.
        let beyond = self.tail_energy(len + 1)?.value;
        let mut acc = NeumaierSum::new();
        acc.add(beyond * beyond);
        for n in (2..=len).rev() {
            acc.add(values[(n - 1) as usize].norm_sqr());
            if n <= horizon {
                out[(n - 2) as usize] = acc.value().max(0.0).sqrt();
            }
        }
        Ok(Some(out))
    }

    /// Decides condition (1) (polynomial) or (2) (subexponential).
    ///
    /// Power laws are classified in closed form: (1) holds iff `δ > 1/2`,
    /// (2) holds iff `δ > (γ+1)/2`. Boundary values are classified as
    /// failing. Explicit sequences return diagnostics up to `horizon`.
    pub fn check_condition(&self, regime: &GrowthRegime, horizon: u64) -> Result<ConditionVerdict> {
        regime.validate()?;
        match &self.kind {
            CoefficientKind::PowerLaw { delta, scale } => {
                if *scale == 0.0 {
                    return Ok(ConditionVerdict::Holds);
                }
                let threshold = match *regime {
                    GrowthRegime::Polynomial { .. } => 0.5,
                    GrowthRegime::Subexponential { gamma } => (gamma + 1.0) / 2.0,
                };
                if *delta > threshold {
                    Ok(ConditionVerdict::Holds)
                } else if *delta <= 0.5 {
                    Ok(ConditionVerdict::Fails { reason: format!("tail energy diverges for δ = {delta} ≤ 1/2") })
                } else {
                    Ok(ConditionVerdict::Fails {
                        reason: format!("series terms decay like n^{:.4}, not summable", (gamma_threshold(regime) - delta) - 1.0),
                    })
                }
            }
            CoefficientKind::Explicit { .. } => {
                let horizon = horizon.max(20);
                let sums = match self.condition_partial_sums(regime, horizon) {
                    Ok(s) => s,
                    Err(Error::Divergent(reason)) => return Ok(ConditionVerdict::Fails { reason }),
                    Err(e) => return Err(e),
                };
                let partial_sum = sums.last().map(|s| s.1).unwrap_or(0.0);
                let lo = (horizon / 10).max(2);
                let pts: Vec<(f64, f64)> = log_spaced(lo, horizon, 16)
                    .into_iter()
                    .filter_map(|n| self.condition_term(regime, n).ok().map(|t| (n as f64, t)))
                    .filter(|p| p.1 > 0.0)
                    .map(|(n, t)| (n.ln(), t.ln()))
                    .collect();
                Ok(ConditionVerdict::Inconclusive { partial_sum, horizon, trend_slope: trend::ols_slope(&pts) })
            }
        }
    }

    /// Terms `√(log Φ_β(N_{k+1}) Σ_{l=N_k+1}^{N_{k+1}} |a_l|²)` for
    /// `k = 1..=k_max`, with the regime's canonical block boundaries.
    pub fn check_block_criterion<F>(&self, regime: &GrowthRegime, moment_gauge: F, k_max: usize) -> Result<Vec<f64>>
    where
        F: Fn(u128) -> Result<f64>,
    {
        regime.validate()?;
        let mut out = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let lo = regime.block_boundary(k)?;
            let hi = regime.block_boundary(k + 1)?;
            let energy = self.energy_range(lo + 1, hi)?;
            if energy == 0.0 {
                out.push(0.0);
                continue;
            }
            let phi = moment_gauge(hi)?;
            out.push((phi.ln() * energy).sqrt());
        }
        Ok(out)
    }
}

fn gamma_threshold(regime: &GrowthRegime) -> f64 {
    match *regime {
        GrowthRegime::Polynomial { .. } => 0.5,
        GrowthRegime::Subexponential { gamma } => (gamma + 1.0) / 2.0,
    }
}

/// `c_n = 1 + √log n` (polynomial) or `n^{γ/2}` (subexponential).
pub fn weight_c(n: u64, regime: &GrowthRegime) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter("c_n is defined for n ≥ 2".into()));
    }
    regime.validate()?;
    let n = n as f64;
    Ok(match *regime {
        GrowthRegime::Polynomial { .. } => 1.0 + n.ln().sqrt(),
        GrowthRegime::Subexponential { gamma } => n.powf(gamma / 2.0),
    })
}

fn bracket_to_energy(lo: f64, hi: f64) -> TailEnergy {
    TailEnergy { value: (0.5 * (lo + hi)).sqrt(), lower: lo.sqrt(), upper: hi.sqrt() }
}

/// Bracket for `Σ_{k≥n} k^{-2δ}` from integral comparison.
fn power_tail_bracket(delta: f64, n: u64) -> Result<(f64, f64)> {
    let s = 2.0 * delta;
    if s <= 1.0 {
        return Err(Error::Divergent(format!("Σ k^(-{s}) diverges for δ = {delta} ≤ 1/2")));
    }
    if n == 1 {
        let (lo, hi) = power_tail_bracket(delta, 2)?;
        return Ok((1.0 + lo, 1.0 + hi));
    }
    let nf = n as f64;
    let lower = nf.powf(1.0 - s) / (s - 1.0);
    let upper = (nf - 1.0).powf(1.0 - s) / (s - 1.0);
    Ok((lower, upper))
}

fn tail_energy_range(values: &[Complex64], tail: &TailRule, lo: u128, hi: u128) -> Result<f64> {
    Ok(match tail {
        TailRule::Zero => 0.0,
        TailRule::PowerLaw { delta, scale } => scale * scale * power_sum(2.0 * delta, lo, Some(hi)),
        TailRule::Periodic => {
            let period = values.len() as u128;
            let energy: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
            let per_period: f64 = energy.iter().sum();
            let count = hi - lo + 1;
            let full = count / period;
            let mut acc = NeumaierSum::new();
            acc.add(full as f64 * per_period);
            for k in lo + full * period..=hi {
                acc.add(energy[((k - 1) % period) as usize]);
            }
            acc.value()
        }
    })
}

/// `Σ_{l=lo}^{hi} l^{-s}` (`hi = None` for the infinite tail, which needs
/// `s > 1`). Short ranges are summed directly; long ranges sum a head
/// directly and the remainder by Euler–Maclaurin with three Bernoulli
/// corrections, accurate to near machine precision once the remainder
/// starts beyond 1024.
pub fn power_sum(s: f64, lo: u128, hi: Option<u128>) -> f64 {
    const DIRECT_LIMIT: u128 = 200_000;
    const EM_START: u128 = 1024;
    let lo = lo.max(1);
    if let Some(h) = hi {
        if h < lo {
            return 0.0;
        }
        if h - lo < DIRECT_LIMIT {
            return (lo..=h).map(|l| (l as f64).powf(-s)).collect::<NeumaierSum>().value();
        }
    } else if s <= 1.0 {
        return f64::INFINITY;
    }
    let m = lo.max(EM_START);
    let mut acc: NeumaierSum = (lo..m).map(|l| (l as f64).powf(-s)).collect();
    let mf = m as f64;
    let g = |x: f64| x.powf(-s);
    let d1 = |x: f64| -s * x.powf(-s - 1.0);
    let d3 = |x: f64| -s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0);
    let d5 = |x: f64| -s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * x.powf(-s - 5.0);
    match hi {
        Some(h) => {
            let bf = h as f64;
            let integral = if (s - 1.0).abs() < 1e-300 {
                (bf / mf).ln()
            } else {
                // m^{1-s}(1 - (b/m)^{1-s})/(s-1), stable near s = 1.
                mf.powf(1.0 - s) * -((1.0 - s) * (bf / mf).ln()).exp_m1() / (s - 1.0)
            };
            acc.add(integral);
            acc.add(0.5 * (g(mf) + g(bf)));
            acc.add((d1(bf) - d1(mf)) / 12.0);
            acc.add(-(d3(bf) - d3(mf)) / 720.0);
            acc.add((d5(bf) - d5(mf)) / 30240.0);
        }
        None => {
            acc.add(mf.powf(1.0 - s) / (s - 1.0));
            acc.add(0.5 * g(mf));
            acc.add(-d1(mf) / 12.0);
            acc.add(d3(mf) / 720.0);
            acc.add(-d5(mf) / 30240.0);
        }
    }
    acc.value()
}

fn log_spaced(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut v: Vec<u64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as u64)
        .collect();
    v.dedup();
    v
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SequenceJson {
    PowerLaw {
        delta: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a0: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        description: Option<String>,
    },
    Explicit {
        values: Vec<[f64; 2]>,
        #[serde(default = "zero_tail")]
        tail: TailRule,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a0: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        description: Option<String>,
    },
}

fn one() -> f64 {
    1.0
}

fn zero_tail() -> TailRule {
    TailRule::Zero
}

impl Serialize for CoefficientSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let a0 = (self.a0 != Complex64::new(0.0, 0.0)).then_some([self.a0.re, self.a0.im]);
        let description = Some(self.description.clone());
        match &self.kind {
            CoefficientKind::PowerLaw { delta, scale } => {
                SequenceJson::PowerLaw { delta: *delta, scale: *scale, a0, description }.serialize(s)
            }
            CoefficientKind::Explicit { values, tail } => SequenceJson::Explicit {
                values: values.iter().map(|v| [v.re, v.im]).collect(),
                tail: tail.clone(),
                a0,
                description,
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CoefficientSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (seq, a0, description) = match SequenceJson::deserialize(d)? {
            SequenceJson::PowerLaw { delta, scale, a0, description } => {
                (CoefficientSequence::power_law(delta, scale), a0, description)
            }
            SequenceJson::Explicit { values, tail, a0, description } => (
                CoefficientSequence::explicit(values.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(), tail),
                a0,
                description,
            ),
        };
        let mut seq = seq.map_err(serde::de::Error::custom)?;
        if let Some([re, im]) = a0 {
            seq = seq.with_a0(Complex64::new(re, im));
        }
        if let Some(d) = description {
            seq = seq.with_description(d);
        }
        Ok(seq)
    }
}
