//! Typed, closed-schema configurations for each subcommand.
//!
//! Every field has a default, so a subcommand runs without a config file;
//! unknown fields are rejected.

use randfourier::coefficients::{CoefficientSequence, GrowthRegime};
use randfourier::fourier_model::FourierFunction;
use randfourier::hypotheses::{dyadic_range, CompactWindow, Hypothesis, ScanOptions};
use randfourier::processes::ProcessFamily;
use randfourier::{Error, Result};
use serde::{Deserialize, Serialize};

fn gaussian_family() -> ProcessFamily {
    ProcessFamily::gaussian("3*sqrt(log(k+2))", "0").expect("valid")
}

fn power_law(delta: f64) -> CoefficientSequence {
    CoefficientSequence::power_law(delta, 1.0).expect("valid")
}

fn unit_window(grid_points: usize, j_max: u64) -> CompactWindow {
    CompactWindow::avoiding_zero(1.0, 2.0, grid_points, j_max).expect("valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub family: ProcessFamily,
    pub coefficients: CoefficientSequence,
    pub function: FourierFunction,
    pub window: CompactWindow,
    pub checkpoints: Vec<u64>,
    pub centered: bool,
    /// Optional L² growth statistic at the last checkpoint.
    pub l2: Option<L2Config>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct L2Config {
    pub ts: Vec<f64>,
    #[serde(default = "default_points_per_unit")]
    pub points_per_unit: usize,
}

fn default_points_per_unit() -> usize {
    64
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            family: gaussian_family(),
            coefficients: power_law(0.8),
            function: FourierFunction::cosine_pair(1),
            window: unit_window(1025, 1),
            checkpoints: (5..=14).map(|e| 1u64 << e).collect(),
            centered: true,
            l2: None,
        }
    }
}

impl SimulateConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        self.window.validate()?;
        if self.checkpoints.len() < 2 || self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("checkpoints must be at least two increasing indices".into()));
        }
        if let Some(l2) = &self.l2 {
            if l2.points_per_unit == 0 || l2.ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                return Err(Error::InvalidParameter("l2 needs positive ts and points_per_unit".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConditionsConfig {
    pub coefficients: CoefficientSequence,
    pub regime: GrowthRegime,
    pub horizon: u64,
    /// Family whose `Φ_β` feeds the block criterion; skipped when absent.
    pub block_family: Option<ProcessFamily>,
    pub block_k_max: usize,
}

impl Default for ConditionsConfig {
    fn default() -> Self {
        Self {
            coefficients: power_law(0.6),
            regime: GrowthRegime::polynomial(1.0).expect("valid"),
            horizon: 1_000_000,
            block_family: None,
            block_k_max: 4,
        }
    }
}

impl ConditionsConfig {
    pub fn validate(&self) -> Result<()> {
        self.regime.validate()?;
        if self.horizon < 2 {
            return Err(Error::InvalidParameter("horizon must be at least 2".into()));
        }
        if let Some(p) = &self.block_family {
            p.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypothesisConfig {
    pub which: Hypothesis,
    pub family: ProcessFamily,
    /// Weights of the weighted tail sums; used by `H` only.
    pub coefficients: CoefficientSequence,
    pub window: CompactWindow,
    /// Starting indices; dyadic below `m_cap / 2` when absent.
    pub n_range: Option<Vec<u64>>,
    pub m_cap: u64,
    /// Horizon of the unweighted partial sums.
    pub n_max: u64,
    pub options: ScanOptions,
}

impl Default for HypothesisConfig {
    fn default() -> Self {
        Self {
            which: Hypothesis::H,
            family: gaussian_family(),
            coefficients: power_law(0.6),
            window: unit_window(65, 2),
            n_range: None,
            m_cap: 256,
            n_max: 256,
            options: ScanOptions::default(),
        }
    }
}

impl HypothesisConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        self.window.validate()?;
        Ok(())
    }

    pub fn starts(&self) -> Vec<u64> {
        self.n_range.clone().unwrap_or_else(|| dyadic_range(self.m_cap))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleCliConfig {
    pub a: CoefficientSequence,
    pub k_max: u64,
    pub quadrature_points: Option<usize>,
    /// Seeds `seed, seed+1, …` for the median L² profile.
    pub seeds: u64,
}

impl Default for CounterexampleCliConfig {
    fn default() -> Self {
        Self { a: power_law(0.5), k_max: 200, quadrature_points: None, seeds: 1 }
    }
}

impl CounterexampleCliConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(Error::InvalidParameter("seeds must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundScanConfig {
    pub family: ProcessFamily,
    pub coefficients: CoefficientSequence,
    pub function: FourierFunction,
    pub n: u64,
    pub alpha_max: f64,
    /// Grid points per dyadic band of `|α|`.
    pub per_band: usize,
}

impl Default for BoundScanConfig {
    fn default() -> Self {
        Self {
            family: gaussian_family(),
            coefficients: power_law(0.8),
            function: FourierFunction::cosine_pair(1),
            n: 1 << 12,
            alpha_max: 1e4,
            per_band: 64,
        }
    }
}

impl BoundScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !(self.alpha_max.is_finite() && self.alpha_max >= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha_max must be at least 1, got {}", self.alpha_max)));
        }
        if self.n == 0 || self.per_band < 2 {
            return Err(Error::InvalidParameter("need n ≥ 1 and per_band ≥ 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SupStatConfig {
    pub family: ProcessFamily,
    pub coefficients: CoefficientSequence,
    /// Half-width of the window `[−M, M]`.
    pub m: f64,
    /// Largest `Λ`.
    pub cap: u64,
    /// Nodes per doubling of the index grid.
    pub density: u32,
    pub j_max: u64,
    pub alpha_points: usize,
    pub seeds: u64,
    /// Also evaluate on the doubled grid and report the relative change.
    pub doubled: bool,
}

impl Default for SupStatConfig {
    fn default() -> Self {
        Self {
            family: gaussian_family(),
            coefficients: power_law(0.8),
            m: 1.0,
            cap: 1024,
            density: 1,
            j_max: 64,
            alpha_points: 65,
            seeds: 64,
            doubled: false,
        }
    }
}

impl SupStatConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.seeds == 0 || self.cap == 0 || self.density == 0 {
            return Err(Error::InvalidParameter("seeds, cap and density must be positive".into()));
        }
        Ok(())
    }
}
