//! Grid scans for the expectation-part hypotheses.
//!
//! Each check evaluates the characteristic-function sums it is about on a
//! grid of `α` and a range of frequencies `j`, reports the largest value
//! with the point where it was attained, and turns a profile over the
//! starting index into a verdict. Grid spacing is refined until a
//! derivative bound guarantees that the sup between grid points exceeds
//! the grid maximum by at most a fixed fraction.

mod abel;
mod geometric;
pub mod scan;

pub use abel::{abel_identity_sides, abel_split_bound, AbelBound};
pub use geometric::{convolution_geometric_bound, GeometricBound};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientSequence;
use crate::error::{Error, Result};
use crate::processes::{Law, ProcessFamily};
use crate::summation::NeumaierSum;
use crate::trend::{decay_verdict, loglog_tail_slope, Verdict, GROWING_SLOPE};
use scan::{prefix_sums, projection_slack, suffix_pair_sups};


/// Slope below which a running-max profile counts as flat.
pub const FLAT_SLOPE: f64 = 0.05;

/// Scan points handled per parallel task; fixed so results never depend on
/// the thread count.
const CHUNK: usize = 256;

/// Interval of `α` values together with its scan resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactWindow {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub j_max: u64,
    #[serde(default)]
    pub exclude_zero_margin: f64,
}

impl CompactWindow {
    pub fn new(lo: f64, hi: f64, grid_points: usize, j_max: u64, exclude_zero_margin: f64) -> Result<Self> {
        let w = Self { lo, hi, grid_points, j_max, exclude_zero_margin };
        w.validate()?;
        Ok(w)
    }

    /// A window that must stay clear of 0, with margin `d(0, K)`.
    pub fn avoiding_zero(lo: f64, hi: f64, grid_points: usize, j_max: u64) -> Result<Self> {
        Self::new(lo, hi, grid_points, j_max, lo.abs().min(hi.abs()))
    }

    /// `[−M, M]`.
    pub fn symmetric(m: f64, grid_points: usize, j_max: u64) -> Result<Self> {
        Self::new(-m, m, grid_points, j_max, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return bad(format!("window needs finite lo < hi, got [{}, {}]", self.lo, self.hi));
        }
        if self.grid_points < 2 || self.j_max < 1 {
            return bad("window needs at least 2 grid points and j_max >= 1".into());
        }
        if !(self.exclude_zero_margin >= 0.0) {
            return bad(format!("zero margin must be non-negative, got {}", self.exclude_zero_margin));
        }
        if self.exclude_zero_margin > 0.0 && (self.contains_zero() || self.distance_to_zero() < self.exclude_zero_margin) {
            return bad(format!(
                "window [{}, {}] does not keep a distance {} from 0",
                self.lo, self.hi, self.exclude_zero_margin
            ));
        }
        Ok(())
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// `d(0, K)`; zero when the window contains 0.
    pub fn distance_to_zero(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Grid size after `level` halvings of the spacing; each level contains
    /// the previous one.
    pub fn points_at_level(&self, level: u32) -> usize {
        (self.grid_points - 1).saturating_mul(1usize << level).saturating_add(1)
    }

    pub fn grid(&self, level: u32) -> Vec<f64> {
        linspace(self.lo, self.hi, self.points_at_level(level))
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect()
}

/// Tuning shared by the hypothesis scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanOptions {
    /// Target smallness in the definition of the weighted hypothesis.
    pub epsilon: f64,
    /// Allowed excess of the true sup over the grid sup, relative to
    /// `max(sup, ε)`.
    pub guard_rel_tol: f64,
    /// Refinement stops with a refusal beyond this many grid points.
    pub max_grid_points: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { epsilon: 1e-2, guard_rel_tol: 1e-3, max_grid_points: 1 << 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    H,
    Hprime,
    Hsecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub m: u64,
    pub j: i64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub hypothesis: Hypothesis,
    #[serde(rename = "sup")]
    pub sup_value: f64,
    pub witness: Witness,
    /// `(N, sup)` for each starting index `N`.
    #[serde(rename = "profile")]
    pub tail_profile: Vec<(u64, f64)>,
    /// `(N, sup over n, m ∈ [N, 2N])` for dyadic `N`; free of the `m`-cap.
    pub block_profile: Vec<(u64, f64)>,
    pub verdict: Verdict,
    pub trend_slope: Option<f64>,
    /// Final number of `α` grid points.
    pub grid_points: usize,
    /// Bound on how far the true sup can exceed the grid sup.
    pub guard: f64,
    /// Bound on the contribution of frequencies `|j| > j_max`.
    pub truncation_bound: f64,
    pub truncation_note: String,
}

type Entry = (f64, Witness);

struct PointResult {
    tail: Vec<Entry>,
    block: Vec<Entry>,
}

/// Guard model `min(lin·h, quad·h²)` for one frequency.
#[derive(Clone, Copy)]
struct GuardModel {
    lin: f64,
    quad: f64,
}

impl GuardModel {
    fn at(&self, h: f64) -> f64 {
        (self.lin * h).min(self.quad * h * h)
    }
}

struct Setup {
    kind: Hypothesis,
    laws: Vec<Law>,
    weights: Vec<Complex64>,
    k0: u64,
    k_end: u64,
    starts: Vec<u64>,
    blocks: Vec<u64>,
    js: Vec<i64>,
    lo: f64,
    hi: f64,
    folded: bool,
    window: CompactWindow,
}

impl Setup {
    fn build(
        kind: Hypothesis,
        p: &ProcessFamily,
        a: Option<&CoefficientSequence>,
        window: &CompactWindow,
        k0: u64,
        k_end: u64,
        starts: Vec<u64>,
    ) -> Result<Self> {
        window.validate()?;
        if window.contains_zero() {
            return Err(Error::InvalidParameter("hypothesis windows must exclude 0".into()));
        }
        let laws = (k0..=k_end).map(|k| p.law_at(k)).collect::<Result<Vec<_>>>()?;
        let weights = match a {
            Some(a) => (k0..=k_end).map(|k| a.get(k)).collect(),
            None => vec![Complex64::new(1.0, 0.0); laws.len()],
        };
        let complex = a.is_some_and(|a| !a.is_real());
        let jm = window.j_max as i64;
        let js = if complex { (-jm..=-1).chain(1..=jm).collect() } else { (1..=jm).collect() };
        // Integer-valued laws give 1-periodic CFs; a window at least one
        // period long scans exactly one period.
        let folded = p.is_integer_valued() && window.hi - window.lo >= 1.0;
        let (lo, hi) = if folded { (0.0, 1.0) } else { (window.lo, window.hi) };
        let mut blocks = Vec::new();
        let mut n = 1u64;
        while n.saturating_mul(2) <= k_end {
            if n >= k0.max(1) {
                blocks.push(n);
            }
            n *= 2;
        }
        Ok(Self { kind, laws, weights, k0, k_end, starts, blocks, js, lo, hi, folded, window: window.clone() })
    }

    fn band(&self, j: i64) -> (f64, f64) {
        let ja = j.unsigned_abs() as f64;
        let d = if self.lo <= 0.0 && self.hi >= 0.0 { 0.0 } else { self.lo.abs().min(self.hi.abs()) };
        (ja * d, ja * self.lo.abs().max(self.hi.abs()))
    }

    fn guard_model(&self, j: i64) -> Result<GuardModel> {
        let (t_lo, t_hi) = self.band(j);
        let ja = j.unsigned_abs() as f64;
        let (mut g0, mut g1, mut g2) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
        let (mut s1, mut s2) = (NeumaierSum::new(), NeumaierSum::new());
        for (idx, (law, w)) in self.laws.iter().zip(&self.weights).enumerate() {
            let env = law.cf_envelope(t_lo, t_hi).ok_or_else(|| {
                Error::GridTooCoarse(format!(
                    "no derivative bound for {} at k={} on |t| in [{t_lo}, {t_hi}]",
                    law.label(),
                    self.k0 + idx as u64
                ))
            })?;
            let w = w.norm();
            if w == 0.0 {
                continue;
            }
            g0.add(w * env.value);
            g1.add(w * ja * env.d1);
            g2.add(w * ja * ja * env.d2);
            s1.add(2.0 * env.value * ja * env.d1);
            s2.add(2.0 * ja * ja * (env.d1 * env.d1 + env.value * env.d2));
        }
        Ok(match self.kind {
            // |g|² has a flat maximum, so the excess is h·√(max|(|g|²)''|/8).
            Hypothesis::H | Hypothesis::Hprime => {
                let c = 2.0 * (g2.value() * g0.value() + g1.value() * g1.value());
                GuardModel { lin: (g1.value() / 2.0).min((c / 8.0).sqrt()), quad: f64::INFINITY }
            }
            Hypothesis::Hsecond => GuardModel { lin: s1.value() / 2.0, quad: s2.value() / 8.0 },
        })
    }

    fn truncation_bound(&self) -> f64 {
        let (t_lo, _) = self.band(self.window.j_max as i64 + 1);
        let mut acc = NeumaierSum::new();
        for (law, w) in self.laws.iter().zip(&self.weights) {
            let Some(env) = law.cf_envelope(t_lo, f64::INFINITY) else { return f64::INFINITY };
            acc.add(match self.kind {
                Hypothesis::Hsecond => env.value * env.value,
                _ => w.norm() * env.value,
            });
        }
        acc.value()
    }

    fn witness(&self, n: u64, m: u64, j: i64, alpha: f64) -> Witness {
        Witness { n, m, j, alpha }
    }

    fn point(&self, j: i64, alpha: f64) -> PointResult {
        let t = j as f64 * alpha;
        let k0 = self.k0;
        match self.kind {
            Hypothesis::H => {
                let terms: Vec<Complex64> = self.laws.iter().zip(&self.weights).map(|(l, w)| w * l.char_fn(t)).collect();
                // Each range gets its own prefix path: differences of one long
                // path would absorb tails far below its early partial sums.
                let best_in = |from: u64, to: u64| -> Entry {
                    let slice = &terms[(from - k0) as usize..=(to - k0) as usize];
                    let (s, _) = suffix_pair_sups(&prefix_sums(slice), &[0]);
                    let (_, i, i2) = s[0];
                    if i2 < i + 2 {
                        return (0.0, self.witness(from, from, j, alpha));
                    }
                    let exact = slice[i..i2].iter().copied().collect::<crate::summation::ComplexSum>().value().norm();
                    (exact, self.witness(from + i as u64, from + i2 as u64 - 1, j, alpha))
                };
                let tail = self.starts.iter().map(|&n| best_in(n, self.k_end)).collect();
                let block = self.blocks.iter().map(|&n| best_in(n, 2 * n)).collect();
                PointResult { tail, block }
            }
            Hypothesis::Hsecond => {
                let terms: Vec<f64> = self.laws.iter().map(|l| l.char_fn(t).norm_sqr()).collect();
                // Suffix sums T_N = Σ_{k=N}^{k_end}.
                let mut suffix = vec![0.0; terms.len() + 1];
                let mut acc = NeumaierSum::new();
                for i in (0..terms.len()).rev() {
                    acc.add(terms[i]);
                    suffix[i] = acc.value();
                }
                let tail = self
                    .starts
                    .iter()
                    .map(|&n| (suffix[(n - k0) as usize], self.witness(n, self.k_end, j, alpha)))
                    .collect();
                let block = self
                    .blocks
                    .iter()
                    .map(|&n| {
                        let v = crate::summation::sum(terms[(n - k0) as usize..=(2 * n - k0) as usize].iter().copied());
                        (v, self.witness(n, 2 * n, j, alpha))
                    })
                    .collect();
                PointResult { tail, block }
            }
            Hypothesis::Hprime => {
                let mut acc = crate::summation::ComplexSum::new();
                let mut best = (0.0, 0u64);
                let mut tail = Vec::with_capacity(self.starts.len());
                let mut next = 0;
                for (idx, law) in self.laws.iter().enumerate() {
                    acc.add(law.char_fn(t));
                    let n = k0 + idx as u64;
                    let v = acc.value().norm();
                    if v > best.0 {
                        best = (v, n);
                    }
                    while next < self.starts.len() && self.starts[next] == n {
                        tail.push((best.0, self.witness(0, best.1, j, alpha)));
                        next += 1;
                    }
                }
                PointResult { tail, block: Vec::new() }
            }
        }
    }

    /// Max-reduction of the point results over `js × alphas`.
    fn scan(&self, alphas: &[f64]) -> PointResult {
        let total = self.js.len() * alphas.len();
        let chunks: Vec<PointResult> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut acc: Option<PointResult> = None;
                for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let j = self.js[idx / alphas.len()];
                    let alpha = alphas[idx % alphas.len()];
                    let r = self.point(j, alpha);
                    acc = Some(match acc {
                        None => r,
                        Some(a) => merge(a, r),
                    });
                }
                acc.expect("chunks are non-empty")
            })
            .collect();
        chunks.into_iter().reduce(merge).expect("scan has at least one point")
    }
}

fn merge(mut a: PointResult, b: PointResult) -> PointResult {
    for (x, y) in a.tail.iter_mut().zip(b.tail) {
        if y.0 > x.0 {
            *x = y;
        }
    }
    for (x, y) in a.block.iter_mut().zip(b.block) {
        if y.0 > x.0 {
            *x = y;
        }
    }
    a
}

fn run(setup: Setup, opts: &ScanOptions) -> Result<HypothesisReport> {
    let models = setup.js.iter().map(|&j| setup.guard_model(j)).collect::<Result<Vec<_>>>()?;
    let span = setup.hi - setup.lo;
    let guard_at = |level: u32| {
        let h = span / (setup.window.points_at_level(level) - 1) as f64;
        models.iter().map(|m| m.at(h)).fold(0.0, f64::max)
    };
    let grid_at = |level: u32| linspace(setup.lo, setup.hi, setup.window.points_at_level(level));

    let mut level = 0u32;
    let mut result = setup.scan(&grid_at(level));
    loop {
        let sup = result.tail.iter().map(|e| e.0).fold(0.0, f64::max);
        let target = opts.guard_rel_tol * sup.max(opts.epsilon);
        if guard_at(level) <= target {
            break;
        }
        // Sups only grow under refinement, so jump straight to the first
        // level that meets the current target.
        let mut next = level + 1;
        while guard_at(next) > target {
            next += 1;
            if setup.window.points_at_level(next) > opts.max_grid_points {
                break;
            }
        }
        if setup.window.points_at_level(next) > opts.max_grid_points {
            return Err(Error::GridTooCoarse(format!(
                "guard {:.3e} exceeds {target:.3e}; needs more than {} grid points",
                guard_at(level),
                opts.max_grid_points
            )));
        }
        level = next;
        result = setup.scan(&grid_at(level));
    }

    let guard = guard_at(level);
    let tail_profile: Vec<(u64, f64)> = setup.starts.iter().zip(&result.tail).map(|(&n, e)| (n, e.0)).collect();
    let block_profile: Vec<(u64, f64)> = setup.blocks.iter().zip(&result.block).map(|(&n, e)| (n, e.0)).collect();
    let (sup_value, witness) = result
        .tail
        .iter()
        .copied()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("profile is non-empty");

    let as_f64 = |v: &[(u64, f64)]| v.iter().map(|&(n, s)| (n as f64, s)).collect::<Vec<_>>();
    let (verdict, trend_slope) = match setup.kind {
        Hypothesis::Hprime => {
            let pts: Vec<(f64, f64)> = as_f64(&tail_profile).into_iter().filter(|p| p.0 >= 1.0).collect();
            let slope = loglog_tail_slope(&pts);
            let v = match slope {
                Some(s) if s <= FLAT_SLOPE => Verdict::CertifiedBounded,
                Some(s) if s > GROWING_SLOPE => Verdict::RefutedGrowing,
                _ => Verdict::Inconclusive,
            };
            (v, slope)
        }
        _ => {
            let slope = loglog_tail_slope(&as_f64(&block_profile));
            let smallest = tail_profile.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let v = match decay_verdict(&as_f64(&block_profile)) {
                _ if sup_value == 0.0 => Verdict::CertifiedBounded,
                Verdict::CertifiedBounded if smallest + guard < opts.epsilon => Verdict::CertifiedBounded,
                Verdict::CertifiedBounded => Verdict::Inconclusive,
                _ if block_profile.len() < 2 => Verdict::Inconclusive,
                v => v,
            };
            (v, slope)
        }
    };

    let truncation_bound = setup.truncation_bound();
    let mut note = format!(
        "|j| > {} adds at most {:.3e}; indices capped at {}",
        setup.window.j_max, truncation_bound, setup.k_end
    );
    if setup.folded {
        note.push_str("; integer-valued law, window folded onto one period [0, 1]");
    }
    if truncation_bound > 1e-3 * sup_value.max(opts.epsilon) {
        note.push_str("; truncation bound exceeds 1e-3 of the sup, raise j_max for a tighter scan");
    }
    if setup.kind == Hypothesis::H && setup.laws.len() + 1 > scan::EXACT_LEN {
        note.push_str(&format!("; pair search may undershoot by a factor {:.1e}", projection_slack()));
    }

    Ok(HypothesisReport {
        hypothesis: setup.kind,
        sup_value,
        witness,
        tail_profile,
        block_profile,
        verdict,
        trend_slope,
        grid_points: setup.window.points_at_level(level),
        guard,
        truncation_bound,
        truncation_note: note,
    })
}

fn checked_starts(n_range: &[u64], m_cap: u64) -> Result<Vec<u64>> {
    let mut starts: Vec<u64> = n_range.to_vec();
    starts.sort_unstable();
    starts.dedup();
    if starts.is_empty() {
        return Err(Error::InvalidParameter("N_range must be non-empty".into()));
    }
    if *starts.last().expect("non-empty") >= m_cap {
        return Err(Error::InvalidParameter(format!("every N must be below m_cap = {m_cap}")));
    }
    Ok(starts)
}

/// Dyadic starting indices `1, 2, 4, … < m_cap / 2`.
pub fn dyadic_range(m_cap: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut n = 1;
    while 2 * n <= m_cap {
        v.push(n);
        n *= 2;
    }
    v
}

/// Weighted tail sums `sup_{m>n≥N} sup_α sup_j |Σ_{k=n}^m a_k φ_k(jα)|`.
pub fn check_h(
    a: &CoefficientSequence,
    p: &ProcessFamily,
    window: &CompactWindow,
    n_range: &[u64],
    m_cap: u64,
    opts: &ScanOptions,
) -> Result<HypothesisReport> {
    let starts = checked_starts(n_range, m_cap)?;
    let setup = Setup::build(Hypothesis::H, p, Some(a), window, starts[0], m_cap, starts)?;
    run(setup, opts)
}

/// Unweighted partial sums `sup_{N ≤ N_max} sup_α sup_j |Σ_{k=0}^N φ_k(jα)|`.
pub fn check_hprime(p: &ProcessFamily, window: &CompactWindow, n_max: u64, opts: &ScanOptions) -> Result<HypothesisReport> {
    let mut starts = vec![0];
    let mut n = 1;
    while n < n_max {
        starts.push(n);
        n *= 2;
    }
    if n_max > 0 {
        starts.push(n_max);
    }
    let setup = Setup::build(Hypothesis::Hprime, p, None, window, 0, n_max, starts)?;
    run(setup, opts)
}

/// Tail sums of squared moduli `sup_α sup_j Σ_{k=N}^{m_cap} |φ_k(jα)|²`.
pub fn check_hsecond(
    p: &ProcessFamily,
    window: &CompactWindow,
    n_range: &[u64],
    m_cap: u64,
    opts: &ScanOptions,
) -> Result<HypothesisReport> {
    let starts = checked_starts(n_range, m_cap)?;
    let setup = Setup::build(Hypothesis::Hsecond, p, None, window, starts[0], m_cap, starts)?;
    run(setup, opts)
}

/// Direct evaluation of the quantity a report's witness refers to.
pub fn evaluate_witness(
    kind: Hypothesis,
    a: Option<&CoefficientSequence>,
    p: &ProcessFamily,
    w: &Witness,
) -> Result<f64> {
    let t = w.j as f64 * w.alpha;
    match kind {
        Hypothesis::H => {
            let a = a.ok_or_else(|| Error::InvalidParameter("H needs coefficients".into()))?;
            let mut acc = crate::summation::ComplexSum::new();
            for k in w.n..=w.m {
                acc.add(a.get(k) * p.char_fn(k, t)?);
            }
            Ok(acc.value().norm())
        }
        Hypothesis::Hprime => {
            let mut acc = crate::summation::ComplexSum::new();
            for k in 0..=w.m {
                acc.add(p.char_fn(k, t)?);
            }
            Ok(acc.value().norm())
        }
        Hypothesis::Hsecond => {
            let mut acc = NeumaierSum::new();
            for k in w.n..=w.m {
                acc.add(p.char_fn(k, t)?.norm_sqr());
            }
            Ok(acc.value())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::BaseLaw;

    fn k12(points: usize, j_max: u64) -> CompactWindow {
        CompactWindow::avoiding_zero(1.0, 2.0, points, j_max).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(CompactWindow::new(1.0, 0.5, 10, 1, 0.0).is_err());
        assert!(CompactWindow::new(-1.0, 1.0, 10, 1, 0.1).is_err());
        assert!(CompactWindow::new(0.2, 1.0, 10, 1, 0.3).is_err());
        let w = CompactWindow::avoiding_zero(-3.0, -0.5, 10, 1).unwrap();
        assert_eq!(w.distance_to_zero(), 0.5);
        assert_eq!(CompactWindow::symmetric(2.0, 5, 1).unwrap().distance_to_zero(), 0.0);
        let g0 = w.grid(0);
        let g2 = w.grid(2);
        assert_eq!(g2.len(), 37);
        assert!(g0.iter().enumerate().all(|(i, x)| (g2[4 * i] - x).abs() < 1e-15));
    }

    #[test]
    fn zero_coefficients_are_certified() {
        let p = ProcessFamily::gaussian("1", "0").unwrap();
        let r = check_h(&CoefficientSequence::zero(), &p, &k12(16, 2), &[1, 2, 4], 16, &ScanOptions::default()).unwrap();
        assert_eq!(r.sup_value, 0.0);
        assert_eq!(r.verdict, Verdict::CertifiedBounded);
    }

    #[test]
    fn gaussian_weighted_tails_decrease() {
        let p = ProcessFamily::gaussian("3*sqrt(log(k+2))", "0").unwrap();
        let a = CoefficientSequence::power_law(0.6, 1.0).unwrap();
        let r = check_h(&a, &p, &k12(32, 3), &dyadic_range(256), 256, &ScanOptions::default()).unwrap();
        assert!(r.tail_profile.windows(2).all(|w| w[1].1 <= w[0].1));
        assert_eq!(r.verdict, Verdict::CertifiedBounded);
        // Oracle: the largest single pair is bounded by the absolute tail sum.
        let bound: f64 = (1..=256u64)
            .map(|k| (k as f64).powf(-0.6) * (-2.0 * std::f64::consts::PI.powi(2) * 9.0 * ((k + 2) as f64).ln()).exp())
            .sum();
        assert!(r.sup_value <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn hprime_examples() {
        let opts = ScanOptions::default();
        let conv = ProcessFamily::conv_power(BaseLaw::Gaussian).unwrap();
        let r = check_hprime(&conv, &k12(32, 2), 64, &opts).unwrap();
        // k = 0 contributes 1; the rest is geometric with ratio r = e^{-2π²}.
        let ratio = (-2.0 * std::f64::consts::PI.powi(2)).exp();
        assert!(r.sup_value <= 1.0 + ratio / (1.0 - ratio) + 1e-15);
        assert_eq!(r.verdict, Verdict::CertifiedBounded);

        let zero = ProcessFamily::constant(0);
        let r = check_hprime(&zero, &k12(8, 1), 100, &opts).unwrap();
        assert!((r.sup_value - 101.0).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::RefutedGrowing);

        let single = check_hprime(&conv, &k12(8, 1), 0, &opts).unwrap();
        assert!(single.sup_value <= 1.0 + 1e-15);
    }

    #[test]
    fn hsecond_examples() {
        let opts = ScanOptions::default();
        let g = ProcessFamily::gaussian("sqrt(log(k+2)/(2*pi^2)*2)", "0").unwrap();
        let r = check_hsecond(&g, &k12(32, 2), &dyadic_range(512), 512, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedBounded);
        for &(n, s) in &r.tail_profile {
            let oracle: f64 = (n..=512).map(|k| ((k + 2) as f64).powi(-4)).sum();
            assert!(s <= oracle * (1.0 + 1e-12), "N={n}");
        }

        let zero = ProcessFamily::constant(0);
        let r = check_hsecond(&zero, &k12(8, 1), &dyadic_range(256), 256, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::RefutedGrowing);

        let u = ProcessFamily::uniform_interval("0", "k").unwrap();
        let r = check_hsecond(&u, &k12(64, 1), &dyadic_range(256), 256, &ScanOptions { epsilon: 0.05, ..opts }).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedBounded);
        for &(n, s) in &r.tail_profile {
            let oracle: f64 = (n..=256).map(|k| 1.0 / (std::f64::consts::PI * k as f64).powi(2)).sum();
            assert!(s <= oracle * (1.0 + 1e-12));
        }
    }

    #[test]
    fn cauchy_is_scanned_away_from_the_origin() {
        let p = ProcessFamily::new(
            crate::processes::LawTemplate::ScaleShift {
                base: BaseLaw::Cauchy { scale: 1.0 },
                sigma: crate::expr::ParamExpr::parse("k").unwrap(),
                mu: 0.0.into(),
            },
            0.5,
            None,
        )
        .unwrap();
        // k = 0 has σ = 0, a point mass; the Cauchy CFs decay like e^{-2πk|t|}.
        let r = check_hprime(&p, &k12(16, 1), 8, &ScanOptions::default()).unwrap();
        let tail = (-2.0 * std::f64::consts::PI).exp();
        assert!(r.sup_value <= 1.0 + tail / (1.0 - tail) + 1e-12);
        let w = CompactWindow::symmetric(1.0, 16, 1).unwrap();
        assert!(matches!(check_hprime(&p, &w, 8, &ScanOptions::default()), Err(Error::InvalidParameter(_))));
    }
}
