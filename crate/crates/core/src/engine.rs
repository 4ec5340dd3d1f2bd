//! Realizations of the random series and the diagnostics run on them.
//!
//! A realization fixes `ω` through a seed: `X_k` is drawn from the stream
//! `(seed, k)`, so the materialized prefix can grow without changing any
//! earlier value. Partial sums are accumulated with compensated summation.

use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientSequence;
use crate::error::{Error, Result};
use crate::fourier_model::{unit_phase, FourierFunction};
use crate::hypotheses::CompactWindow;
use crate::processes::{Law, ProcessFamily};
use crate::summation::{ComplexSum, NeumaierSum};
use crate::trend::{decay_verdict, loglog_tail_slope, ols_slope, Verdict};

/// Grid points handled per parallel task; fixed so results never depend on
/// the thread count.
const CHUNK: usize = 64;

/// One seeded draw `ω` of the series `F(α, ω) = Σ_k a_k f(αX_k(ω))`.
#[derive(Debug)]
pub struct SeriesRealization {
    seed: u64,
    family: ProcessFamily,
    coefficients: CoefficientSequence,
    function: FourierFunction,
    x_cache: RwLock<Vec<f64>>,
}

impl Clone for SeriesRealization {
    fn clone(&self) -> Self {
        Self {
            seed: self.seed,
            family: self.family.clone(),
            coefficients: self.coefficients.clone(),
            function: self.function.clone(),
            x_cache: RwLock::new(self.x_cache.read().expect("cache lock").clone()),
        }
    }
}

/// Per-index data for a range of terms, laid out for scanning.
struct TermTable {
    a: Vec<Complex64>,
    x: Vec<f64>,
    laws: Option<Vec<Law>>,
    f: Vec<(f64, Complex64)>,
}

impl TermTable {
    /// `a_k [f(αX_k) − E f(αX_k)]` (or without the mean) at row `i`.
    fn term(&self, i: usize, alpha: f64) -> Complex64 {
        let a = self.a[i];
        if a == Complex64::new(0.0, 0.0) {
            return a;
        }
        let mut v = Complex64::new(0.0, 0.0);
        for &(j, c) in &self.f {
            v += c * unit_phase(j * alpha * self.x[i]);
        }
        if let Some(laws) = &self.laws {
            for &(j, c) in &self.f {
                v -= c * laws[i].char_fn(j * alpha);
            }
        }
        a * v
    }

    /// The term and the `α`-derivative of its random part.
    fn term_and_slope(&self, i: usize, alpha: f64) -> (Complex64, Complex64) {
        let a = self.a[i];
        if a == Complex64::new(0.0, 0.0) {
            return (a, a);
        }
        let x = self.x[i];
        let (mut v, mut d) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &(j, c) in &self.f {
            let e = c * unit_phase(j * alpha * x);
            v += e;
            d += e * Complex64::new(0.0, 2.0 * PI * j * x);
        }
        if let Some(laws) = &self.laws {
            for &(j, c) in &self.f {
                v -= c * laws[i].char_fn(j * alpha);
            }
        }
        (a * v, a * d)
    }
}

impl SeriesRealization {
    pub fn new(seed: u64, family: ProcessFamily, coefficients: CoefficientSequence, function: FourierFunction) -> Result<Self> {
        family.validate()?;
        Ok(Self { seed, family, coefficients, function, x_cache: RwLock::new(Vec::new()) })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn family(&self) -> &ProcessFamily {
        &self.family
    }

    pub fn coefficients(&self) -> &CoefficientSequence {
        &self.coefficients
    }

    pub fn function(&self) -> &FourierFunction {
        &self.function
    }

    /// Number of materialized values `X_0, …`.
    pub fn materialized(&self) -> usize {
        self.x_cache.read().expect("cache lock").len()
    }

    /// Materializes `X_0..=X_n`; existing entries are never touched.
    pub fn extend_to(&self, n: u64) -> Result<()> {
        let need = n as usize + 1;
        if self.materialized() >= need {
            return Ok(());
        }
        let mut cache = self.x_cache.write().expect("cache lock");
        while cache.len() < need {
            let k = cache.len() as u64;
            cache.push(self.family.draw(self.seed, k)?);
        }
        Ok(())
    }

    pub fn x(&self, k: u64) -> Result<f64> {
        self.extend_to(k)?;
        Ok(self.x_cache.read().expect("cache lock")[k as usize])
    }

    /// `X_0..=X_n`.
    pub fn xs(&self, n: u64) -> Result<Vec<f64>> {
        self.extend_to(n)?;
        Ok(self.x_cache.read().expect("cache lock")[..=n as usize].to_vec())
    }

    fn table(&self, from: u64, to: u64, centered: bool) -> Result<TermTable> {
        self.extend_to(to)?;
        let cache = self.x_cache.read().expect("cache lock");
        let x = cache[from as usize..=to as usize].to_vec();
        let a = (from..=to).map(|k| self.coefficients.get(k)).collect();
        let laws = if centered { Some((from..=to).map(|k| self.family.law_at(k)).collect::<Result<Vec<_>>>()?) } else { None };
        let f = self.function.iter().map(|(j, c)| (j as f64, c)).collect();
        Ok(TermTable { a, x, laws, f })
    }

    /// `S_n(α) = Σ_{k=0}^n a_k f(αX_k)`.
    pub fn partial_sum(&self, n: u64, alpha: f64) -> Result<Complex64> {
        let t = self.table(0, n, false)?;
        Ok((0..t.a.len()).map(|i| t.term(i, alpha)).collect::<ComplexSum>().value())
    }

    /// `Σ_{k=0}^n a_k [f(αX_k) − E f(αX_k)]`.
    pub fn centered_partial_sum(&self, n: u64, alpha: f64) -> Result<Complex64> {
        let t = self.table(0, n, true)?;
        Ok((0..t.a.len()).map(|i| t.term(i, alpha)).collect::<ComplexSum>().value())
    }

    /// Centered partial sums at every `α` of a list.
    pub fn centered_partial_sums(&self, n: u64, alphas: &[f64]) -> Result<Vec<Complex64>> {
        let t = self.table(0, n, true)?;
        Ok(alphas
            .par_chunks(CHUNK)
            .flat_map_iter(|chunk| {
                chunk.iter().map(|&alpha| (0..t.a.len()).map(|i| t.term(i, alpha)).collect::<ComplexSum>().value()).collect::<Vec<_>>()
            })
            .collect())
    }
}

/// One entry of a Cauchy profile: the grid sup of `|S_m − S_n|` and the
/// bound on how far the true sup over the window can exceed it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyEntry {
    pub n: u64,
    pub m: u64,
    pub sup: f64,
    pub guard: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceDiagnostics {
    pub centered: bool,
    pub cauchy_profile: Vec<CauchyEntry>,
    pub verdict: Verdict,
    pub trend_slope: Option<f64>,
    pub grid_points: usize,
}

/// Powers of two from `2^lo` to `2^hi`.
pub fn dyadic_checkpoints(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|e| 1u64 << e).collect()
}

/// Sup over the window grid of `|S_m − S_n|` for consecutive checkpoints.
///
/// The guard bounds the excess of the true sup over the grid sup by
/// `h/2 · sup|S'|`, where `sup|S'|` is the grid maximum of the random part's
/// derivative plus `h/2 · 4π² Σ_j j²|f̂(j)| Σ_k |a_k| X_k²`, plus (centered)
/// the CF derivative envelopes of the mean part.
pub fn cauchy_diagnostic(
    r: &SeriesRealization,
    window: &CompactWindow,
    checkpoints: &[u64],
    centered: bool,
) -> Result<ConvergenceDiagnostics> {
    window.validate()?;
    if checkpoints.len() < 2 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("checkpoints must be strictly increasing, at least two".into()));
    }
    let (first, last) = (checkpoints[0], *checkpoints.last().expect("nonempty"));
    let table = r.table(first + 1, last, centered)?;
    let alphas = window.grid(0);
    let h = (window.hi - window.lo) / (alphas.len() - 1) as f64;
    let blocks = checkpoints.len() - 1;
    let block_of: Vec<usize> = (first + 1..=last)
        .map(|k| checkpoints.partition_point(|&c| c < k) - 1)
        .collect();

    // Per-block curvature of the random part and slope of the mean part.
    let j2f: f64 = table.f.iter().map(|(j, c)| j * j * c.norm()).sum();
    let mut curvature = vec![NeumaierSum::new(); blocks];
    let mut mean_slope = vec![NeumaierSum::new(); blocks];
    let (t_lo, t_hi) = (window.distance_to_zero(), window.max_abs());
    for (i, &b) in block_of.iter().enumerate() {
        let a = table.a[i].norm();
        if a == 0.0 {
            continue;
        }
        curvature[b].add(4.0 * PI * PI * j2f * a * table.x[i] * table.x[i]);
        if let Some(laws) = &table.laws {
            for &(j, c) in &table.f {
                if j == 0.0 {
                    continue;
                }
                let env = laws[i].cf_envelope(j.abs() * t_lo, j.abs() * t_hi).ok_or_else(|| {
                    Error::GridTooCoarse(format!("no derivative bound for the mean of {} on the window", laws[i].label()))
                })?;
                mean_slope[b].add(a * c.norm() * j.abs() * env.d1);
            }
        }
    }

    // Grid pass: block sums and random-part slopes at every α.
    let per_alpha: Vec<(Vec<f64>, Vec<f64>)> = alphas
        .par_chunks(CHUNK)
        .flat_map_iter(|chunk| {
            chunk
                .iter()
                .map(|&alpha| {
                    let mut sums = vec![ComplexSum::new(); blocks];
                    let mut slopes = vec![ComplexSum::new(); blocks];
                    for (i, &b) in block_of.iter().enumerate() {
                        let (v, d) = table.term_and_slope(i, alpha);
                        sums[b].add(v);
                        slopes[b].add(d);
                    }
                    (sums.iter().map(|s| s.value().norm()).collect(), slopes.iter().map(|s| s.value().norm()).collect())
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut profile = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let (mut sup, mut arg, mut slope) = (0.0, alphas[0], 0.0f64);
        for (idx, (sums, slopes)) in per_alpha.iter().enumerate() {
            if sums[b] > sup {
                sup = sums[b];
                arg = alphas[idx];
            }
            slope = slope.max(slopes[b]);
        }
        let derivative = slope + 0.5 * h * curvature[b].value() + mean_slope[b].value();
        profile.push(CauchyEntry { n: checkpoints[b], m: checkpoints[b + 1], sup, guard: 0.5 * h * derivative, alpha: arg });
    }

    let lower: Vec<(f64, f64)> = profile.iter().map(|e| (e.m as f64, e.sup)).collect();
    let upper: Vec<(f64, f64)> = profile.iter().map(|e| (e.m as f64, e.sup + e.guard)).collect();
    let verdict = match decay_verdict(&upper) {
        Verdict::CertifiedBounded => Verdict::CertifiedBounded,
        _ => match decay_verdict(&lower) {
            Verdict::CertifiedBounded => {
                let tail = &profile[profile.len() / 2..];
                if tail.iter().any(|e| e.guard > e.sup) {
                    return Err(Error::GridTooCoarse(format!(
                        "grid sups decay but the guard ({:.3e}) exceeds them; use more than {} grid points",
                        tail.iter().map(|e| e.guard).fold(0.0, f64::max),
                        alphas.len()
                    )));
                }
                Verdict::Inconclusive
            }
            v => v,
        },
    };
    Ok(ConvergenceDiagnostics {
        centered,
        cauchy_profile: profile,
        verdict,
        trend_slope: loglog_tail_slope(&lower),
        grid_points: alphas.len(),
    })
}

/// `|F_n(α) − E F_n(α)| / (|||f||| √log(|α|+2))` at every `α` of the list.
pub fn bound_ratio_profile(r: &SeriesRealization, alphas: &[f64], n: u64) -> Result<Vec<(f64, f64)>> {
    let norm = r.function().norm_b();
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter("the test function must have |||f||| > 0".into()));
    }
    let sums = r.centered_partial_sums(n, alphas)?;
    Ok(alphas.iter().zip(sums).map(|(&a, s)| (a, s.norm() / (norm * (a.abs() + 2.0).ln().sqrt()))).collect())
}

/// Largest normalized centered partial sum over `α_list`; an empirical lower
/// estimate of the constant `C_ω`.
pub fn log_bound_ratio(r: &SeriesRealization, alphas: &[f64], n: u64) -> Result<f64> {
    Ok(bound_ratio_profile(r, alphas, n)?.iter().map(|p| p.1).fold(0.0, f64::max))
}

/// Running maximum of a ratio profile as `|α|` grows: `(A, max_{|α| ≤ A} ratio)`
/// at each cutoff `A`.
pub fn running_ratio(profile: &[(f64, f64)], cutoffs: &[f64]) -> Vec<(f64, f64)> {
    cutoffs
        .iter()
        .map(|&c| (c, profile.iter().filter(|p| p.0.abs() <= c).map(|p| p.1).fold(0.0, f64::max)))
        .collect()
}

/// Slope of the running ratio against `√log(A + 2)`; near zero when the
/// `√log` growth of the bound is the right shape.
pub fn ratio_flatness_slope(running: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = running.iter().map(|&(a, r)| ((a + 2.0).ln().sqrt(), r)).collect();
    ols_slope(&pts)
}

/// `α` values in dyadic bands `|α| ∈ [2^{i−1}, 2^i]` (band 0 is `[0, 1]`)
/// up to `alpha_max`, with `per_band` evenly spaced points on each side.
pub fn banded_alphas(alpha_max: f64, per_band: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut lo = 0.0;
    let mut hi = 1.0f64.min(alpha_max);
    loop {
        for i in 0..per_band {
            let v = lo + (hi - lo) * (i as f64 + 0.5) / per_band as f64;
            out.push(-v);
            out.push(v);
        }
        if hi >= alpha_max {
            break;
        }
        lo = hi;
        hi = (2.0 * hi).min(alpha_max);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `√(∫_0^T |F_n − E F_n|² dα) / √(T log T)` for each `T`, trapezoid rule with
/// `points_per_unit` nodes per unit length.
pub fn l2_growth_profile(r: &SeriesRealization, n: u64, ts: &[f64], points_per_unit: usize) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t > 1.0) {
            return Err(Error::InvalidParameter(format!("T must exceed 1, got {t}")));
        }
        let nodes = (t * points_per_unit as f64).ceil() as usize + 1;
        let alphas: Vec<f64> = (0..nodes).map(|i| t * i as f64 / (nodes - 1) as f64).collect();
        let sums = r.centered_partial_sums(n, &alphas)?;
        let mut acc = NeumaierSum::new();
        for (i, s) in sums.iter().enumerate() {
            let w = if i == 0 || i + 1 == nodes { 0.5 } else { 1.0 };
            acc.add(w * s.norm_sqr());
        }
        let integral = acc.value() * t / (nodes - 1) as f64;
        out.push((t, (integral / (t * t.ln())).sqrt()));
    }
    Ok(out)
}

/// Index pairs, frequencies and `α` resolution for the normalized sup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupStatGrid {
    /// `(λ, Λ)` with `1 ≤ λ ≤ Λ`.
    pub pairs: Vec<(u64, u64)>,
    pub j_max: u64,
    /// Points of the `α` grid on `[−M, M]`.
    pub alpha_points: usize,
}

impl SupStatGrid {
    /// All pairs of nodes `⌊2^{i/density}⌋ ≤ cap`, `λ ≤ Λ`.
    pub fn geometric(cap: u64, density: u32, j_max: u64, alpha_points: usize) -> Self {
        let mut nodes = Vec::new();
        let mut i = 0u32;
        loop {
            let v = 2f64.powf(i as f64 / density as f64).floor() as u64;
            if v > cap {
                break;
            }
            if nodes.last() != Some(&v) {
                nodes.push(v);
            }
            i += 1;
        }
        let pairs = nodes.iter().enumerate().flat_map(|(i, &l)| nodes[i..].iter().map(move |&u| (l, u))).collect();
        Self { pairs, j_max, alpha_points }
    }

    /// Twice the node density, twice `j_max`, and a grid containing the
    /// current `α` grid.
    pub fn doubled(&self, cap: u64, density: u32) -> Self {
        let mut g = Self::geometric(cap, 2 * density, 2 * self.j_max, 2 * self.alpha_points - 1);
        for p in &self.pairs {
            if !g.pairs.contains(p) {
                g.pairs.push(*p);
            }
        }
        g
    }

    fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() || self.pairs.iter().any(|&(l, u)| l == 0 || l > u) {
            return Err(Error::InvalidParameter("pairs need 1 ≤ λ ≤ Λ".into()));
        }
        if self.j_max == 0 || self.alpha_points < 2 {
            return Err(Error::InvalidParameter("need j_max ≥ 1 and at least two α points".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupStat {
    /// Mean over seeds of the per-seed maximum.
    pub value: f64,
    pub per_seed: Vec<f64>,
}

/// Monte-Carlo mean over seeds of
/// `max_{(λ,Λ), 1 ≤ j ≤ j_max, α ∈ I_M} |Σ_{k=λ}^Λ a_k[e^{2iπαjX_k} − φ_k(jα)]| / √(A² log(j+3))`
/// with `A² = log(M Φ_β(Λ)) Σ_{k=λ}^Λ |a_k|²`. Negative `j` give the same
/// moduli for real coefficients and are scanned otherwise.
pub fn normalized_sup_stat(
    p: &ProcessFamily,
    a: &CoefficientSequence,
    m: f64,
    grid: &SupStatGrid,
    seeds: &[u64],
) -> Result<SupStat> {
    grid.validate()?;
    if !(m >= 1.0) {
        return Err(Error::InvalidParameter(format!("M must be at least 1, got {m}")));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("no seeds".into()));
    }
    let k_max = grid.pairs.iter().map(|p| p.1).max().expect("nonempty");
    let coeff: Vec<Complex64> = (0..=k_max).map(|k| a.get(k)).collect();
    let laws = (0..=k_max).map(|k| p.law_at(k)).collect::<Result<Vec<_>>>()?;

    // Normalizers per pair; prefix energies for Σ|a_k|².
    let mut energy = vec![0.0; k_max as usize + 1];
    let mut acc = NeumaierSum::new();
    for k in 1..=k_max as usize {
        acc.add(coeff[k].norm_sqr());
        energy[k] = acc.value();
    }
    let mut norms = Vec::with_capacity(grid.pairs.len());
    for &(l, u) in &grid.pairs {
        let e = energy[u as usize] - energy[l as usize - 1];
        if !(e > 0.0) {
            return Err(Error::InvalidParameter(format!("Σ|a_k|² vanishes on [{l}, {u}]")));
        }
        norms.push(((m * p.moment_bound(u)?).ln() * e).sqrt());
    }

    let js: Vec<i64> = if a.is_real() { (1..=grid.j_max as i64).collect() } else { (1..=grid.j_max as i64).flat_map(|j| [-j, j]).collect() };
    let log_j: Vec<f64> = js.iter().map(|j| (j.unsigned_abs() as f64 + 3.0).ln().sqrt()).collect();
    // Prefix sums are read at λ − 1 and Λ.
    let mut marks: Vec<usize> = grid.pairs.iter().flat_map(|&(l, u)| [l as usize - 1, u as usize]).collect();
    marks.sort_unstable();
    marks.dedup();
    let pair_marks: Vec<(usize, usize)> = grid
        .pairs
        .iter()
        .map(|&(l, u)| (marks.binary_search(&(l as usize - 1)).unwrap(), marks.binary_search(&(u as usize)).unwrap()))
        .collect();

    let xs: Vec<Vec<f64>> = seeds
        .iter()
        .map(|&s| (0..=k_max).map(|k| p.draw(s, k)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let alphas = crate::hypotheses::linspace(-m, m, grid.alpha_points);

    // Per α: the CF table is shared by all seeds.
    let per_alpha: Vec<Vec<f64>> = alphas
        .par_chunks(CHUNK.min(8))
        .flat_map_iter(|chunk| {
            chunk
                .iter()
                .map(|&alpha| {
                    let phi: Vec<Vec<Complex64>> =
                        laws.iter().map(|law| js.iter().map(|&j| law.char_fn(j as f64 * alpha)).collect()).collect();
                    xs.iter()
                        .map(|x| {
                            let mut prefix = vec![Complex64::new(0.0, 0.0); js.len()];
                            let mut snapshots = vec![vec![Complex64::new(0.0, 0.0); js.len()]; marks.len()];
                            let mut next = marks.iter().position(|&mk| mk >= 1).unwrap_or(marks.len());
                            for k in 1..=k_max as usize {
                                let c = coeff[k];
                                if c != Complex64::new(0.0, 0.0) {
                                    let w = unit_phase(alpha * x[k]);
                                    let winv = w.conj();
                                    let mut up = w;
                                    let mut down = winv;
                                    for (idx, &j) in js.iter().enumerate() {
                                        let e = if j > 0 { up } else { down };
                                        prefix[idx] += c * (e - phi[k][idx]);
                                        if j > 0 {
                                            up *= w;
                                        } else {
                                            down *= winv;
                                        }
                                    }
                                }
                                while next < marks.len() && marks[next] == k {
                                    snapshots[next].copy_from_slice(&prefix);
                                    next += 1;
                                }
                            }
                            let mut best = 0.0f64;
                            for (pi, &(lm, um)) in pair_marks.iter().enumerate() {
                                for idx in 0..js.len() {
                                    let v = (snapshots[um][idx] - snapshots[lm][idx]).norm() / (norms[pi] * log_j[idx]);
                                    best = best.max(v);
                                }
                            }
                            best
                        })
                        .collect::<Vec<f64>>()
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let per_seed: Vec<f64> = (0..seeds.len()).map(|s| per_alpha.iter().map(|v| v[s]).fold(0.0, f64::max)).collect();
    let value = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
    Ok(SupStat { value, per_seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::TailRule;

    fn gaussian_setup(seed: u64) -> SeriesRealization {
        SeriesRealization::new(
            seed,
            ProcessFamily::gaussian("3*sqrt(log(k+2))", "0").unwrap(),
            CoefficientSequence::power_law(0.8, 1.0).unwrap(),
            FourierFunction::cosine_pair(1),
        )
        .unwrap()
    }

    #[test]
    fn cache_extension_keeps_existing_values() {
        let r = gaussian_setup(9);
        let first = r.xs(10).unwrap();
        let longer = r.xs(100).unwrap();
        assert_eq!(&longer[..=10], &first[..]);
        let fresh = gaussian_setup(9);
        assert_eq!(fresh.x(57).unwrap(), longer[57]);
        assert_eq!(fresh.materialized(), 58);
    }

    #[test]
    fn partial_sum_matches_direct_recomputation() {
        let r = gaussian_setup(4);
        let alpha = 1.37;
        let s = r.partial_sum(50, alpha).unwrap();
        let mut direct = Complex64::new(0.0, 0.0);
        for k in 0..=50u64 {
            let x = r.family().draw(4, k).unwrap();
            direct += r.coefficients().get(k) * r.function().evaluate(alpha * x);
        }
        assert!((s - direct).norm() < 1e-12);
    }

    #[test]
    fn single_term_has_coefficient_modulus() {
        let a = CoefficientSequence::zero().with_a0(Complex64::new(0.0, 2.5));
        let r = SeriesRealization::new(1, ProcessFamily::uniform_interval("0", "1").unwrap(), a, FourierFunction::monomial(1)).unwrap();
        assert!((r.partial_sum(0, 0.77).unwrap().norm() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn zero_coefficients_give_zero_sums() {
        let r = SeriesRealization::new(
            3,
            ProcessFamily::gaussian("1", "0").unwrap(),
            CoefficientSequence::zero(),
            FourierFunction::cosine_pair(2),
        )
        .unwrap();
        assert_eq!(r.partial_sum(40, 0.3).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(log_bound_ratio(&r, &[0.5, 3.0, -7.0], 40).unwrap(), 0.0);
    }

    #[test]
    fn centered_sums_vanish_for_constants_and_point_masses() {
        let a = CoefficientSequence::power_law(0.7, 1.0).unwrap();
        let constant_f = FourierFunction::new([(0, Complex64::new(1.0, 0.0))]).unwrap();
        let r = SeriesRealization::new(2, ProcessFamily::gaussian("2", "0").unwrap(), a.clone(), constant_f).unwrap();
        assert!(r.centered_partial_sum(30, 1.2).unwrap().norm() < 1e-13);
        let r = SeriesRealization::new(2, ProcessFamily::constant(3), a, FourierFunction::cosine_pair(1)).unwrap();
        for alpha in [0.1, 0.7, 2.3] {
            assert!(r.centered_partial_sum(30, alpha).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn finite_support_profile_reaches_zero() {
        let a = CoefficientSequence::explicit(vec![Complex64::new(1.0, 0.0); 20], TailRule::Zero).unwrap();
        let r = SeriesRealization::new(5, ProcessFamily::gaussian("1", "0").unwrap(), a, FourierFunction::monomial(1)).unwrap();
        let w = CompactWindow::avoiding_zero(1.0, 2.0, 129, 1).unwrap();
        let d = cauchy_diagnostic(&r, &w, &dyadic_checkpoints(2, 8), false).unwrap();
        for e in &d.cauchy_profile {
            if e.n >= 20 {
                assert_eq!((e.sup, e.guard), (0.0, 0.0));
            }
        }
        assert_eq!(d.verdict, Verdict::CertifiedBounded);
    }

    #[test]
    fn checkpoints_must_increase() {
        let r = gaussian_setup(1);
        let w = CompactWindow::avoiding_zero(1.0, 2.0, 33, 1).unwrap();
        assert!(cauchy_diagnostic(&r, &w, &[4, 4, 8], true).is_err());
    }

    #[test]
    fn guard_bounds_fine_grid_sup() {
        let r = gaussian_setup(11);
        let coarse = CompactWindow::avoiding_zero(1.0, 2.0, 65, 1).unwrap();
        let fine = CompactWindow::avoiding_zero(1.0, 2.0, 8193, 1).unwrap();
        let c = cauchy_diagnostic(&r, &coarse, &[16, 32, 64], true).unwrap();
        let f = cauchy_diagnostic(&r, &fine, &[16, 32, 64], true).unwrap();
        for (ce, fe) in c.cauchy_profile.iter().zip(&f.cauchy_profile) {
            assert!(fe.sup >= ce.sup);
            assert!(fe.sup <= ce.sup + ce.guard, "{} > {} + {}", fe.sup, ce.sup, ce.guard);
        }
    }

    #[test]
    fn cauchy_mean_part_has_no_guard_at_the_origin() {
        let fam = ProcessFamily::new(
            crate::processes::LawTemplate::ScaleShift {
                base: crate::processes::BaseLaw::Cauchy { scale: 1.0 },
                sigma: crate::expr::ParamExpr::parse("1").unwrap(),
                mu: crate::expr::ParamExpr::parse("0").unwrap(),
            },
            0.5,
            None,
        )
        .unwrap();
        let r = SeriesRealization::new(1, fam, CoefficientSequence::power_law(1.0, 1.0).unwrap(), FourierFunction::monomial(1)).unwrap();
        let w = CompactWindow::symmetric(1.0, 33, 1).unwrap();
        assert!(matches!(cauchy_diagnostic(&r, &w, &[4, 8, 16], true), Err(Error::GridTooCoarse(_))));
        assert!(cauchy_diagnostic(&r, &w, &[4, 8, 16], false).is_ok());
    }

    #[test]
    fn sup_stat_single_pair_is_bounded_by_two() {
        let p = ProcessFamily::gaussian("1", "0").unwrap();
        let a = CoefficientSequence::explicit(vec![Complex64::new(1.0, 0.0)], TailRule::Zero).unwrap();
        let grid = SupStatGrid { pairs: vec![(1, 1)], j_max: 1, alpha_points: 65 };
        let s = normalized_sup_stat(&p, &a, 1.0, &grid, &[1, 2, 3, 4]).unwrap();
        let phi1 = p.moment_bound(1).unwrap();
        let cap = 2.0 / (phi1.ln() * 4f64.ln()).sqrt();
        assert!(s.value <= cap && s.value > 0.0);
    }

    #[test]
    fn sup_stat_never_decreases_on_a_superset_grid() {
        let p = ProcessFamily::gaussian("3*sqrt(log(k+2))", "0").unwrap();
        let a = CoefficientSequence::power_law(0.8, 1.0).unwrap();
        let g = SupStatGrid::geometric(64, 1, 4, 17);
        let big = g.doubled(64, 1);
        let seeds = [1, 2, 3];
        let s = normalized_sup_stat(&p, &a, 1.0, &g, &seeds).unwrap();
        let b = normalized_sup_stat(&p, &a, 1.0, &big, &seeds).unwrap();
        for (x, y) in s.per_seed.iter().zip(&b.per_seed) {
            assert!(y >= x);
        }
    }

    #[test]
    fn sup_stat_matches_direct_evaluation() {
        let p = ProcessFamily::uniform_interval("k", "1").unwrap();
        let a = CoefficientSequence::power_law(0.6, 1.0).unwrap();
        let grid = SupStatGrid { pairs: vec![(2, 9)], j_max: 3, alpha_points: 9 };
        let s = normalized_sup_stat(&p, &a, 2.0, &grid, &[7]).unwrap();
        let mut best = 0.0f64;
        let e: f64 = (2..=9u64).map(|k| a.get(k).norm_sqr()).sum();
        let norm = ((2.0 * p.moment_bound(9).unwrap()).ln() * e).sqrt();
        for i in 0..9 {
            let alpha = -2.0 + 4.0 * i as f64 / 8.0;
            for j in 1..=3i64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 2..=9u64 {
                    let x = p.draw(7, k).unwrap();
                    acc += a.get(k) * (unit_phase(alpha * j as f64 * x) - p.char_fn(k, j as f64 * alpha).unwrap());
                }
                best = best.max(acc.norm() / (norm * (j as f64 + 3.0).ln().sqrt()));
            }
        }
        assert!((s.value - best).abs() < 1e-12 * best);
    }

    #[test]
    fn banded_alphas_are_symmetric_and_cover_the_range() {
        let v = banded_alphas(100.0, 4);
        assert_eq!(v.len(), 2 * 4 * 8);
        assert!(v.iter().all(|a| a.abs() <= 100.0));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v[0], -v[v.len() - 1]);
    }

    #[test]
    fn running_ratio_is_monotone() {
        let prof = vec![(-3.0, 0.2), (0.5, 0.1), (2.0, 0.4), (9.0, 0.3)];
        let run = running_ratio(&prof, &[1.0, 4.0, 10.0]);
        assert_eq!(run, vec![(1.0, 0.1), (4.0, 0.4), (10.0, 0.4)]);
    }
}
