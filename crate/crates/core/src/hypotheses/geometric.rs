//! Geometric sums of a CF for convolution-power processes.
//!
//! When `X_k` is the `k`-fold convolution of one law, `Σ_{k=1}^N φ_k(t)` is
//! a geometric sum in `φ(t)`. Frequencies split into a low set, where
//! `|1 − φ|` stays away from zero, and a high set, where the decay
//! `|t|^δ|φ(t)| ≤ q` forces the ratio below 1/2.

use serde::{Deserialize, Serialize};

use super::{linspace, CompactWindow};
use crate::error::{Error, Result};
use crate::processes::BaseLaw;

/// `|φ| ≥ 1 − APERIODIC_TOL` counts as a unit-modulus point.
const APERIODIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricBound {
    /// `sup_{N ≤ N_max} sup_{α, 1 ≤ j ≤ j_max} |Σ_{k=1}^N φ(jα)^k|`.
    pub scanned_sup: f64,
    pub witness_t: f64,
    pub witness_n: u64,
    pub delta: f64,
    /// `sup_t |t|^δ |φ(t)|`.
    pub q: f64,
    /// Half the distance from 0 to the window.
    pub epsilon: f64,
    /// Largest `j` with `j^δ ≤ ⌊2q/ε^δ⌋`; 0 when the low set is empty.
    pub j_split: u64,
    /// `2 / inf |1 − φ(t)|` over the low band.
    pub low_bound: f64,
    /// `r/(1 − r)` with `r = q/((j_split + 1)·d)^δ`.
    pub high_bound: f64,
    pub combined: f64,
    pub consistent: bool,
}

/// Scans `sup_t |t|^δ |φ(t)|` on a log grid over `[1e-4, 1e4]`; refuses
/// when the product still rises at the end of the grid.
fn decay_constant(base: &BaseLaw, delta: f64) -> Result<f64> {
    const POINTS: usize = 20_001;
    let (lo, hi) = (1e-4f64.ln(), 1e4f64.ln());
    let value = |i: usize| {
        let t = (lo + (hi - lo) * i as f64 / (POINTS - 1) as f64).exp();
        t.powf(delta) * base.char_fn(t).norm()
    };
    let best = (0..POINTS).map(value).fold(0.0, f64::max);
    // A bounded profile may approach its sup only asymptotically; a growing
    // one still rises over the last decade.
    if value(POINTS - 1) > 1.01 * value(POINTS - 1 - (POINTS - 1) / 8) {
        return Err(Error::InvalidParameter(format!(
            "|t|^{delta}·|φ(t)| keeps growing up to t = 1e4; no finite decay constant"
        )));
    }
    Ok(best)
}

pub fn convolution_geometric_bound(
    base: &BaseLaw,
    window: &CompactWindow,
    delta: f64,
    q: Option<f64>,
    n_max: u64,
) -> Result<GeometricBound> {
    window.validate()?;
    base.validate()?;
    if window.contains_zero() {
        return Err(Error::InvalidParameter("geometric bound needs a window away from 0".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("δ must be positive, got {delta}")));
    }
    let d = window.distance_to_zero();
    let alphas = window.grid(0);

    // Aperiodicity on the scanned frequencies, in scan order.
    for j in 1..=window.j_max {
        for &alpha in &alphas {
            let t = j as f64 * alpha;
            if base.char_fn(t).norm() >= 1.0 - APERIODIC_TOL {
                return Err(Error::AperiodicityViolated { t });
            }
        }
    }

    let q_scan = decay_constant(base, delta)?;
    let q = match q {
        Some(q) if q < q_scan * (1.0 - 1e-9) => {
            return Err(Error::InvalidParameter(format!("q = {q} is below the scanned sup {q_scan}")));
        }
        Some(q) => q,
        None => q_scan,
    };

    let epsilon = d / 2.0;
    let bracket = (2.0 * q / epsilon.powf(delta)).floor();
    let mut j_split = 0u64;
    while ((j_split + 1) as f64).powf(delta) <= bracket {
        j_split += 1;
    }

    let low_bound = if j_split == 0 {
        0.0
    } else {
        // inf |1 − φ| over the low band, less the largest drop between grid
        // points; the grid is refined once if that margin eats the minimum.
        let (t_lo, t_hi) = (d, j_split as f64 * window.max_abs());
        let slope = base.cf_envelope(t_lo, t_hi).map(|e| e.d1).unwrap_or(f64::INFINITY);
        let scan_inf = |n: usize| {
            let (mut inf, mut arg) = (f64::INFINITY, t_lo);
            for t in linspace(t_lo, t_hi, n) {
                let v = (1.0 - base.char_fn(t)).norm();
                if v < inf {
                    inf = v;
                    arg = t;
                }
            }
            let h = (t_hi - t_lo) / (n - 1) as f64;
            (inf - 0.5 * h * slope, inf, arg)
        };
        let (mut certified, inf, mut arg) = scan_inf(20_001);
        if !(certified > 0.0) && inf > 1e-9 && slope.is_finite() {
            let n = ((t_hi - t_lo) * slope / inf * 2.0).ceil().min(1e7) as usize + 1;
            (certified, _, arg) = scan_inf(n.max(20_001));
        }
        if !(certified > 0.0) {
            return Err(Error::AperiodicityViolated { t: arg });
        }
        2.0 / certified
    };
    let r = q / ((j_split + 1) as f64 * d).powf(delta);
    let high_bound = r / (1.0 - r);
    let combined = low_bound.max(high_bound);

    let mut scanned = (0.0, d, 0u64);
    for j in 1..=window.j_max {
        for &alpha in &alphas {
            let t = j as f64 * alpha;
            let phi = base.char_fn(t);
            let mut power = phi;
            let mut sum = num_complex::Complex64::new(0.0, 0.0);
            for n in 1..=n_max {
                sum += power;
                power *= phi;
                let v = sum.norm();
                if v > scanned.0 {
                    scanned = (v, t, n);
                }
            }
        }
    }

    Ok(GeometricBound {
        scanned_sup: scanned.0,
        witness_t: scanned.1,
        witness_n: scanned.2,
        delta,
        q,
        epsilon,
        j_split,
        low_bound,
        high_bound,
        combined,
        consistent: scanned.0 <= combined * (1.0 + 1e-9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn k12() -> CompactWindow {
        CompactWindow::avoiding_zero(1.0, 2.0, 65, 4).unwrap()
    }

    #[test]
    fn gaussian_geometric_oracle() {
        let b = convolution_geometric_bound(&BaseLaw::Gaussian, &k12(), 2.0, None, 50).unwrap();
        // sup_t t²e^{-2π²t²} = 1/(2π²e) at t = 1/(√2π).
        assert!((b.q - 1.0 / (2.0 * PI * PI * E)).abs() < 1e-6 * b.q);
        assert_eq!(b.j_split, 0);
        let r = (-2.0 * PI * PI).exp();
        assert!((b.scanned_sup - r / (1.0 - r) * (1.0 - r.powi(50))).abs() < 1e-20);
        assert!(b.consistent);
    }

    #[test]
    fn laplace_uses_both_bands() {
        let base = BaseLaw::Laplace { scale: 0.5 };
        let w = CompactWindow::avoiding_zero(0.2, 1.0, 65, 6).unwrap();
        let b = convolution_geometric_bound(&base, &w, 2.0, None, 200).unwrap();
        assert!(b.j_split >= 1);
        assert!(b.low_bound > 0.0 && b.high_bound < 1.0);
        assert!(b.consistent);
    }

    #[test]
    fn periodic_point_mass_is_refused() {
        let base = BaseLaw::PointMassMixture { points: vec![(1.0, 1.0)] };
        match convolution_geometric_bound(&base, &k12(), 1.0, None, 10) {
            Err(Error::AperiodicityViolated { t }) => assert_eq!(t, 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_term_is_at_most_one() {
        let base = BaseLaw::Exponential { lambda: 1.0 };
        let b = convolution_geometric_bound(&base, &k12(), 1.0, None, 1).unwrap();
        assert!(b.scanned_sup <= 1.0);
        assert_eq!(b.witness_n, 1);
    }

    #[test]
    fn understated_q_is_rejected() {
        assert!(convolution_geometric_bound(&BaseLaw::Gaussian, &k12(), 2.0, Some(1e-3), 5).is_err());
    }
}
