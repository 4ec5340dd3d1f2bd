//! Log-log trend fitting used to turn finite scans into verdicts.

use serde::{Deserialize, Serialize};

/// Slope below which a profile counts as decreasing.
pub const DECREASING_SLOPE: f64 = -0.1;
/// Slope above which a profile counts as growing.
pub const GROWING_SLOPE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedBounded,
    RefutedGrowing,
    Inconclusive,
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Slope of `log y` against `log x` over the last half of the profile.
///
/// Entries with non-positive coordinates are dropped. Returns `None` when
/// fewer than two usable points remain.
pub fn loglog_tail_slope(profile: &[(f64, f64)]) -> Option<f64> {
    let start = profile.len() / 2;
    let tail: Vec<(f64, f64)> = profile[start.min(profile.len().saturating_sub(2))..]
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    ols_slope(&tail)
}

/// Verdict for a profile that should decrease towards zero.
pub fn decay_verdict(profile: &[(f64, f64)]) -> Verdict {
    // A profile that has reached exactly zero over its last half has decayed.
    if !profile.is_empty() && profile[profile.len() / 2..].iter().all(|p| p.1 == 0.0) {
        return Verdict::CertifiedBounded;
    }
    match loglog_tail_slope(profile) {
        Some(s) if s < DECREASING_SLOPE => Verdict::CertifiedBounded,
        Some(s) if s > GROWING_SLOPE => Verdict::RefutedGrowing,
        _ => Verdict::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_slope_is_recovered() {
        let p: Vec<(f64, f64)> = (1..20).map(|i| (i as f64, 3.0 * (i as f64).powf(-0.7))).collect();
        let s = loglog_tail_slope(&p).unwrap();
        assert!((s + 0.7).abs() < 1e-12);
    }

    #[test]
    fn verdicts_follow_slope_thresholds() {
        let dec: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 1.0 / i as f64)).collect();
        let grow: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, i as f64)).collect();
        let flat: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 1.0)).collect();
        assert_eq!(decay_verdict(&dec), Verdict::CertifiedBounded);
        assert_eq!(decay_verdict(&grow), Verdict::RefutedGrowing);
        assert_eq!(decay_verdict(&flat), Verdict::Inconclusive);
        assert_eq!(decay_verdict(&[(1.0, 0.0), (2.0, 0.0)]), Verdict::CertifiedBounded);
    }
}
