//! Abel summation bound for weighted CF sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_hprime, CompactWindow, ScanOptions};
use crate::coefficients::CoefficientSequence;
use crate::error::{Error, Result};
use crate::processes::ProcessFamily;
use crate::summation::{ComplexSum, NeumaierSum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbelBound {
    /// `|a_n| + |a_m|`.
    pub endpoints: f64,
    /// `Σ_{k=n+1}^m |a_k − a_{k−1}|`.
    pub variation: f64,
    /// Scanned `sup_{N ≤ m} sup_α sup_j |Σ_{k=0}^N φ_k(jα)|`.
    pub sup_partial: f64,
    pub bound: f64,
    /// Relative gap between the two sides of the summation-by-parts
    /// identity at the sup witness.
    pub identity_residual: f64,
}

/// Both sides of
/// `Σ_{k=n}^m a_k φ_k = −a_n Φ_n + a_m Φ_{m+1} + Σ_{k=n+1}^m (a_{k−1} − a_k) Φ_k`
/// with `Φ_p = Σ_{k<p} φ_k`. Both slices must cover indices `0..=m`.
pub fn abel_identity_sides(a: &[Complex64], phi: &[Complex64], n: usize, m: usize) -> (Complex64, Complex64) {
    assert!(n <= m && m < a.len() && m < phi.len(), "indices out of range");
    let mut big_phi = Vec::with_capacity(m + 2);
    let mut acc = ComplexSum::new();
    big_phi.push(Complex64::new(0.0, 0.0));
    for &z in &phi[..=m] {
        acc.add(z);
        big_phi.push(acc.value());
    }
    let lhs: Complex64 = (n..=m).map(|k| a[k] * phi[k]).collect::<ComplexSum>().value();
    let mut rhs = ComplexSum::new();
    rhs.add(-a[n] * big_phi[n]);
    rhs.add(a[m] * big_phi[m + 1]);
    for k in n + 1..=m {
        rhs.add((a[k - 1] - a[k]) * big_phi[k]);
    }
    (lhs, rhs.value())
}

/// `[|a_m| + |a_n| + Σ_{k=n+1}^m |a_k − a_{k−1}|] · sup_{N,α,j} |Σ_{k≤N} φ_k(jα)|`.
pub fn abel_split_bound(
    a: &CoefficientSequence,
    p: &ProcessFamily,
    window: &CompactWindow,
    n: u64,
    m: u64,
    opts: &ScanOptions,
) -> Result<AbelBound> {
    if n >= m {
        return Err(Error::InvalidParameter(format!("Abel bound needs n < m, got n={n}, m={m}")));
    }
    let report = check_hprime(p, window, m, opts)?;
    let endpoints = a.get(n).norm() + a.get(m).norm();
    let variation = (n + 1..=m).map(|k| (a.get(k) - a.get(k - 1)).norm()).collect::<NeumaierSum>().value();

    let t = report.witness.j as f64 * report.witness.alpha;
    let coeffs: Vec<Complex64> = (0..=m).map(|k| a.get(k)).collect();
    let phi = (0..=m).map(|k| p.char_fn(k, t)).collect::<Result<Vec<_>>>()?;
    let (lhs, rhs) = abel_identity_sides(&coeffs, &phi, n as usize, m as usize);
    // Residual relative to the size of the individual terms of the right side.
    let mut partial = ComplexSum::new();
    let mut largest: f64 = 0.0;
    for z in &phi {
        partial.add(*z);
        largest = largest.max(partial.value().norm());
    }
    let scale = ((endpoints + variation) * largest).max(f64::MIN_POSITIVE);
    let identity_residual = (lhs - rhs).norm() / scale;

    Ok(AbelBound {
        endpoints,
        variation,
        sup_partial: report.sup_value,
        bound: (endpoints + variation) * (report.sup_value + report.guard),
        identity_residual,
    })
}
