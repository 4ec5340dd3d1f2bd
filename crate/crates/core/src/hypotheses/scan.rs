//! Largest `|P_{i'} − P_i|` over index pairs of a prefix-sum path.
//!
//! For a path `P_0, P_1, …` the sum of terms `i..i'` is `P_{i'} − P_i`. The
//! hypotheses ask for the largest such sum with at least two terms
//! (`i' ≥ i + 2`) and `i` at or beyond a start index.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Best pair for a start index: (modulus, i, i').
pub type PairSup = (f64, usize, usize);

/// Paths up to this length are searched exhaustively.
pub const EXACT_LEN: usize = 160;

/// Number of projection directions on the half circle for long complex paths.
pub const DIRECTIONS: usize = 64;

/// Relative amount by which the directional search may undershoot the true
/// maximum: the best direction is within `π/(2D)` of the optimal one.
pub fn projection_slack() -> f64 {
    1.0 / (PI / (2.0 * DIRECTIONS as f64)).cos() - 1.0
}

/// For every `s` in `starts`, the largest `|p[i'] − p[i]|` with `s ≤ i` and
/// `i + 2 ≤ i' < p.len()`. Entries with no admissible pair are `(0, s, s)`.
/// The returned modulus is always the exact value at the returned pair; it
/// is the true maximum when the path is real or short, and within
/// [`projection_slack`] of it otherwise.
pub fn suffix_pair_sups(p: &[Complex64], starts: &[usize]) -> (Vec<PairSup>, bool) {
    let len = p.len();
    let mut best_from: Vec<PairSup> = (0..len).map(|i| (0.0, i, i)).collect();
    let real = p.iter().all(|z| z.im == 0.0);
    let exact = real || len <= EXACT_LEN;
    if len >= 3 {
        if len <= EXACT_LEN {
            for i in 0..len - 2 {
                for j in i + 2..len {
                    let v = (p[j] - p[i]).norm();
                    if v > best_from[i].0 {
                        best_from[i] = (v, i, j);
                    }
                }
            }
        } else {
            let dirs = if real { 1 } else { DIRECTIONS };
            let mut x = vec![0.0; len];
            for d in 0..dirs {
                let theta = PI * d as f64 / dirs as f64;
                let rot = Complex64::new(theta.cos(), -theta.sin());
                for (xi, z) in x.iter_mut().zip(p) {
                    *xi = (z * rot).re;
                }
                let (mut rmax, mut amax) = (f64::NEG_INFINITY, 0);
                let (mut rmin, mut amin) = (f64::INFINITY, 0);
                for i in (0..len - 2).rev() {
                    let j = i + 2;
                    if x[j] > rmax {
                        rmax = x[j];
                        amax = j;
                    }
                    if x[j] < rmin {
                        rmin = x[j];
                        amin = j;
                    }
                    let cand = if rmax - x[i] >= x[i] - rmin { amax } else { amin };
                    let v = (p[cand] - p[i]).norm();
                    if v > best_from[i].0 {
                        best_from[i] = (v, i, cand);
                    }
                }
            }
        }
    }
    // Suffix maximum; ties keep the earliest pair so results are reproducible.
    for i in (0..len.saturating_sub(1)).rev() {
        if best_from[i + 1].0 > best_from[i].0 {
            best_from[i] = best_from[i + 1];
        }
    }
    let out = starts
        .iter()
        .map(|&s| if s < len { best_from[s] } else { (0.0, s, s) })
        .collect();
    (out, exact)
}

/// Prefix sums `P_0 = 0, P_{i+1} = P_i + z_i` with compensated accumulation.
pub fn prefix_sums(terms: &[Complex64]) -> Vec<Complex64> {
    let mut acc = crate::summation::ComplexSum::new();
    let mut out = Vec::with_capacity(terms.len() + 1);
    out.push(Complex64::new(0.0, 0.0));
    for &z in terms {
        acc.add(z);
        out.push(acc.value());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(p: &[Complex64], s: usize) -> f64 {
        let mut best: f64 = 0.0;
        for i in s..p.len() {
            for j in i + 2..p.len() {
                best = best.max((p[j] - p[i]).norm());
            }
        }
        best
    }

    #[test]
    fn ones_give_longest_run() {
        let terms = vec![Complex64::new(1.0, 0.0); 10];
        let p = prefix_sums(&terms);
        let (s, exact) = suffix_pair_sups(&p, &[0, 3, 9, 10]);
        assert!(exact);
        assert_eq!(s[0], (10.0, 0, 10));
        assert_eq!(s[1].0, 7.0);
        assert_eq!(s[2].0, 0.0);
        assert_eq!(s[3].0, 0.0);
    }

    proptest! {
        #[test]
        fn short_paths_are_exact(terms in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..40)) {
            let z: Vec<Complex64> = terms.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let p = prefix_sums(&z);
            let starts: Vec<usize> = (0..p.len()).collect();
            let (s, _) = suffix_pair_sups(&p, &starts);
            for (i, &(v, a, b)) in s.iter().enumerate() {
                prop_assert!((v - brute(&p, i)).abs() < 1e-12);
                if v > 0.0 {
                    prop_assert!(a >= i && b >= a + 2);
                    prop_assert!(((p[b] - p[a]).norm() - v).abs() == 0.0);
                }
            }
        }

        #[test]
        fn long_paths_within_slack(seed in 0u64..50) {
            use rand::Rng;
            let mut rng = crate::rng::stream(seed, 0);
            let z: Vec<Complex64> = (0..400).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let p = prefix_sums(&z);
            let (s, exact) = suffix_pair_sups(&p, &[0, 100]);
            prop_assert!(!exact);
            for (k, &start) in [0usize, 100].iter().enumerate() {
                let b = brute(&p, start);
                prop_assert!(s[k].0 <= b + 1e-12);
                prop_assert!(s[k].0 * (1.0 + projection_slack()) >= b - 1e-12);
            }
        }
    }
}
