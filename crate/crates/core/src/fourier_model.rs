//! Periodic test functions given by finitely many Fourier coefficients.
//!
//! A function `f(α) = Σ_j f̂(j) e^{2iπαj}` is stored as a frequency-sorted
//! table, so evaluation order (and therefore rounding) is fixed. Functions
//! with infinite support enter by truncation; the discarded part changes
//! `f` uniformly by at most the truncated tail of `‖f‖`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::{sum, ComplexSum};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierFunction {
    coeffs: BTreeMap<i64, Complex64>,
}

impl FourierFunction {
    /// Builds a function from `(j, f̂(j))` pairs; frequencies must be
    /// distinct and every coefficient finite.
    pub fn new(pairs: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (j, c) in pairs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("coefficient at j={j} is not finite")));
            }
            if coeffs.insert(j, c).is_some() {
                return Err(Error::InvalidParameter(format!("frequency {j} given twice")));
            }
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `e^{2iπjα}`.
    pub fn monomial(j: i64) -> Self {
        Self::new([(j, Complex64::new(1.0, 0.0))]).expect("finite")
    }

    /// `2 cos(2πjα)`, the real test function with `f̂(±j) = 1`.
    pub fn cosine_pair(j: i64) -> Self {
        assert!(j != 0, "cosine_pair needs a nonzero frequency");
        Self::new([(-j, Complex64::new(1.0, 0.0)), (j, Complex64::new(1.0, 0.0))]).expect("finite")
    }

    pub fn coefficient(&self, j: i64) -> Complex64 {
        self.coeffs.get(&j).copied().unwrap_or_default()
    }

    /// Nonzero-or-stored coefficients in increasing frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&j, &c)| (j, c))
    }

    pub fn is_mean_zero(&self) -> bool {
        self.coefficient(0) == Complex64::new(0.0, 0.0)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest `|j|` in the support, 0 for the empty function.
    pub fn max_frequency(&self) -> u64 {
        self.coeffs.keys().map(|j| j.unsigned_abs()).max().unwrap_or(0)
    }

    /// `Σ_j |j|·|f̂(j)|`, the Lipschitz weight of `α ↦ f(α)` up to `2π`.
    pub fn frequency_weighted_norm(&self) -> f64 {
        sum(self.iter().map(|(j, c)| j.unsigned_abs() as f64 * c.norm()))
    }

    pub fn evaluate(&self, alpha: f64) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (j, c) in self.iter() {
            acc.add(c * unit_phase(alpha * j as f64));
        }
        acc.value()
    }

    /// `‖f‖ = Σ |f̂(j)|`.
    pub fn norm_a(&self) -> f64 {
        sum(self.iter().map(|(_, c)| c.norm()))
    }

    /// `|||f||| = Σ |f̂(j)| √log(|j|+3)`, natural logarithm.
    pub fn norm_b(&self) -> f64 {
        sum(self.iter().map(|(j, c)| c.norm() * ((j.unsigned_abs() as f64 + 3.0).ln()).sqrt()))
    }
}

/// `e^{2iπx}` with the argument reduced mod 1 first, which keeps the phase
/// accurate for the large arguments `αX_k` produced by the engine.
#[inline]
pub fn unit_phase(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (2.0 * PI * r).sin_cos();
    Complex64::new(c, s)
}

impl Add for &FourierFunction {
    type Output = FourierFunction;

    fn add(self, rhs: &FourierFunction) -> FourierFunction {
        let mut coeffs = self.coeffs.clone();
        for (j, c) in rhs.iter() {
            *coeffs.entry(j).or_default() += c;
        }
        FourierFunction { coeffs }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffEntry {
    j: i64,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FourierFunctionJson {
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for FourierFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FourierFunctionJson {
            coeffs: self.iter().map(|(j, c)| CoeffEntry { j, re: c.re, im: c.im }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FourierFunctionJson::deserialize(d)?;
        FourierFunction::new(raw.coeffs.into_iter().map(|e| (e.j, Complex64::new(e.re, e.im))))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        let f = FourierFunction::monomial(1);
        assert!((f.evaluate(0.0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((f.evaluate(0.5) - c(-1.0, 0.0)).norm() < 1e-15);
        let g = FourierFunction::new([(-2, c(0.5, 0.0)), (2, c(0.5, 0.0))]).unwrap();
        assert!(g.evaluate(0.125).norm() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(FourierFunction::zero().norm_a(), 0.0);
        assert_eq!(FourierFunction::zero().norm_b(), 0.0);
        assert_eq!(FourierFunction::monomial(1).norm_a(), 1.0);
        let f = FourierFunction::new([(-3, c(0.0, 2.0)), (5, c(-1.0, 0.0))]).unwrap();
        assert_eq!(f.norm_a(), 3.0);
        assert!((FourierFunction::monomial(1).norm_b() - 4f64.ln().sqrt()).abs() < 1e-15);
        assert!((FourierFunction::monomial(1).norm_b() - 1.17741).abs() < 1e-5);
        let g = FourierFunction::new([(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        assert!((g.norm_b() - (3f64.ln().sqrt() + 4f64.ln().sqrt())).abs() < 1e-15);
    }

    #[test]
    fn mean_zero_flag() {
        assert!(FourierFunction::cosine_pair(1).is_mean_zero());
        assert!(!FourierFunction::monomial(0).is_mean_zero());
        assert!(FourierFunction::zero().is_mean_zero());
    }

    #[test]
    fn rejects_duplicates_and_non_finite() {
        assert!(FourierFunction::new([(1, c(1.0, 0.0)), (1, c(2.0, 0.0))]).is_err());
        assert!(FourierFunction::new([(1, c(f64::NAN, 0.0))]).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let f: FourierFunction =
            serde_json::from_str(r#"{"coeffs":[{"j":2,"re":0.5,"im":0.0},{"j":-1,"re":1.0,"im":-2.0}]}"#).unwrap();
        assert_eq!(f.coefficient(-1), c(1.0, -2.0));
        let back: FourierFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FourierFunction>(r#"{"coeffs":[{"j":1,"re":1},{"j":1,"re":2}]}"#).is_err());
        assert!(serde_json::from_str::<FourierFunction>(r#"{"coeffs":[],"extra":1}"#).is_err());
    }

    fn arb_function() -> impl Strategy<Value = FourierFunction> {
        prop::collection::btree_map(-20i64..20, (-3.0f64..3.0, -3.0f64..3.0), 0..8)
            .prop_map(|m| FourierFunction::new(m.into_iter().map(|(j, (a, b))| (j, c(a, b)))).unwrap())
    }

    proptest! {
        #[test]
        fn periodic_in_alpha(f in arb_function(), alpha in -50.0f64..50.0) {
            let d = (f.evaluate(alpha + 1.0) - f.evaluate(alpha)).norm();
            prop_assert!(d <= 1e-9 * (1.0 + f.norm_a()));
        }

        #[test]
        fn b_norm_dominates_a_norm(f in arb_function()) {
            prop_assert!(f.norm_b() >= 3f64.ln().sqrt() * f.norm_a() * (1.0 - 1e-14));
        }

        #[test]
        fn evaluate_is_linear(f in arb_function(), g in arb_function(), alpha in -5.0f64..5.0) {
            let lhs = (&f + &g).evaluate(alpha);
            let rhs = f.evaluate(alpha) + g.evaluate(alpha);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + f.norm_a() + g.norm_a()));
        }

        #[test]
        fn modulus_bounded_by_a_norm(f in arb_function(), alpha in -5.0f64..5.0) {
            prop_assert!(f.evaluate(alpha).norm() <= f.norm_a() * (1.0 + 1e-14) + 1e-15);
        }
    }
}
