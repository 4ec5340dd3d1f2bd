//! Bounds on `|φ|`, `|φ'|` and `|φ''|` over a band `t_lo ≤ |t| ≤ t_hi`.
//!
//! Grid scans use these to bound how much a CF sum can move between two
//! adjacent grid points, and to bound the contribution of frequencies
//! beyond the scanned range.

use std::f64::consts::PI;

use super::law::{BaseLaw, Law};

/// Upper bounds for `|φ|`, `|φ'|`, `|φ''|` on a band of `|t|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfEnvelope {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl CfEnvelope {
    const TRIVIAL: CfEnvelope = CfEnvelope { value: 1.0, d1: 0.0, d2: 0.0 };
}

/// `|sin x / x|` and its first two derivatives bounded on `x ≥ x_lo ≥ 0`.
/// The constants 0.44 and 1/3 are the global maxima of `|s'|` and `|s''|`.
fn sinc_envelope(x_lo: f64) -> CfEnvelope {
    if x_lo <= 0.0 {
        return CfEnvelope { value: 1.0, d1: 0.44, d2: 1.0 / 3.0 };
    }
    let x = x_lo;
    CfEnvelope {
        value: (1.0 / x).min(1.0),
        d1: (1.0 / x + 1.0 / (x * x)).min(0.44),
        d2: (1.0 / x + 2.0 / (x * x) + 2.0 / (x * x * x)).min(1.0 / 3.0),
    }
}

/// `min |sin πt|` over `lo ≤ t ≤ hi` (both non-negative); zero when the band
/// reaches an integer.
fn min_abs_sin_pi(lo: f64, hi: f64) -> f64 {
    if !hi.is_finite() || lo.floor() != hi.floor() || lo.fract() == 0.0 {
        return 0.0;
    }
    (PI * lo).sin().abs().min((PI * hi).sin().abs())
}

impl BaseLaw {
    /// Envelope over `τ_lo ≤ |τ| ≤ τ_hi`; `None` when the CF is not twice
    /// differentiable on the band (Cauchy at the origin) or a needed moment
    /// is infinite.
    pub fn cf_envelope(&self, tau_lo: f64, tau_hi: f64) -> Option<CfEnvelope> {
        let (lo, hi) = (tau_lo.abs(), tau_hi.abs());
        let clamp = |x: f64| x.max(lo).min(hi);
        Some(match self {
            BaseLaw::Gaussian => {
                let g = |t: f64| (-2.0 * PI * PI * t * t).exp();
                let peak1 = clamp(1.0 / (2.0 * PI));
                // (16π⁴τ² + 4π²)·G(τ) peaks at the same τ = 1/(2π).
                let h = |t: f64| (16.0 * PI.powi(4) * t * t + 4.0 * PI * PI) * g(t);
                CfEnvelope { value: g(lo), d1: 4.0 * PI * PI * peak1 * g(peak1), d2: h(peak1) }
            }
            BaseLaw::Laplace { scale } => {
                let c = 4.0 * PI * PI * scale * scale;
                let peak1 = clamp(1.0 / (3.0 * c).sqrt());
                let u = c * lo * lo;
                CfEnvelope {
                    value: 1.0 / (1.0 + u),
                    d1: 2.0 * c * peak1 / (1.0 + c * peak1 * peak1).powi(2),
                    d2: (6.0 * u + 2.0) * c / (1.0 + u).powi(3),
                }
            }
            BaseLaw::Exponential { lambda } => {
                let r2 = lambda * lambda + 4.0 * PI * PI * lo * lo;
                CfEnvelope {
                    value: lambda / r2.sqrt(),
                    d1: 2.0 * PI * lambda / r2,
                    d2: 8.0 * PI * PI * lambda / r2.powf(1.5),
                }
            }
            BaseLaw::Cauchy { scale } => {
                if lo <= 0.0 {
                    return None;
                }
                let v = (-2.0 * PI * scale * lo).exp();
                let w = 2.0 * PI * scale;
                CfEnvelope { value: v, d1: w * v, d2: w * w * v }
            }
            BaseLaw::PointMassMixture { points } => CfEnvelope {
                value: 1.0,
                d1: 2.0 * PI * points.iter().map(|(x, p)| p * x.abs()).sum::<f64>(),
                d2: 4.0 * PI * PI * points.iter().map(|(x, p)| p * x * x).sum::<f64>(),
            },
        })
    }
}

impl Law {
    /// Envelope of `φ_X` over `t_lo ≤ |t| ≤ t_hi` (`t_hi` may be infinite).
    pub fn cf_envelope(&self, t_lo: f64, t_hi: f64) -> Option<CfEnvelope> {
        let (lo, hi) = (t_lo.abs(), t_hi.abs());
        match self {
            Law::UniformInterval { mu, sigma } => {
                let s = sinc_envelope(PI * sigma * lo);
                let (w, a) = (2.0 * PI * mu.abs(), PI * sigma);
                Some(CfEnvelope {
                    value: s.value,
                    d1: w * s.value + a * s.d1,
                    d2: w * w * s.value + 2.0 * w * a * s.d1 + a * a * s.d2,
                })
            }
            Law::ScaleShift { base, sigma, mu } => {
                let w = 2.0 * PI * mu.abs();
                if *sigma == 0.0 {
                    return Some(CfEnvelope { value: 1.0, d1: w, d2: w * w });
                }
                let a = sigma.abs();
                let b = base.cf_envelope(a * lo, a * hi)?;
                Some(CfEnvelope {
                    value: b.value,
                    d1: w * b.value + a * b.d1,
                    d2: w * w * b.value + 2.0 * w * a * b.d1 + a * a * b.d2,
                })
            }
            Law::ConvPower { base, power } => {
                if *power == 0 {
                    return Some(CfEnvelope::TRIVIAL);
                }
                let k = *power as f64;
                let b = base.cf_envelope(lo, hi)?;
                let vk1 = b.value.powf(k - 1.0);
                let vk2 = if *power >= 2 { b.value.powf(k - 2.0) } else { 0.0 };
                Some(CfEnvelope {
                    value: b.value.powf(k),
                    d1: k * vk1 * b.d1,
                    d2: k * (k - 1.0) * vk2 * b.d1 * b.d1 + k * vk1 * b.d2,
                })
            }
            Law::UniformIntegers { lo: a, hi: b } => {
                let m2 = self.second_moment()?;
                let generic = CfEnvelope { value: 1.0, d1: 2.0 * PI * m2.sqrt(), d2: 4.0 * PI * PI * m2 };
                let s = min_abs_sin_pi(lo, hi);
                if s == 0.0 {
                    return Some(generic);
                }
                // φ(t) = e^{iπt(a+b)} D(t) with D(t) = sin(πnt)/(n sin πt).
                let n = (b - a + 1) as f64;
                let w = PI * (*a as f64 + *b as f64).abs();
                let v = (1.0 / (n * s)).min(1.0);
                let dd1 = PI / s + PI / (n * s * s);
                let dd2 = PI * PI * (n / s + 2.0 / (s * s) + 1.0 / (n * s) + 2.0 / (n * s * s * s));
                Some(CfEnvelope {
                    value: v,
                    d1: (w * v + dd1).min(generic.d1),
                    d2: (w * w * v + 2.0 * w * dd1 + dd2).min(generic.d2),
                })
            }
            Law::Poisson { .. } => {
                let m2 = self.second_moment()?;
                Some(CfEnvelope { value: 1.0, d1: 2.0 * PI * m2.sqrt(), d2: 4.0 * PI * PI * m2 })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sinc_derivs(x: f64) -> (f64, f64, f64) {
        let (s, c) = x.sin_cos();
        (s / x, (x * c - s) / (x * x), (-x * x * s - 2.0 * x * c + 2.0 * s) / (x * x * x))
    }

    #[test]
    fn sinc_constants_are_global_maxima() {
        let mut m1: f64 = 0.0;
        let mut m2: f64 = 0.0;
        for i in 1..200_000 {
            let x = i as f64 * 1e-4;
            let (_, d1, d2) = sinc_derivs(x);
            m1 = m1.max(d1.abs());
            m2 = m2.max(d2.abs());
        }
        assert!(m1 <= 0.44 && m1 > 0.43, "{m1}");
        assert!(m2 <= 1.0 / 3.0 + 1e-9, "{m2}");
    }

    /// Checks the envelope against finite-difference derivatives of the CF.
    fn check(law: &Law, lo: f64, hi: f64) {
        let env = law.cf_envelope(lo, hi).unwrap();
        let h = 1e-4;
        for i in 0..=400 {
            let t = lo + (hi - lo) * i as f64 / 400.0;
            for t in [t, -t] {
                let f0 = law.char_fn(t);
                let fp = law.char_fn(t + h);
                let fm = law.char_fn(t - h);
                let d1 = ((fp - fm) / (2.0 * h)).norm();
                let d2 = ((fp - 2.0 * f0 + fm) / (h * h)).norm();
                let slack = 1e-3 * (1.0 + env.d2);
                assert!(f0.norm() <= env.value + 1e-12, "{} value at {t}", law.label());
                assert!(d1 <= env.d1 + slack, "{} d1 at {t}: {d1} > {}", law.label(), env.d1);
                assert!(d2 <= env.d2 + slack, "{} d2 at {t}: {d2} > {}", law.label(), env.d2);
            }
        }
    }

    #[test]
    fn envelopes_bound_finite_differences() {
        let laws = [
            Law::UniformInterval { mu: 1.5, sigma: 0.7 },
            Law::ScaleShift { base: BaseLaw::Gaussian, sigma: 0.4, mu: 0.3 },
            Law::ScaleShift { base: BaseLaw::Laplace { scale: 0.5 }, sigma: 1.0, mu: 0.0 },
            Law::ScaleShift { base: BaseLaw::Exponential { lambda: 2.0 }, sigma: 1.0, mu: -0.5 },
            Law::ScaleShift { base: BaseLaw::Cauchy { scale: 0.3 }, sigma: 1.0, mu: 0.0 },
            Law::ConvPower { base: BaseLaw::Gaussian, power: 3 },
            Law::ConvPower { base: BaseLaw::Laplace { scale: 0.2 }, power: 5 },
            Law::UniformIntegers { lo: 4, hi: 8 },
            Law::Poisson { lambda: 1.5 },
        ];
        for law in &laws {
            check(law, 0.05, 2.0);
        }
        // Bands clear of the integers use the Dirichlet-kernel bounds.
        check(&Law::UniformIntegers { lo: 9, hi: 15 }, 0.3, 0.7);
        check(&Law::UniformIntegers { lo: 400, hi: 440 }, 1.2, 1.45);
        let tight = Law::UniformIntegers { lo: 400, hi: 440 }.cf_envelope(0.3, 0.7).unwrap();
        assert!((tight.value - 1.0 / (41.0 * (0.3 * PI).sin())).abs() < 1e-15);
    }

    #[test]
    fn cauchy_at_origin_has_no_envelope() {
        let law = Law::ScaleShift { base: BaseLaw::Cauchy { scale: 1.0 }, sigma: 1.0, mu: 0.0 };
        assert!(law.cf_envelope(0.0, 1.0).is_none());
        assert!(law.cf_envelope(0.5, 1.0).is_some());
    }
}
