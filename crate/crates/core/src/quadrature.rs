//! Adaptive Gauss–Kronrod (7/15) integration.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`, bisecting
/// the panel with the largest error estimate first.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    const MAX_PANELS: usize = 4000;
    if a == b {
        return Ok(0.0);
    }
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::QuadratureUnderResolved(format!(
                "adaptive quadrature on [{a}, {b}] stalled at error {total_err:e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
    }
    // Re-sum from the panels to shed drift accumulated by the running updates.
    Ok(crate::summation::sum(heap.iter().map(|p| p.value)))
}

/// Integrates `f` over `[start, +inf)` through `x = start + s/(1-s)`.
pub fn integrate_upper_half_line<F: Fn(f64) -> f64>(f: F, start: f64, rel_tol: f64) -> Result<f64> {
    let g = |s: f64| {
        let one_minus = 1.0 - s;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let x = start + s / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() { v } else { 0.0 }
    };
    integrate(g, 0.0, 1.0, rel_tol, 1e-300)
}

/// Integrates `f` over `(-inf, end]`.
pub fn integrate_lower_half_line<F: Fn(f64) -> f64>(f: F, end: f64, rel_tol: f64) -> Result<f64> {
    integrate_upper_half_line(|y| f(-y), -end, rel_tol)
}
