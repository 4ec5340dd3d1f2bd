//! Compensated accumulation for long series.
//!
//! Power-law coefficient tails push partial sums into the regime where
//! naive accumulation drops the trailing digits; Neumaier's variant of
//! Kahan summation keeps the running error term even when the addend is
//! larger than the running sum.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of complex values, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<NeumaierSum>().value()
}

pub fn sum_complex(values: impl IntoIterator<Item = Complex64>) -> Complex64 {
    values.into_iter().collect::<ComplexSum>().value()
}
