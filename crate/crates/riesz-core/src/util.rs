//! Small numeric helpers shared across modules.

use num_complex::Complex64;

/// Kahan-compensated accumulator for `f64`.
///
/// The term loops run to tens of millions of summands; naive summation
/// loses 3-4 digits there, compensation keeps the error at a few ulps.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Componentwise Kahan accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Principal-branch power `(1 + i y)^alpha` computed from log and
/// atan2 directly, avoiding the intermediate `Complex::powf` ln call
/// in the innermost kernel loops.
#[inline]
pub fn one_plus_iy_pow(y: f64, alpha: f64) -> Complex64 {
    let log_mod = 0.5 * (y.mul_add(y, 1.0)).ln();
    let arg = y.atan2(1.0);
    let scale = (alpha * log_mod).exp();
    let phase = alpha * arg;
    Complex64::new(scale * phase.cos(), scale * phase.sin())
}

/// Principal-branch power `w^alpha` for `w` off the closed negative
/// real axis (all uses here have `Re w > 0`).
#[inline]
pub fn principal_pow(w: Complex64, alpha: f64) -> Complex64 {
    let log_mod = 0.5 * w.norm_sqr().ln();
    let arg = w.im.atan2(w.re);
    let scale = (alpha * log_mod).exp();
    let phase = alpha * arg;
    Complex64::new(scale * phase.cos(), scale * phase.sin())
}
