//! Double-double arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`, which
//! carries roughly 106 bits of significand. The limit-law series alternates
//! with coefficients of magnitude up to about 3.46 while its tails fall below
//! 1e-19, so the sums are accumulated here and rounded once at the end.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: core::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiplies by `2^k`, exact unless the result leaves the normal range.
    pub fn ldexp(self, k: i32) -> Self {
        let half = k / 2;
        let s1 = 2f64.powi(half);
        let s2 = 2f64.powi(k - half);
        Self {
            hi: self.hi * s1 * s2,
            lo: self.lo * s1 * s2,
        }
    }

    /// `e^x - 1`, accurate relative to the result for small `|x|`.
    pub fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.5 {
            expm1_small(self)
        } else {
            self.exp() - Self::ONE
        }
    }

    pub fn exp(self) -> Self {
        if self.hi < -760.0 {
            return Self::ZERO;
        }
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * k;
        (expm1_small(r) + Self::ONE).ldexp(k as i32)
    }
}

// |x| < 0.5: halve ten times, sum the Taylor series, then undo the halving
// with expm1(2y) = expm1(y) * (expm1(y) + 2).
fn expm1_small(x: DoubleDouble) -> DoubleDouble {
    const HALVINGS: i32 = 10;
    const TERMS: u32 = 12;
    let r = x.ldexp(-HALVINGS);
    let mut term = r;
    let mut sum = r;
    for n in 2..=TERMS {
        term = term * r / f64::from(n);
        sum = sum + term;
    }
    for _ in 0..HALVINGS {
        sum = sum * (sum + 2.0);
    }
    sum
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: f64) -> Self {
        self + Self::from_f64(b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + q3
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: f64) -> Self {
        self / Self::from_f64(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DoubleDouble, hi: f64, lo: f64, rel: f64) {
        let diff = (a - DoubleDouble { hi, lo }).to_f64().abs();
        assert!(diff <= rel * hi.abs(), "{a:?} vs ({hi}, {lo}): diff {diff}");
    }

    // Reference values from a 50-digit evaluation.
    #[test]
    fn exp_m1_reference_values() {
        close(
            DoubleDouble::from_f64(2f64.powi(-9)).exp_m1(),
            0.001955033591002812,
            1.3494445422136546e-19,
            1e-30,
        );
        close(
            DoubleDouble::from_f64(-0.25).exp_m1(),
            -0.22119921692859512,
            -1.0231869534531498e-17,
            1e-30,
        );
        close(
            DoubleDouble::from_f64(-20.0).exp(),
            2.061153622438558e-09,
            -4.19755767595054e-26,
            1e-29,
        );
    }

    #[test]
    fn exp_inverse_pairs() {
        for &x in &[0.3, 1.7, 5.0, 33.25, 100.0] {
            let p = DoubleDouble::from_f64(x).exp() * DoubleDouble::from_f64(-x).exp();
            assert!((p - DoubleDouble::ONE).to_f64().abs() < 1e-29, "x={x}");
        }
    }

    #[test]
    fn division_round_trip() {
        let a = DoubleDouble::from_f64(1.0) / DoubleDouble::from_f64(3.0);
        let back = a * 3.0;
        assert!((back - DoubleDouble::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn exp_extremes() {
        assert_eq!(DoubleDouble::from_f64(-800.0).exp(), DoubleDouble::ZERO);
        assert!(DoubleDouble::from_f64(710.0).exp().hi.is_infinite());
        assert_eq!(DoubleDouble::ZERO.exp_m1(), DoubleDouble::ZERO);
    }
}
