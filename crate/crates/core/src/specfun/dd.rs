//! Minimal double-double arithmetic (about 31 significant digits), enough for
//! compensated power-series summation with heavy cancellation.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
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

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, t) = two_sum(self.hi, -p);
        let t = t - e + self.lo;
        let q2 = (s + t) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Cheap magnitude estimate in f64.
    #[inline]
    pub fn norm_f64(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Cdd {
        Cdd { re: self.re.mul_f64(s), im: self.im.mul_f64(s) }
    }

    #[inline]
    pub fn div_real(self, s: f64) -> Cdd {
        Cdd { re: self.re.div_f64(s), im: self.im.div_f64(s) }
    }

    #[inline]
    pub fn add_real(self, s: f64) -> Cdd {
        Cdd { re: self.re.add_f64(s), im: self.im }
    }

    pub fn div(self, b: Cdd) -> Cdd {
        let den = b.re * b.re + b.im * b.im;
        let re = (self.re * b.re + self.im * b.im).div(den);
        let im = (self.im * b.re - self.re * b.im).div(den);
        Cdd { re, im }
    }

    /// Product with an exactly representable f64 complex.
    #[cfg(test)]
    #[inline]
    pub fn mul_c64(self, b: Complex64) -> Cdd {
        let re = self.re.mul_f64(b.re) - self.im.mul_f64(b.im);
        let im = self.re.mul_f64(b.im) + self.im.mul_f64(b.re);
        Cdd { re, im }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    #[inline]
    fn sub(self, b: Cdd) -> Cdd {
        Cdd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Cdd {
    /// Principal square root: one Newton step from the f64 root.
    pub fn sqrt(self) -> Cdd {
        let s0 = Cdd::from_c64(self.to_c64().sqrt());
        if s0.norm_f64() == 0.0 {
            return s0;
        }
        s0 + (self - s0 * s0).div(s0.scale(2.0))
    }

    /// e^x by Taylor series, for |x| well below 1.
    pub fn exp_small(self) -> Cdd {
        let mut term = Cdd::from_c64(Complex64::new(1.0, 0.0));
        let mut sum = term;
        for k in 1..40 {
            term = (term * self).div_real(k as f64);
            sum = sum + term;
            if term.norm_f64() < 1e-34 * sum.norm_f64() {
                break;
            }
        }
        sum
    }
}

// Bernoulli numbers B_2 .. B_30 as (numerator, denominator)
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

const RATIO_SHIFT: f64 = 30.0;

/// Gamma(a + 1/2) / Gamma(a) in double-double, or `None` when a + 1/2 is a
/// pole. Recurrence up to Re a >= 30, then the expansion
/// ln(Gamma(a+1/2)/Gamma(a)) = ln(a)/2 - sum_{k odd} (2 - 2^-k) B_{k+1} / (k (k+1) a^k).
pub(crate) fn gamma_half_ratio(a: Complex64) -> Option<Cdd> {
    let shift = (RATIO_SHIFT - a.re).ceil().max(0.0) as usize;
    let one = Cdd::from_c64(Complex64::new(1.0, 0.0));
    let ad = Cdd::from_c64(a);
    let (mut num, mut den) = (one, one);
    for k in 0..shift {
        let x = ad.add_real(k as f64);
        let y = x.add_real(0.5);
        if y.norm_f64() == 0.0 {
            return None;
        }
        num = num * x;
        den = den * y;
    }
    let b = ad.add_real(shift as f64);
    let inv = one.div(b);
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Cdd::ZERO;
    for (m, &(bn, bd)) in BERNOULLI.iter().enumerate() {
        let k = (2 * m + 1) as i32;
        let c = Dd::new(bn).mul_f64(2.0 - 2f64.powi(-k)).div_f64(bd * (k * (k + 1)) as f64);
        let term = Cdd { re: pow.re * c, im: pow.im * c };
        series = series - term;
        if term.norm_f64() < 1e-34 {
            break;
        }
        pow = pow * inv2;
    }
    Some(b.sqrt() * series.exp_small() * num.div(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_rounding_error_of_sum() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        let b = a - Dd::new(1.0);
        assert_eq!(b.to_f64(), 1e-20);
    }

    #[test]
    fn third_times_three_is_one() {
        let t = Dd::new(1.0).div_f64(3.0);
        let one = t.mul_f64(3.0) - Dd::new(1.0);
        assert!(one.to_f64().abs() < 1e-31);
    }

    #[test]
    fn division_round_trips() {
        let a = Cdd::from_c64(Complex64::new(0.3, 7.0)).add_real(1e-25);
        let b = Cdd::from_c64(Complex64::new(-2.0, 0.1));
        let back = a.div(b) * b - a;
        assert!(back.norm_f64() < 1e-30);
        let x = Dd::new(2.0).div(Dd::new(3.0));
        assert!((x.mul_f64(3.0) - Dd::new(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn half_ratio_matches_gamma() {
        use crate::specfun::log_gamma;
        for a in [Complex64::new(0.3, 0.0), Complex64::new(0.0, -3.0), Complex64::new(-2.7, 11.0), Complex64::new(45.0, 2.0)] {
            let r = gamma_half_ratio(a).unwrap().to_c64();
            let e = (log_gamma(a + 0.5).unwrap() - log_gamma(a).unwrap()).exp();
            assert!((r - e).norm() < 1e-13 * e.norm(), "a = {a}: {r} vs {e}");
        }
        // Gamma(3/2)/Gamma(1) = sqrt(pi)/2 to double-double accuracy
        let r = gamma_half_ratio(Complex64::new(1.0, 0.0)).unwrap();
        let half_sqrt_pi = Dd { hi: 0.886_226_925_452_758, lo: -3.833_293_249_912_899_3e-17 };
        assert!((r.re - half_sqrt_pi).to_f64().abs() < 1e-30);
        assert!(gamma_half_ratio(Complex64::new(-1.5, 0.0)).is_none());
        assert_eq!(gamma_half_ratio(Complex64::new(-2.0, 0.0)).unwrap().norm_f64(), 0.0);
    }

    #[test]
    fn complex_product_matches_f64() {
        let a = Cdd::from_c64(Complex64::new(1.5, -2.25));
        let b = Complex64::new(0.5, 4.0);
        let p = a.mul_c64(b).to_c64();
        let q = Complex64::new(1.5, -2.25) * b;
        assert!((p - q).norm() < 1e-15);
        let r = (a * Cdd::from_c64(b)).to_c64();
        assert!((r - q).norm() < 1e-15);
    }
}
