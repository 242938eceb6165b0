use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TO: f64 = 15.0;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal-branch log Gamma, continuous off the negative real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("log_gamma"));
    }
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(STIRLING[STIRLING.len() - 1], 0.0);
    for c in STIRLING.iter().rev().skip(1) {
        series = series * inv2 + c;
    }
    series *= inv;
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift)
}

/// Imaginary part of [`log_gamma`], wrapped into (-pi, pi].
pub fn arg_gamma(z: Complex64) -> Result<f64> {
    Ok(wrap_angle(log_gamma(z)?.im))
}

/// Continuous (unwrapped) imaginary part of log Gamma.
pub(crate) fn im_log_gamma(z: Complex64) -> Result<f64> {
    Ok(log_gamma(z)?.im)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Gamma(z), entire: exactly zero at the poles of Gamma.
pub fn recip_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((-log_gamma(z)?).exp())
}

/// ln Gamma(x) for real x > 0.
pub(crate) fn ln_gamma_real(x: f64) -> f64 {
    log_gamma(Complex64::new(x, 0.0))
        .map(|v| v.re)
        .unwrap_or(f64::INFINITY)
}

pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - PI.sqrt().ln()).abs() < 1e-14);
        // Gamma(11) = 10!
        let v = log_gamma(c(11.0, 0.0)).unwrap().re;
        assert!((v - 3_628_800f64.ln()).abs() < 1e-13 * v);
        // Gamma(-0.5) = -2 sqrt(pi)
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert_eq!(recip_gamma(c(-2.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn modulus_on_vertical_lines() {
        for &a in &[0.1, 0.7, 2.5, 9.0] {
            let g1 = log_gamma(c(1.0, -a)).unwrap().re.exp();
            assert!((g1 - (PI * a / (PI * a).sinh()).sqrt()).abs() < 1e-13);
            let gh = log_gamma(c(0.5, a)).unwrap().re.exp();
            assert!((gh - (PI / (PI * a).cosh()).sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }
}
