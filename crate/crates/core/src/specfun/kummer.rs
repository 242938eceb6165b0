//! Kummer confluent hypergeometric function M(a, b, z) for complex
//! parameters: Maclaurin series in double-double arithmetic for moderate
//! |z|, the large-|z| asymptotic expansion, and Taylor-step continuation of
//! the Kummer equation in between.

use super::continuation::{continue_segment, LocalTaylor};
use super::dd::Cdd;
use super::gamma::log_gamma;
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Above this radius the Maclaurin series is never tried.
pub const KUMMER_SERIES_MAX_RADIUS: f64 = 60.0;
/// Below this radius the asymptotic expansion is never tried.
pub const KUMMER_ASYMPTOTIC_MIN_RADIUS: f64 = 10.0;
pub const KUMMER_MAX_ARG: f64 = 1000.0;
pub const KUMMER_MAX_PARAM: f64 = 100.0;

const ACCEPT: f64 = 1e-11;
// certified accuracy required at the start of a continuation
const START_TOL: f64 = 1e-11;
const REQUIRED: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
struct Eval {
    value: C,
    deriv: C,
    rel_err: f64,
}

fn is_nonpositive_int(b: C) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round()
}

pub fn kummer_m(a: C, b: C, z: C) -> Result<C> {
    Ok(eval(a, b, z)?.value)
}

/// M(a, b, z) and dM/dz.
pub fn kummer_m_with_derivative(a: C, b: C, z: C) -> Result<(C, C)> {
    let e = eval(a, b, z)?;
    Ok((e.value, e.deriv))
}

fn eval(a: C, b: C, z: C) -> Result<Eval> {
    for v in [a, b, z] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite("kummer_m"));
        }
    }
    if is_nonpositive_int(b) {
        return Err(Error::Pole { re: b.re, im: b.im });
    }
    if z.norm() > KUMMER_MAX_ARG || a.norm() > KUMMER_MAX_PARAM || b.norm() > KUMMER_MAX_PARAM {
        return Err(Error::OutOfRange {
            what: "kummer_m",
            detail: format!("|a| = {}, |b| = {}, |z| = {}", a.norm(), b.norm(), z.norm()),
        });
    }
    let r = z.norm();
    let mut best: Option<Eval> = None;
    let consider = |e: Eval, best: &mut Option<Eval>| {
        if e.rel_err.is_finite() && best.is_none_or(|b| e.rel_err < b.rel_err) {
            *best = Some(e);
        }
    };
    if r <= KUMMER_SERIES_MAX_RADIUS {
        if let Ok(e) = maclaurin(a, b, z) {
            if e.rel_err <= ACCEPT {
                return Ok(e);
            }
            consider(e, &mut best);
        }
    }
    if r >= KUMMER_ASYMPTOTIC_MIN_RADIUS {
        if let Ok(e) = asymptotic(a, b, z) {
            if e.rel_err <= ACCEPT {
                return Ok(e);
            }
            consider(e, &mut best);
        }
    }
    if let Some(e) = continued(a, b, z) {
        consider(e, &mut best);
    }
    match best {
        Some(e) if e.rel_err <= REQUIRED => Ok(e),
        _ => Err(Error::OutOfRange {
            what: "kummer_m",
            detail: format!(
                "no method certified a = {a}, b = {b}, z = {z} (best estimate {:e})",
                best.map_or(f64::INFINITY, |b| b.rel_err)
            ),
        }),
    }
}

fn maclaurin(a: C, b: C, z: C) -> Result<Eval> {
    let ad = Cdd::from_c64(a);
    let bd = Cdd::from_c64(b);
    let zd = Cdd::from_c64(z);
    let one = Cdd::from_c64(C::new(1.0, 0.0));
    let mut t = one;
    let mut s = one;
    let mut ds = Cdd::ZERO;
    let mut abs_sum = 1.0;
    let mut quiet = 0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let num = ad.add_real(kf) * zd;
        let den = bd.add_real(kf).scale(kf + 1.0);
        if den.norm_f64() == 0.0 {
            return Err(Error::Pole { re: b.re, im: b.im });
        }
        t = (t * num).div(den);
        s = s + t;
        ds = ds + t.scale(kf + 1.0);
        let m = t.norm_f64();
        abs_sum += m;
        quiet = if m <= 1e-34 * s.norm_f64().max(1e-300) { quiet + 1 } else { 0 };
        k += 1;
        // terminating series (a a non-positive integer) ends with exact zeros
        if quiet >= 3 && kf + 1.0 > r_floor(z) {
            break;
        }
        if k > 20_000 {
            return Err(Error::OutOfRange {
                what: "kummer_m",
                detail: "Maclaurin series did not converge".into(),
            });
        }
    }
    let value = s.to_c64();
    let deriv = if z == C::new(0.0, 0.0) {
        a / b
    } else {
        ds.to_c64() / z
    };
    let err = 1e-31 * abs_sum * 4.0 + 1e-16 * value.norm();
    Ok(Eval { value, deriv, rel_err: err / value.norm() })
}

pub(crate) fn maclaurin_pub(a: C, b: C, z: C) -> Result<(C, f64)> {
    maclaurin(a, b, z).map(|e| (e.value, e.rel_err))
}

pub(crate) fn asymptotic_pub(a: C, b: C, z: C) -> Result<(C, f64)> {
    asymptotic(a, b, z).map(|e| (e.value, e.rel_err))
}

fn r_floor(z: C) -> f64 {
    z.norm()
}

fn series_sum(p: C, q: C, w: C, z: C) -> (C, C, f64) {
    // sum_k (p)_k (q)_k / k! * w^k, stopped at its smallest term;
    // also d/dz of the sum where w = c / z
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C::new(0.0, 0.0);
    let mut omitted = f64::INFINITY;
    for k in 0..5000usize {
        let kf = k as f64;
        let next = term * (p + kf) * (q + kf) / (kf + 1.0) * w;
        if next.norm() >= term.norm() && k > 0 && next.norm() > 0.0 {
            omitted = term.norm();
            break;
        }
        sum += next;
        dsum += next * (-(kf + 1.0)) / z;
        if next.norm() <= 1e-17 * sum.norm() {
            omitted = next.norm();
            break;
        }
        term = next;
    }
    (sum, dsum, omitted)
}

/// Large-|z| expansion with both exponential contributions kept; the
/// e^{+i pi a} branch is used in the upper half plane and e^{-i pi a} below.
fn asymptotic(a: C, b: C, z: C) -> Result<Eval> {
    let lz = z.ln();
    let lgb = log_gamma(b)?;
    let i = C::new(0.0, 1.0);
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    // first: Gamma(b)/Gamma(a) e^z z^{a-b} S1, S1 = sum (1-a)_k (b-a)_k / k! z^{-k}
    let (t1, d1, e1) = if is_nonpositive_int(a) {
        (C::new(0.0, 0.0), C::new(0.0, 0.0), 0.0)
    } else {
        let expo = lgb - log_gamma(a)? + z + (a - b) * lz;
        if expo.re > 700.0 {
            return Err(Error::OutOfRange {
                what: "kummer_m",
                detail: "overflow".into(),
            });
        }
        let pre = expo.exp();
        let (s1, ds1, om1) = series_sum(1.0 - a, b - a, 1.0 / z, z);
        (
            pre * s1,
            pre * ((1.0 + (a - b) / z) * s1 + ds1),
            pre.norm() * om1 + 1e-16 * (1.0 + expo.norm()) * (pre * s1).norm(),
        )
    };
    let (t2, d2, e2) = if is_nonpositive_int(b - a) {
        (C::new(0.0, 0.0), C::new(0.0, 0.0), 0.0)
    } else {
        let expo = lgb - log_gamma(b - a)? + sign * i * PI * a - a * lz;
        if expo.re > 700.0 {
            return Err(Error::OutOfRange {
                what: "kummer_m",
                detail: "overflow".into(),
            });
        }
        let pre = expo.exp();
        let (s2, ds2, om2) = series_sum(a, a - b + 1.0, -1.0 / z, z);
        (
            pre * s2,
            pre * ((-a / z) * s2 + ds2),
            pre.norm() * om2 + 1e-16 * (1.0 + expo.norm()) * (pre * s2).norm(),
        )
    };
    let value = t1 + t2;
    Ok(Eval { value, deriv: d1 + d2, rel_err: (e1 + e2) / value.norm() })
}

struct KummerOde {
    a: C,
    b: C,
}

impl LocalTaylor for KummerOde {
    fn next_scaled(&self, z0: C, h: C, k: usize, u: &[C]) -> C {
        // z y'' + (b - z) y' - a y = 0 expanded about z0
        let kf = k as f64;
        let num = -(kf + 1.0) * (kf + self.b - z0) * h * u[k + 1] + (kf + self.a) * h * h * u[k];
        num / (z0 * (kf + 2.0) * (kf + 1.0))
    }

    fn max_step(&self, z0: C) -> f64 {
        let rate = 1.0 + (self.a.norm() + self.b.norm()) / z0.norm().max(1e-300);
        (z0.norm() / 3.0).min(1.0 / rate).min(0.75)
    }
}

fn continued(a: C, b: C, z: C) -> Option<Eval> {
    let r = z.norm();
    if r == 0.0 {
        return None;
    }
    let dir = z / r;
    let ode = KummerOde { a, b };
    let mut best: Option<Eval> = None;
    let mut take = |e: Eval| {
        if e.rel_err.is_finite() && best.is_none_or(|b: Eval| e.rel_err < b.rel_err) {
            best = Some(e);
        }
    };
    let mut tries = 0;
    let mut rs = r.min(KUMMER_SERIES_MAX_RADIUS);
    while rs > 0.5 {
        rs *= 0.85;
        if let Ok(e) = maclaurin(a, b, dir * rs) {
            if e.rel_err <= START_TOL {
                tries += 1;
                let ey = e.rel_err * e.value.norm();
                let ed = e.rel_err * e.deriv.norm().max(e.value.norm());
                if let Ok((v, d, err)) = continue_segment(&ode, dir * rs, z, e.value, e.deriv, [ey, ed]) {
                    take(Eval { value: v, deriv: d, rel_err: err / v.norm() });
                }
                if tries >= 3 {
                    break;
                }
            }
        }
    }
    let mut tries = 0;
    let mut ra = r.max(KUMMER_ASYMPTOTIC_MIN_RADIUS);
    while ra <= KUMMER_MAX_ARG * 1.2 {
        ra *= 1.2;
        if let Ok(e) = asymptotic(a, b, dir * ra) {
            if e.rel_err <= START_TOL {
                tries += 1;
                let ey = e.rel_err * e.value.norm();
                let ed = e.rel_err * e.deriv.norm().max(e.value.norm());
                if let Ok((v, d, err)) = continue_segment(&ode, dir * ra, z, e.value, e.deriv, [ey, ed]) {
                    take(Eval { value: v, deriv: d, rel_err: err / v.norm() });
                }
                if tries >= 3 {
                    break;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn value_at_origin_is_one() {
        for (a, b) in [(c(0.2, 0.0), c(0.4, 0.0)), (c(0.0, 3.0), c(0.0, 6.0)), (c(-2.5, 1.0), c(1.5, -7.0))] {
            assert_eq!(kummer_m(a, b, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn elementary_reductions() {
        // M(a, a, z) = e^z
        for z in [c(3.0, 4.0), c(0.0, 150.0), c(-20.0, 35.0), c(0.0, -420.0)] {
            let a = c(0.3, 1.1);
            assert!(rel(kummer_m(a, a, z).unwrap(), z.exp()) < 1e-10, "z = {z}");
        }
        // M(1, 2, z) = (e^z - 1)/z
        for z in [c(0.0, 80.0), c(5.0, -30.0), c(0.0, 333.0)] {
            let want = (z.exp() - 1.0) / z;
            assert!(rel(kummer_m(c(1.0, 0.0), c(2.0, 0.0), z).unwrap(), want) < 1e-10, "z = {z}");
        }
        // terminating: M(-2, b, z) = 1 - 2z/b + z^2/(b(b+1))
        let b = c(0.5, 2.0);
        let z = c(7.0, -90.0);
        let want = 1.0 - 2.0 * z / b + z * z / (b * (b + 1.0));
        assert!(rel(kummer_m(c(-2.0, 0.0), b, z).unwrap(), want) < 1e-12);
    }

    #[test]
    fn pole_in_b() {
        assert!(matches!(kummer_m(c(0.5, 0.0), c(-1.0, 0.0), c(1.0, 0.0)), Err(Error::Pole { .. })));
    }
}
