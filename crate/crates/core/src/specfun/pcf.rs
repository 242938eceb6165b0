//! Parabolic cylinder function D_nu(z) (Whittaker notation) for complex
//! order and argument.
//!
//! Three evaluation paths, each returning its own error estimate:
//! the large-|z| asymptotic series (with connection formulas past
//! |arg z| = pi/2), the Maclaurin series summed in double-double arithmetic,
//! and Taylor-step continuation of the Weber equation from whichever of the
//! two is certified at a nearby radius.

use super::continuation::{continue_segment, LocalTaylor};
use super::dd::{gamma_half_ratio, Cdd, Dd};
use super::gamma::{log_gamma, recip_gamma};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_PI_2, PI};

/// Below this radius the asymptotic series is never tried.
pub const PCF_ASYMPTOTIC_MIN_RADIUS: f64 = 5.0;
/// Above this radius the Maclaurin series is never tried.
pub const PCF_SERIES_MAX_RADIUS: f64 = 16.0;
pub const PCF_MAX_ORDER: f64 = 50.0;
pub const PCF_MAX_ARG: f64 = 50.0;

const ACCEPT: f64 = 1e-11;
// certified accuracy required at the start of a continuation
const START_TOL: f64 = 1e-11;
const REQUIRED: f64 = 1e-9;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Eval {
    pub value: C,
    pub deriv: C,
    /// estimated relative error of `value`
    pub rel_err: f64,
}

/// D_nu(z).
pub fn parabolic_cylinder_d(nu: C, z: C) -> Result<C> {
    Ok(pcf_eval(nu, z)?.value)
}

/// D_nu(z) together with dD_nu/dz.
pub fn parabolic_cylinder_d_with_derivative(nu: C, z: C) -> Result<(C, C)> {
    let e = pcf_eval(nu, z)?;
    Ok((e.value, e.deriv))
}

pub(crate) fn pcf_eval(nu: C, z: C) -> Result<Eval> {
    if !(nu.re.is_finite() && nu.im.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("parabolic_cylinder_d"));
    }
    if nu.norm() > PCF_MAX_ORDER || z.norm() > PCF_MAX_ARG {
        return Err(Error::OutOfRange {
            what: "parabolic_cylinder_d",
            detail: format!("|nu| = {}, |z| = {}", nu.norm(), z.norm()),
        });
    }
    let r = z.norm();
    let mut best: Option<Eval> = None;
    let consider = |e: Eval, best: &mut Option<Eval>| {
        if e.rel_err.is_finite() && best.is_none_or(|b| e.rel_err < b.rel_err) {
            *best = Some(e);
        }
    };
    if r >= PCF_ASYMPTOTIC_MIN_RADIUS {
        if let Ok(e) = asymptotic(nu, z) {
            if e.rel_err <= ACCEPT {
                return Ok(e);
            }
            consider(e, &mut best);
        }
    }
    if r <= PCF_SERIES_MAX_RADIUS {
        if let Ok(e) = maclaurin(nu, z) {
            if e.rel_err <= ACCEPT {
                return Ok(e);
            }
            consider(e, &mut best);
        }
    }
    if let Some(e) = continued(nu, z) {
        consider(e, &mut best);
    }
    match best {
        Some(e) if e.rel_err <= REQUIRED => Ok(e),
        _ => Err(Error::OutOfRange {
            what: "parabolic_cylinder_d",
            detail: format!(
                "no method certified nu = {nu}, z = {z} (best estimate {:e})",
                best.map_or(f64::INFINITY, |b| b.rel_err)
            ),
        }),
    }
}

/// D_nu(0) and D_nu'(0).
pub(crate) fn origin_values(nu: C) -> Result<(C, C)> {
    let two = C::new(2.0, 0.0);
    let sp = PI.sqrt();
    let d0 = two.powc(nu / 2.0) * sp * recip_gamma((1.0 - nu) / 2.0)?;
    let d1 = -two.powc((nu + 1.0) / 2.0) * sp * recip_gamma(-nu / 2.0)?;
    Ok((d0, d1))
}

fn input_eps(nu: C) -> f64 {
    let lg = |w: C| log_gamma(w).map(|v| v.norm()).unwrap_or(0.0);
    1e-15 * (8.0 + lg((1.0 - nu) / 2.0) + lg(-nu / 2.0) + nu.norm())
}

pub(crate) fn maclaurin_pub(nu: C, z: C) -> Result<Eval> {
    maclaurin(nu, z)
}

/// Maclaurin series of the even and odd Weber solutions in double-double.
fn maclaurin(nu: C, z: C) -> Result<Eval> {
    let (d0, d1) = origin_values(nu)?;
    if z == C::new(0.0, 0.0) {
        return Ok(Eval { value: d0, deriv: d1, rel_err: input_eps(nu) });
    }
    let a = Cdd::from_c64(nu).add_real(0.5);
    let zd = Cdd::from_c64(z);
    let z2 = zd * zd;
    let z4q = (z2 * z2).scale(0.25);
    let az2 = a * z2;
    // u[k] = c_k z^k for the even (y1) and odd (y2) solutions, interleaved by parity
    let mut u: Vec<Cdd> = vec![Cdd::from_c64(C::new(1.0, 0.0)), zd];
    let mut s = [u[0], u[1]];
    let mut ds = [Cdd::ZERO, u[1]];
    let mut abs_sum = [1.0, z.norm()];
    let mut abs_dsum = [0.0, z.norm()];
    let mut quiet = [0usize; 2];
    let mut k = 0usize;
    loop {
        let prev2 = if k >= 2 { u[k - 2] } else { Cdd::ZERO };
        let next = (prev2 * z4q - u[k] * az2).div_real(((k + 1) * (k + 2)) as f64);
        u.push(next);
        let p = k % 2;
        s[p] = s[p] + next;
        ds[p] = ds[p] + next.scale((k + 2) as f64);
        let m = next.norm_f64();
        abs_sum[p] += m;
        abs_dsum[p] += m * (k + 2) as f64;
        if m <= 1e-34 * s[p].norm_f64().max(1e-300) {
            quiet[p] += 1;
        } else {
            quiet[p] = 0;
        }
        k += 1;
        if quiet[0] >= 3 && quiet[1] >= 3 && k > 8 {
            break;
        }
        if k > 6000 {
            return Err(Error::OutOfRange {
                what: "parabolic_cylinder_d",
                detail: "Maclaurin series did not converge".into(),
            });
        }
    }
    // D = d0 (y1 + rho y2) with rho = d1/d0 = -sqrt(2) Gamma(a+1/2)/Gamma(a),
    // a = -nu/2, carried in double-double: the even and odd parts can cancel
    // far below the size of either, so only the overall scale is left in f64.
    let sqrt2 = Dd { hi: std::f64::consts::SQRT_2, lo: -9.667_293_313_452_913e-17 };
    let (value, deriv, scale_abs) = match gamma_half_ratio(-nu / 2.0) {
        Some(r) if d0 != C::new(0.0, 0.0) => {
            let rho = Cdd { re: -(r.re * sqrt2), im: -(r.im * sqrt2) };
            let v = (s[0] + rho * s[1]).to_c64();
            let dv = (ds[0] + rho * ds[1]).to_c64() / z;
            let abs = d0.norm() * (abs_sum[0] + rho.norm_f64() * abs_sum[1]);
            (d0 * v, d0 * dv, abs)
        }
        _ => {
            // Gamma((1 - nu)/2) has a pole, so d0 = 0
            let v = s[1].to_c64();
            (d1 * v, d1 * ds[1].to_c64() / z, d1.norm() * abs_sum[1])
        }
    };
    let err = input_eps(nu) * value.norm() + 1e-30 * scale_abs + 1e-16 * value.norm();
    let _ = abs_dsum;
    Ok(Eval { value, deriv, rel_err: err / value.norm() })
}

fn ln_half_erfc(x: f64) -> f64 {
    if x < 25.0 {
        (0.5 * libm::erfc(x)).ln()
    } else {
        -x * x - (2.0 * x * PI.sqrt()).ln()
    }
}

/// Asymptotic expansion, valid for |arg z| <= pi/2, extended to the full
/// plane through the connection formulas.
pub(crate) fn asymptotic(nu: C, z: C) -> Result<Eval> {
    let th = z.arg();
    if th.abs() <= FRAC_PI_2 {
        return asymptotic_direct(nu, z);
    }
    let mnu1 = -nu - 1.0;
    let stokes = SQRT_2PI * recip_gamma(-nu)?;
    let i = C::new(0.0, 1.0);
    let (e1, e2, c1, c2, dz2) = if th > FRAC_PI_2 {
        let e1 = asymptotic_direct(nu, -z)?;
        let e2 = asymptotic_direct(mnu1, -i * z)?;
        (e1, e2, (i * PI * nu).exp(), stokes * (i * FRAC_PI_2 * (nu + 1.0)).exp(), -i)
    } else {
        let e1 = asymptotic_direct(nu, -z)?;
        let e2 = asymptotic_direct(mnu1, i * z)?;
        (e1, e2, (-i * PI * nu).exp(), stokes * (-i * FRAC_PI_2 * (nu + 1.0)).exp(), i)
    };
    let t1 = c1 * e1.value;
    let t2 = c2 * e2.value;
    let value = t1 + t2;
    let deriv = -c1 * e1.deriv + c2 * dz2 * e2.deriv;
    let err = t1.norm() * e1.rel_err + t2.norm() * e2.rel_err + 1e-16 * (t1.norm() + t2.norm());
    Ok(Eval { value, deriv, rel_err: err / value.norm() })
}

fn asymptotic_direct(nu: C, z: C) -> Result<Eval> {
    let lz = z.ln();
    let expo = nu * lz - z * z / 4.0;
    if expo.re > 700.0 || expo.re < -700.0 {
        return Err(Error::OutOfRange {
            what: "parabolic_cylinder_d",
            detail: format!("D_nu(z) overflows double precision at nu = {nu}, z = {z}"),
        });
    }
    let pre = expo.exp();
    let w = -1.0 / (2.0 * z * z);
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C::new(0.0, 0.0);
    let mut omitted = f64::INFINITY;
    for s in 0..2000usize {
        let sf = s as f64;
        let next = term * (2.0 * sf - nu) * (2.0 * sf + 1.0 - nu) / (sf + 1.0) * w;
        if next.norm() >= term.norm() && s > 0 {
            omitted = term.norm();
            break;
        }
        if next.norm() <= 1e-17 * sum.norm() {
            omitted = next.norm();
            sum += next;
            dsum += next * (-2.0 * (sf + 1.0)) / z;
            break;
        }
        sum += next;
        dsum += next * (-2.0 * (sf + 1.0)) / z;
        term = next;
    }
    let value = pre * sum;
    let deriv = pre * ((nu / z - z / 2.0) * sum + dsum);
    // Stokes smoothing of the recessive companion near |arg z| = pi/2
    let eps = FRAC_PI_2 - z.arg().abs();
    let mult = (SQRT_2PI * recip_gamma(-nu)?).norm();
    let stokes = if mult == 0.0 {
        0.0
    } else {
        (mult.ln() + ((-2.0 * nu - 1.0) * lz + z * z / 2.0).re + ln_half_erfc(z.norm() * eps)).exp()
    };
    let rel = 2.0 * omitted / sum.norm() + 2.0 * stokes + 4e-16 * (1.0 + expo.norm());
    Ok(Eval { value, deriv, rel_err: rel })
}

struct Weber {
    a: C,
}

impl LocalTaylor for Weber {
    fn next_scaled(&self, z0: C, h: C, k: usize, u: &[C]) -> C {
        // y'' = (z^2/4 - a) y expanded about z0
        let q0 = z0 * z0 / 4.0 - self.a;
        let q1 = z0 / 2.0;
        let h2 = h * h;
        let mut acc = q0 * h2 * u[k];
        if k >= 1 {
            acc += q1 * h2 * h * u[k - 1];
        }
        if k >= 2 {
            acc += 0.25 * h2 * h2 * u[k - 2];
        }
        acc / ((k + 1) * (k + 2)) as f64
    }

    fn max_step(&self, z0: C) -> f64 {
        let q = (z0 * z0 / 4.0 - self.a).norm() + z0.norm() / 2.0;
        (1.5 / q.sqrt().max(1.0)).min(1.0)
    }
}

/// Continuation along the ray through z from a certified radius.
fn continued(nu: C, z: C) -> Option<Eval> {
    let r = z.norm();
    if r == 0.0 {
        return None;
    }
    let dir = z / r;
    let ode = Weber { a: nu + 0.5 };
    let mut best: Option<Eval> = None;
    let mut take = |e: Eval| {
        if e.rel_err.is_finite() && best.is_none_or(|b: Eval| e.rel_err < b.rel_err) {
            best = Some(e);
        }
    };
    // inward from the asymptotic regime
    let mut tries = 0;
    let mut ra = r.max(PCF_ASYMPTOTIC_MIN_RADIUS);
    while ra <= PCF_MAX_ARG * 1.2 {
        ra *= 1.15;
        if let Ok(e) = asymptotic(nu, dir * ra) {
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
    // outward from the Maclaurin regime
    let mut tries = 0;
    let mut rs = r.min(PCF_SERIES_MAX_RADIUS);
    while rs > 0.5 {
        rs *= 0.85;
        if let Ok(e) = maclaurin(nu, dir * rs) {
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
    fn order_zero_is_gaussian() {
        for z in [c(1.0, 1.0), c(3.0, -2.0), c(-6.0, 4.0), c(0.2, 9.0), c(-8.0, -1.0)] {
            let d = parabolic_cylinder_d(c(0.0, 0.0), z).unwrap();
            assert!(rel(d, (-z * z / 4.0).exp()) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn integer_orders_are_hermite() {
        // D_1(z) = z e^{-z^2/4}, D_2(z) = (z^2 - 1) e^{-z^2/4}
        for z in [c(0.7, 0.3), c(-5.5, 2.0), c(6.0, 6.0), c(-2.0, -9.0)] {
            let g = (-z * z / 4.0).exp();
            assert!(rel(parabolic_cylinder_d(c(1.0, 0.0), z).unwrap(), z * g) < 1e-11, "z = {z}");
            assert!(rel(parabolic_cylinder_d(c(2.0, 0.0), z).unwrap(), (z * z - 1.0) * g) < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(matches!(
            parabolic_cylinder_d(c(60.0, 0.0), c(1.0, 0.0)),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            parabolic_cylinder_d(c(0.0, 1.0), c(51.0, 0.0)),
            Err(Error::OutOfRange { .. })
        ));
    }
}
