use lifting::specfun::internals::{kummer_asymptotic, kummer_series, pcf_asymptotic, pcf_series};
use lifting::specfun::{
    arg_gamma, erf, gamma, kummer_m, kummer_m_with_derivative, log_gamma, parabolic_cylinder_d, ComplexValue as C, KUMMER_ASYMPTOTIC_MIN_RADIUS, KUMMER_SERIES_MAX_RADIUS,
    PCF_ASYMPTOTIC_MIN_RADIUS, PCF_SERIES_MAX_RADIUS,
};
use lifting::Error;
use std::f64::consts::{FRAC_PI_4, PI};

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

const CERTIFIED: f64 = 1e-11;
const AGREE: f64 = 1e-9;

/// Sweeps the series/asymptotic overlap window for the orders and rays the
/// half Landau-Zener solution uses. Wherever both methods certify their
/// own result they must agree; each ray must have such an overlap, which is
/// what makes the shipped radii a valid crossover.
#[test]
fn pcf_crossover_sweep() {
    let mut log = Vec::new();
    for &w in &[0.1, 0.35, 1.0, 2.0, 3.0] {
        let nu = C::new(0.0, w * w / 2.0);
        for &th in &[-FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4] {
            let mut overlap = Vec::new();
            let mut r = PCF_ASYMPTOTIC_MIN_RADIUS;
            while r <= PCF_SERIES_MAX_RADIUS + 1e-12 {
                let z = C::from_polar(r, th);
                if let (Ok((s, es)), Ok((a, ea))) = (pcf_series(nu, z), pcf_asymptotic(nu, z)) {
                    if es <= CERTIFIED && ea <= CERTIFIED {
                        let d = rel(s, a);
                        assert!(d <= AGREE, "omega {w} arg {th} r {r}: series and asymptotic differ by {d:e}");
                        overlap.push(r);
                    }
                }
                r += 0.25;
            }
            assert!(!overlap.is_empty(), "no certified overlap for omega {w}, arg {th}");
            log.push(format!("omega {w} arg {th:+.3}: overlap r in [{}, {}]", overlap[0], overlap[overlap.len() - 1]));
        }
    }
    eprintln!("{}", log.join("\n"));
}

#[test]
fn kummer_crossover_sweep() {
    let mut log = Vec::new();
    for &vp in &[0.1, 0.4, 1.5, 5.0, 20.0] {
        let (a, b) = (C::new(0.0, vp / 2.0), C::new(0.0, vp));
        let mut overlap = Vec::new();
        let mut s = KUMMER_ASYMPTOTIC_MIN_RADIUS;
        while s <= KUMMER_SERIES_MAX_RADIUS + 1e-12 {
            let z = C::new(0.0, s);
            if let (Ok((m, em)), Ok((x, ex))) = (kummer_series(a, b, z), kummer_asymptotic(a, b, z)) {
                if em <= CERTIFIED && ex <= CERTIFIED {
                    let d = rel(m, x);
                    assert!(d <= AGREE, "varpi {vp} s {s}: series and asymptotic differ by {d:e}");
                    overlap.push(s);
                }
            }
            s += 1.0;
        }
        assert!(!overlap.is_empty(), "no certified overlap for varpi {vp}");
        log.push(format!("varpi {vp}: overlap s in [{}, {}]", overlap[0], overlap[overlap.len() - 1]));
    }
    eprintln!("{}", log.join("\n"));
}

#[test]
fn log_gamma_examples() {
    assert!(log_gamma(C::new(1.0, 0.0)).unwrap().norm() < 1e-15);
    let half = log_gamma(C::new(0.5, 0.0)).unwrap();
    assert!((half.re - PI.sqrt().ln()).abs() <= 1e-13 * PI.sqrt().ln() && half.im == 0.0);
    let a = 0.7;
    let m = log_gamma(C::new(1.0, -a)).unwrap().re.exp();
    assert!((m - (PI * a / (PI * a).sinh()).sqrt()).abs() < 1e-13);
    for z in [C::new(0.0, 0.0), C::new(-3.0, 0.0)] {
        assert!(matches!(log_gamma(z), Err(Error::Pole { .. })));
    }
}

#[test]
fn arg_gamma_examples() {
    assert_eq!(arg_gamma(C::new(2.5, 0.0)).unwrap(), 0.0);
    let x = 50.0;
    let d = arg_gamma(C::new(1.0, -x)).unwrap() - arg_gamma(C::new(0.5, -x)).unwrap();
    let d = lifting::specfun::wrap_angle(d);
    assert!((d + FRAC_PI_4).abs() < 5e-3, "{d}");
    let z = C::new(0.3, 0.4);
    let lhs = gamma(z).unwrap() * gamma(z + 0.5).unwrap();
    let rhs = PI.sqrt() * C::new(2.0, 0.0).powc(1.0 - 2.0 * z) * gamma(2.0 * z).unwrap();
    assert!(rel(lhs, rhs) < 1e-12);
}

#[test]
fn log_gamma_recurrence_grid() {
    for i in 0..=18 {
        for j in 0..=40 {
            let z = C::new(0.5 + 0.25 * i as f64, -20.0 + j as f64);
            let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
            // equality modulo 2 pi i on the principal branch
            let im = lifting::specfun::wrap_angle(d.im);
            assert!(d.re.abs() < 1e-12 && im.abs() < 1e-12, "z = {z}: {d}");
        }
    }
}

#[test]
fn gamma_modulus_on_the_half_line() {
    for k in 0..=100 {
        let a = 0.1 * k as f64;
        let m = log_gamma(C::new(0.5, a)).unwrap().re.exp();
        let want = (PI / (PI * a).cosh()).sqrt();
        assert!((m - want).abs() <= 1e-12 * want.max(1e-300), "alpha {a}");
    }
}

#[test]
fn erf_examples() {
    assert_eq!(erf(0.0), 0.0);
    assert!((erf(6.0) - 1.0).abs() < 1e-14);
    // Taylor series 2/sqrt(pi) sum (-1)^n x^(2n+1) / (n! (2n+1))
    let (mut term, mut sum) = (1.0f64, 0.0);
    for n in 0..40 {
        sum += term / (2 * n + 1) as f64;
        term *= -1.0 / (n + 1) as f64;
    }
    assert!((erf(1.0) - 2.0 / PI.sqrt() * sum).abs() < 1e-15);
}

#[test]
fn pcf_examples() {
    let z = C::new(1.0, 1.0);
    assert!(rel(parabolic_cylinder_d(C::new(0.0, 0.0), z).unwrap(), (-z * z / 4.0).exp()) < 1e-12);
    let nu = C::new(0.0, 0.3);
    let want = C::new(2.0, 0.0).powc(nu / 2.0) * PI.sqrt() / gamma((1.0 - nu) / 2.0).unwrap();
    assert!(rel(parabolic_cylinder_d(nu, C::new(0.0, 0.0)).unwrap(), want) < 1e-12);
    // leading large-argument term z^nu e^{-z^2/4}
    let w: f64 = 0.35;
    let nu = C::new(0.0, w * w / 2.0);
    let z = C::from_polar(10.0 * 2f64.sqrt(), -FRAC_PI_4);
    let lead = z.powc(nu) * (-z * z / 4.0).exp();
    assert!(rel(parabolic_cylinder_d(nu, z).unwrap(), lead) < 1e-3);
    assert!(matches!(parabolic_cylinder_d(C::new(60.0, 0.0), z), Err(Error::OutOfRange { .. })));
}

/// Weber equation D'' + (nu + 1/2 - z^2/4) D = 0, with D'' from a
/// fourth-order central difference of the values.
#[test]
fn weber_residual() {
    let h = 1e-3;
    for &w in &[0.1, 0.35, 1.0, 2.0] {
        let nu = C::new(0.0, w * w / 2.0);
        for &th in &[-FRAC_PI_4, 3.0 * FRAC_PI_4] {
            for k in 0..=14 {
                let z = C::from_polar(0.5 + k as f64, th);
                let dz = C::from_polar(h, th);
                let f = |x: C| parabolic_cylinder_d(nu, x).unwrap();
                let d2 = (-f(z + 2.0 * dz) + 16.0 * f(z + dz) - 30.0 * f(z) + 16.0 * f(z - dz) - f(z - 2.0 * dz))
                    / (12.0 * dz * dz);
                let d = f(z);
                let r = (d2 + (nu + 0.5 - z * z / 4.0) * d).norm();
                assert!(r <= 1e-6 * d.norm(), "omega {w} z {z}: residual {r:e} vs |D| {:e}", d.norm());
            }
        }
    }
}

#[test]
fn kummer_examples() {
    for (a, b) in [(C::new(0.0, 0.2), C::new(0.0, 0.4)), (C::new(1.5, -2.0), C::new(-0.5, 3.0))] {
        assert_eq!(kummer_m(a, b, C::new(0.0, 0.0)).unwrap(), C::new(1.0, 0.0));
    }
    assert!(matches!(kummer_m(C::new(1.0, 0.0), C::new(-2.0, 0.0), C::new(0.0, 1.0)), Err(Error::Pole { .. })));
    // large-s asymptote (is)^{-i varpi/2} Gamma(i varpi)/Gamma(i varpi/2) (e^{is} + e^{-pi varpi/2})
    let (vp, s) = (0.4, 200.0);
    let (a, b, z) = (C::new(0.0, vp / 2.0), C::new(0.0, vp), C::new(0.0, s));
    let ratio = (log_gamma(b).unwrap() - log_gamma(a).unwrap()).exp();
    let want = z.powc(-a) * ratio * (z.exp() + (-PI * vp / 2.0).exp());
    assert!(rel(kummer_m(a, b, z).unwrap(), want) < 1e-2);
}

/// z M'' + (b - z) M' - a M = 0 with M'' from a fourth-order central
/// difference of the analytic derivative, at arguments where the stencil resolves 1e-8 |M|.
#[test]
fn kummer_residual() {
    let dz = C::new(0.0, 5e-3);
    for &vp in &[0.1, 0.4, 1.5, 5.0, 20.0] {
        let (a, b) = (C::new(0.0, vp / 2.0), C::new(0.0, vp));
        let d = |x: C| kummer_m_with_derivative(a, b, x).unwrap().1;
        for k in 1..=30 {
            let z = C::new(0.0, k as f64);
            let (m, d1) = kummer_m_with_derivative(a, b, z).unwrap();
            let d2 = (-d(z + 2.0 * dz) + 8.0 * d(z + dz) - 8.0 * d(z - dz) + d(z - 2.0 * dz)) / (12.0 * dz);
            let r = (z * d2 + (b - z) * d1 - a * m).norm();
            assert!(r <= 1e-8 * m.norm(), "varpi {vp} s {k}: residual {r:e}");
        }
    }
}
