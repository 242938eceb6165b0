//! Acceptance checks: every analytic result against the numerical oracle
//! at fixed tolerances. Shared by the `acceptance` test target and the
//! `validate` CLI verb.

use crate::asymptotics::{
    exponential_exact, exponential_lifting, large_detuning_transfer, linear_lifting, half_lz_exact,
    small_detuning_transfer, universal_lifting, universal_lifting_flagged,
};
use crate::error::Result;
use crate::lineshape::{half_scrap, rosen_zener, trig_lineshape, Sequence};
use crate::propagator::{
    dynamical_phase, falling_from_rising, from_lz_frame, mixing_angle, propagate, propagate_operator_samples,
    state_to_adiabatic, PropagatorConfig, StateVector,
};
use crate::pulses::{rabi_at, ExpSign, PulseKind, PulseShape, SystemParams};
use crate::specfun::{
    gamma, kummer_m, kummer_m_with_derivative, log_gamma, parabolic_cylinder_d, wrap_angle, ComplexValue as C,
};
use rand::{rngs::StdRng, RngExt, SeedableRng};
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

/// Number of acceptance criteria.
pub const CRITERIA: u8 = 10;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Measured quantities against their bounds.
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

struct Check {
    parts: Vec<String>,
    passed: bool,
}

impl Check {
    fn new() -> Self {
        Check { parts: Vec::new(), passed: true }
    }

    /// Records `value <= bound`.
    fn le(&mut self, what: &str, value: f64, bound: f64) {
        let ok = value <= bound;
        self.passed &= ok;
        self.parts.push(format!("{what} {value:.3e} {} {bound:e}", if ok { "<=" } else { ">" }));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.passed &= ok;
        self.parts.push(format!("{what}: {}", if ok { "yes" } else { "NO" }));
    }

    fn note(&mut self, s: String) {
        self.parts.push(s);
    }
}

fn title(id: u8) -> &'static str {
    match id {
        1 => "linear rising: exact asymptotics vs oracle",
        2 => "half Landau-Zener exact operator vs oracle",
        3 => "exponential rising: populations and Kummer solution",
        4 => "small-detuning theory vs exact expansions",
        5 => "universal omega_n formula",
        6 => "large-detuning perturbation theory",
        7 => "Rosen-Zener formula vs oracle",
        8 => "trig-pulse lineshapes",
        9 => "Half-SCRAP superpositions",
        10 => "property suite",
        _ => "unknown",
    }
}

fn budget(id: u8) -> f64 {
    match id {
        1 => 5.0,
        2 | 3 => 30.0,
        5 => 120.0,
        7 => 60.0,
        _ => 600.0,
    }
}

/// Adiabatic amplitudes (A-, A+) at `b` after starting in |-> at `a`.
fn oracle_adiabatic(params: &SystemParams, shape: &PulseShape, a: f64, b: f64, tol: f64) -> Result<StateVector> {
    let u = propagate(params, shape, a, b, tol)?;
    let theta = mixing_angle(rabi_at(shape, b), params.t0_delta0)?;
    Ok(state_to_adiabatic(&StateVector { b_minus: u.u11, b_plus: -u.u12.conj() }, theta))
}

fn grid(from: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| from + step * i as f64).collect()
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn collect<T: Send>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

fn linear_rising(tol: f64, c: &mut Check) -> Result<()> {
    let (w0, d) = (100.0, 5.0);
    let shape = PulseShape::power_rise(1, w0, 1.0)?;
    let p = SystemParams::new(w0, d, 1)?;
    let a = oracle_adiabatic(&p, &shape, 0.0, 1.0, tol)?;
    let l = linear_lifting(p.omega())?;
    let eta = dynamical_phase(&p, &shape, 0.0, 1.0)?;
    let (am, ap) = l.amplitudes(eta);
    c.le("|p+ err|", (a.b_plus.norm_sqr() - l.p_plus).abs(), 1e-4);
    c.le("arg A- err", wrap_angle(a.b_minus.arg() - am.arg()).abs(), 1e-3);
    c.le("arg A+ err", wrap_angle(a.b_plus.arg() - ap.arg()).abs(), 1e-3);
    Ok(())
}

fn half_lz(tol: f64, c: &mut Check) -> Result<()> {
    let w0 = 100.0;
    let ts = grid(0.0, 0.5, 21);
    let errs = collect(
        [0.1, 0.35, 1.0, 2.0]
            .par_iter()
            .map(|&w| {
                let d = w * (2.0f64 * w0).sqrt();
                let p = SystemParams::new(w0, d, 1)?;
                let scale = (w0 / 2.0).sqrt();
                let taus: Vec<f64> = ts.iter().map(|t| t / scale).collect();
                let shape = PulseShape::power_rise(1, w0, taus[taus.len() - 1])?;
                let cfg = PropagatorConfig { tol, ..Default::default() };
                let ops = propagate_operator_samples(&p, &shape, 0.0, &taus, &cfg)?;
                let mut e: f64 = 0.0;
                for (t, u) in ts.iter().zip(&ops) {
                    let x = from_lz_frame(&half_lz_exact(w, *t)?);
                    e = e.max((x.u11 - u.u11).norm()).max((x.u12 - u.u12).norm());
                }
                Ok(e)
            })
            .collect(),
    )?;
    c.le("max entry err", max_of(errs), 1e-8);
    Ok(())
}

fn exponential(tol: f64, c: &mut Check) -> Result<()> {
    let level = 1e-8;
    let s_end = 1000.0;
    let varpis = grid(0.0, 0.1, 31);
    let errs = collect(
        varpis
            .par_iter()
            .map(|&vp| {
                let w0 = 100.0;
                let shape = PulseShape::exponential_rise(w0, (s_end / w0).ln(), level)?;
                let p = SystemParams::new(w0, vp, 1)?;
                let (ti, tf) = shape.support();
                let a = oracle_adiabatic(&p, &shape, ti, tf, tol)?;
                let l = exponential_lifting(vp, s_end / 2.0, level)?;
                Ok((a.b_plus.norm_sqr() - l.p_plus).abs())
            })
            .collect(),
    )?;
    c.le("max |p+ err| over varpi in [0,3]", max_of(errs), 1e-3);
    let mut invariant = true;
    for &vp in &varpis {
        let ps: Vec<f64> = [50.0, 100.0, 500.0]
            .iter()
            .map(|w0| exponential_lifting(vp, 0.5 * w0 * 10.0, level).map(|l| l.p_plus))
            .collect::<Result<_>>()?;
        invariant &= ps.iter().all(|x| x.to_bits() == ps[0].to_bits());
    }
    c.holds("p+ bitwise invariant under T0*Omega0", invariant);
    // exact Kummer operator against the oracle on sampled areas
    let mut e: f64 = 0.0;
    for &vp in &[0.0, 0.4, 1.5] {
        let w0 = 100.0;
        let p = SystemParams::new(w0, vp, 1)?;
        let ss = [0.5, 3.0, 20.0, 100.0, 300.0];
        let taus: Vec<f64> = ss.iter().map(|s| (s / w0).ln()).collect();
        let ti = (level / w0).ln();
        let shape = PulseShape::new(PulseKind::Exponential(ExpSign::Rising), w0, ti, taus[taus.len() - 1])?;
        let cfg = PropagatorConfig { tol, ..Default::default() };
        let ops = propagate_operator_samples(&p, &shape, ti, &taus, &cfg)?;
        for (s, u) in ss.iter().zip(&ops) {
            let x = exponential_exact(vp, *s, level)?;
            e = e.max((x.u11 - u.u11).norm()).max((x.u12 - u.u12).norm());
        }
    }
    c.le("Kummer solution max entry err", e, 1e-7);
    Ok(())
}

fn small_detuning(c: &mut Check) -> Result<()> {
    let w0 = 100.0;
    let omega = 1e-3;
    let d = omega * (2.0f64 * w0).sqrt();
    let target = -(PI / 8.0).sqrt();
    let s = small_detuning_transfer(PulseKind::PowerRise(1), d, w0)?;
    let lin = linear_lifting(omega)?;
    c.le("K_1 slope err", ((s.p_plus - 0.5) / omega - target).abs(), 1e-4);
    c.le("linear slope err", ((lin.p_plus - 0.5) / omega - target).abs(), 1e-4);
    // exponential: the difference must vanish at least as varpi^2
    let mut ratio: f64 = 0.0;
    for &vp in &[1e-3, 1e-2, 0.1] {
        let small = small_detuning_transfer(PulseKind::Exponential(ExpSign::Rising), vp, w0)?;
        let exact = exponential_lifting(vp, 500.0, 1e-8)?;
        ratio = ratio.max((small.p_plus - exact.p_plus).abs() / (vp * vp));
    }
    c.le("exponential |diff|/varpi^2", ratio, 1.0);
    Ok(())
}

fn universal(tol: f64, c: &mut Check) -> Result<()> {
    let w0 = 100.0;
    let sweep = |n: u32, tau: f64, ds: Vec<f64>| -> Result<Vec<(f64, f64, f64)>> {
        collect(
            ds.par_iter()
                .map(|&d| {
                    let shape = PulseShape::power_rise(n, w0, tau)?;
                    let p = SystemParams::new(w0, d, n)?;
                    let a = oracle_adiabatic(&p, &shape, 0.0, tau, tol)?;
                    let l = universal_lifting(n, d, w0)?;
                    let (_, ap) = l.amplitudes(dynamical_phase(&p, &shape, 0.0, tau)?);
                    Ok((d, (a.b_plus.norm_sqr() - l.p_plus).abs(), wrap_angle(a.b_plus.arg() - ap.arg()).abs()))
                })
                .collect(),
        )
    };
    let n2 = sweep(2, 3.0, grid(0.0, 0.5, 41))?;
    c.le("n=2 max |p+ err|", max_of(n2.iter().map(|r| r.1)), 0.02);
    c.note(format!("n=2 max arg A+ err (T0*Delta0 < 10) {:.3}", max_of(n2.iter().filter(|r| r.0 < 10.0).map(|r| r.2))));
    let n3 = sweep(3, 2.5, grid(0.0, 0.25, 40))?;
    let worst = n3.iter().cloned().fold((0.0, 0.0, 0.0), |m, r| if r.2 > m.2 { r } else { m });
    c.le("n=3 max arg A+ err (T0*Delta0 < 10)", worst.2, 0.15);
    c.note(format!("worst at T0*Delta0 = {}", worst.0));
    if let Some(first) = n3.iter().find(|r| r.2 > 0.15) {
        c.note(format!("band exceeded from T0*Delta0 = {}", first.0));
    }
    Ok(())
}

fn large_detuning(tol: f64, c: &mut Check) -> Result<()> {
    let (w0, n, tau) = (100.0, 2u32, 3.0);
    let rows = collect(
        grid(5.0, 0.5, 31)
            .par_iter()
            .chain(grid(30.0, 5.0, 11).par_iter())
            .map(|&d| {
                let shape = PulseShape::power_rise(n, w0, tau)?;
                let p = SystemParams::new(w0, d, n)?;
                let o = oracle_adiabatic(&p, &shape, 0.0, tau, tol)?.b_plus.norm_sqr();
                let j = large_detuning_transfer(n, p.alpha_n())?;
                Ok((d, p.alpha_n(), o, j.p_plus()))
            })
            .collect(),
    )?;
    let band: Vec<_> = rows.iter().filter(|r| r.0 <= 20.0).collect();
    let worst = band.iter().fold((0.0, 0.0), |m, r| {
        let e = (r.3 - r.2).abs() / r.2;
        if e > m.1 {
            (r.0, e)
        } else {
            m
        }
    });
    c.le("max rel err of |J_2|^2, T0*Delta0 in [5,20]", worst.1, 0.2);
    c.note(format!("worst at T0*Delta0 = {}", worst.0));
    let above: Vec<_> = band.iter().filter(|r| r.0 > 5.0).map(|r| (r.3 - r.2).abs() / r.2).collect();
    c.note(format!("max rel err for T0*Delta0 in (5,20]: {:.3}", max_of(above)));
    // log-log slope of the oracle where the S_n term dominates
    let tail: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 >= 30.0).map(|r| (r.1.ln(), r.2.ln())).collect();
    let slope = least_squares_slope(&tail);
    let expect = -2.0 * n as f64;
    c.le("oracle slope rel dev from -2n (T0*Delta0 in [30,80])", ((slope - expect) / expect).abs(), 0.05);
    c.note(format!("fitted slope {slope:.4}"));
    Ok(())
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    num / den
}

fn rz_grid_error(half_width: f64, tol: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = (0..400)
        .map(|k| (0.2 + 2.8 * (k / 20) as f64 / 19.0, 2.0 * (k % 20) as f64 / 19.0))
        .collect();
    let errs = collect(
        pts.par_iter()
            .map(|&(w0, d)| {
                let shape = PulseShape::sech(w0, half_width)?;
                let p = SystemParams::new(w0, d, 1)?;
                let u = propagate(&p, &shape, -half_width, half_width, tol)?;
                Ok((rosen_zener(w0, d).p_transfer - u.u12.norm_sqr()).abs())
            })
            .collect(),
    )?;
    Ok(max_of(errs))
}

fn rosen_zener_grid(tol: f64, c: &mut Check) -> Result<()> {
    c.le("max |P err| on 20x20 grid, support [-12,12]", rz_grid_error(12.0, tol)?, 1e-6);
    c.note(format!("reference, support [-16,16]: {:.3e}", rz_grid_error(16.0, tol)?));
    Ok(())
}

fn trig_lineshapes(tol: f64, c: &mut Check) -> Result<()> {
    for &(n, w0) in &[(1u32, FRAC_PI_2), (2, 2.0), (2, 6.0)] {
        let shape = PulseShape::trig(n, w0)?;
        let rows = collect(
            grid(0.0, 0.1, 61)
                .par_iter()
                .map(|&d| {
                    let p = SystemParams::new(w0, d, n)?;
                    let u = propagate(&p, &shape, 0.0, PI, tol)?;
                    let t = trig_lineshape(n, w0, d)?;
                    Ok(((t.p_transfer - u.u12.norm_sqr()).abs(), t.b_plus.re))
                })
                .collect(),
        )?;
        c.le(&format!("n={n} T0*Omega0={w0:.4} max |P err|"), max_of(rows.iter().map(|r| r.0)), 0.05);
        if n == 1 {
            c.holds("n=1 B+ purely imaginary", rows.iter().all(|r| r.1 == 0.0));
        }
    }
    Ok(())
}

fn half_scrap_checks(tol: f64, c: &mut Check) -> Result<()> {
    let power = PulseShape::power_rise(2, 100.0, 3.0)?;
    let expo = PulseShape::exponential_rise(100.0, 2.0, 1e-8)?;
    let gauss = PulseShape::gaussian(100.0, 1e-8)?;
    let mut analytic: f64 = 0.0;
    for seq in [Sequence::StarkPump, Sequence::PumpStark] {
        for shape in [&power, &expo] {
            analytic = analytic.max((half_scrap(seq, shape, 100.0, 0.0, tol)?.p_plus_final - 0.5).abs());
        }
    }
    c.le("resonant |p - 1/2| (analytic)", analytic, 1e-15);
    let mut numeric: f64 = 0.0;
    for seq in [Sequence::StarkPump, Sequence::PumpStark] {
        numeric = numeric.max((half_scrap(seq, &gauss, 100.0, 0.0, tol)?.p_plus_final - 0.5).abs());
    }
    c.le("resonant |p - 1/2| (Gaussian, numeric)", numeric, 1e-3);
    // doubling the duration doubles every dynamical phase
    let long = PulseShape::power_rise(2, 100.0, 6.0)?;
    let mut drift: f64 = 0.0;
    for &d in &[0.0, 2.0, 5.0] {
        let a = half_scrap(Sequence::StarkPump, &power, 100.0, d, tol)?;
        let b = half_scrap(Sequence::StarkPump, &long, 100.0, d, tol)?;
        drift = drift.max(wrap_angle(a.relative_phase - b.relative_phase).abs());
    }
    c.le("Stark-pump phase change under doubled duration", drift, 1e-12);
    let mut worst: f64 = 0.0;
    for &n in &[2u32, 4] {
        for &w0 in &[10.0, 100.0, 1000.0] {
            let tau = (1000.0f64 / w0).powf(1.0 / n as f64);
            let shape = PulseShape::power_rise(n, w0, tau)?;
            let errs = collect(
                grid(0.0, 0.5, 41)
                    .par_iter()
                    .map(|&d| {
                        let p = SystemParams::new(w0, d, n)?;
                        let o = oracle_adiabatic(&p, &shape, 0.0, tau, tol)?.b_plus.norm_sqr();
                        let l = universal_lifting_flagged(n, d, w0)?;
                        Ok((o - l.p_plus).abs())
                    })
                    .collect(),
            )?;
            worst = worst.max(max_of(errs));
        }
    }
    c.le("power n in {2,4} P+ curves max err", worst, 0.02);
    Ok(())
}

fn random_shape(rng: &mut StdRng) -> Result<PulseShape> {
    let w0 = rng.random_range(0.5..30.0);
    Ok(match rng.random_range(0..5) {
        0 => PulseShape::power_rise(rng.random_range(1..5), w0, rng.random_range(0.5..2.0))?,
        1 => PulseShape::trig(rng.random_range(1..4), w0)?,
        2 => PulseShape::sech(w0, rng.random_range(3.0..8.0))?,
        3 => PulseShape::gaussian(w0, 1e-8)?,
        _ => PulseShape::exponential_rise(w0, rng.random_range(-1.0..1.0), 1e-8)?,
    })
}

fn properties(tol: f64, c: &mut Check) -> Result<()> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let scenarios: Vec<(PulseShape, f64)> = (0..200)
        .map(|_| Ok((random_shape(&mut rng)?, rng.random_range(0.0..8.0))))
        .collect::<Result<_>>()?;
    let defects = collect(
        scenarios
            .par_iter()
            .map(|(shape, d)| {
                let p = SystemParams::new(shape.omega0, *d, 1)?;
                let (a, b) = shape.support();
                Ok(propagate(&p, shape, a, b, tol)?.unitarity_defect())
            })
            .collect(),
    )?;
    c.le("max unitarity defect / tol (200 scenarios)", max_of(defects) / tol, 10.0);

    let mut sum_dev: f64 = 0.0;
    for _ in 0..500 {
        let d = rng.random_range(0.0..20.0);
        let w0 = rng.random_range(20.0..500.0);
        let n = rng.random_range(1..6);
        let models = [
            linear_lifting(rng.random_range(0.0..5.0))?,
            universal_lifting_flagged(n, d, w0)?,
            exponential_lifting(rng.random_range(0.0..5.0), 100.0, 1e-8)?,
        ];
        for m in &models {
            sum_dev = sum_dev.max((m.p_minus + m.p_plus - 1.0).abs());
        }
    }
    c.le("max |p- + p+ - 1|", sum_dev, f64::EPSILON);

    // falling operator = transpose of the rising one
    let mut rev: f64 = 0.0;
    for k in 0..40 {
        let w0 = rng.random_range(0.5..20.0);
        let d = rng.random_range(0.0..5.0);
        let p = SystemParams::new(w0, d, 1)?;
        let (rise, fall) = if k % 2 == 0 {
            let n = rng.random_range(1..5);
            let t = rng.random_range(0.5..2.0);
            (
                PulseShape::power_rise(n, w0, t)?,
                PulseShape::new(PulseKind::PowerFall(n), w0, 0.0, t)?,
            )
        } else {
            let (a, b) = (rng.random_range(-6.0..-2.0), rng.random_range(-1.0..1.5));
            (
                PulseShape::new(PulseKind::Exponential(ExpSign::Rising), w0, a, b)?,
                PulseShape::new(PulseKind::Exponential(ExpSign::Falling), w0, -b, -a)?,
            )
        };
        let (ra, rb) = rise.support();
        let (fa, fb) = fall.support();
        let ur = propagate(&p, &rise, ra, rb, tol)?;
        let uf = propagate(&p, &fall, fa, fb, tol)?;
        rev = rev.max(uf.distance(&falling_from_rising(&ur)));
    }
    c.le("time-reversal max distance", rev, 1e-9);

    specfun_properties(&mut rng, c)
}

fn specfun_properties(rng: &mut StdRng, c: &mut Check) -> Result<()> {
    let mut rec: f64 = 0.0;
    for _ in 0..200 {
        let z = C::new(rng.random_range(0.5..5.0), rng.random_range(-20.0..20.0));
        let lhs = log_gamma(z + 1.0)?;
        let rhs = log_gamma(z)? + z.ln();
        // compare modulo 2 pi i
        let diff = lhs - rhs;
        rec = rec.max(diff.re.abs().max(wrap_angle(diff.im).abs()));
    }
    c.le("log-Gamma recurrence", rec, 1e-12);

    let mut half: f64 = 0.0;
    for k in 0..=100 {
        let a = 0.1 * k as f64;
        let m = log_gamma(C::new(0.5, a))?.re.exp();
        let expect = (PI / (PI * a).cosh()).sqrt();
        half = half.max((m - expect).abs() / expect);
    }
    c.le("|Gamma(1/2 + i a)| identity", half, 1e-12);

    let z = C::new(0.3, 0.4);
    let lhs = gamma(z)? * gamma(z + 0.5)?;
    let rhs = PI.sqrt() * C::new(2.0, 0.0).powc(1.0 - 2.0 * z) * gamma(2.0 * z)?;
    c.le("duplication identity", (lhs - rhs).norm(), 1e-12);

    let h = 1e-3;
    let mut weber: f64 = 0.0;
    for _ in 0..100 {
        let nu = C::new(0.0, rng.random_range(0.0..8.0));
        let z = C::from_polar(rng.random_range(0.1..15.0), rng.random_range(-PI..PI));
        let f = |x: C| parabolic_cylinder_d(nu, x);
        let dd = second_difference(f, z, h)?;
        let v = f(z)?;
        let res = dd + (nu + 0.5 - z * z / 4.0) * v;
        weber = weber.max(res.norm() / v.norm().max(f64::MIN_POSITIVE));
    }
    c.le("Weber ODE residual (relative)", weber, 1e-6);

    // finite differences of the analytic derivative where the stencil resolves 1e-8
    let mut kum: f64 = 0.0;
    for _ in 0..100 {
        let vp = rng.random_range(0.05..5.0);
        let (a, b) = (C::new(0.0, vp / 2.0), C::new(0.0, vp));
        let z = C::new(0.0, rng.random_range(0.5..30.0));
        let hk = 5e-3;
        let d = |x: C| kummer_m_with_derivative(a, b, x).map(|r| r.1);
        let d2 = (-d(z + 2.0 * hk)? + 8.0 * d(z + hk)? - 8.0 * d(z - hk)? + d(z - 2.0 * hk)?) / (12.0 * hk);
        let (v, d1) = kummer_m_with_derivative(a, b, z)?;
        kum = kum.max((z * d2 + (b - z) * d1 - a * v).norm() / v.norm());
    }
    c.le("Kummer ODE residual, finite differences (relative)", kum, 1e-8);
    // over the full range through the derivative identities
    // M' = (a/b) M(a+1, b+1), M'' = a(a+1)/(b(b+1)) M(a+2, b+2)
    let mut kum: f64 = 0.0;
    for _ in 0..100 {
        let vp = rng.random_range(0.05..20.0);
        let (a, b) = (C::new(0.0, vp / 2.0), C::new(0.0, vp));
        let z = C::new(0.0, rng.random_range(0.5..500.0));
        let v = kummer_m(a, b, z)?;
        let d1 = a / b * kummer_m(a + 1.0, b + 1.0, z)?;
        let d2 = a * (a + 1.0) / (b * (b + 1.0)) * kummer_m(a + 2.0, b + 2.0, z)?;
        kum = kum.max((z * d2 + (b - z) * d1 - a * v).norm() / v.norm());
    }
    c.le("Kummer ODE residual, contiguous derivatives (relative)", kum, 1e-8);
    Ok(())
}

fn second_difference(f: impl Fn(C) -> Result<C>, z: C, h: f64) -> Result<C> {
    Ok((-f(z + 2.0 * h)? + 16.0 * f(z + h)? - 30.0 * f(z)? + 16.0 * f(z - h)? - f(z - 2.0 * h)?) / (12.0 * h * h))
}

/// Runs one criterion. Numerical failures count as a failed criterion.
pub fn run_criterion(id: u8, tol: f64) -> CriterionOutcome {
    let start = Instant::now();
    let mut c = Check::new();
    let r = match id {
        1 => linear_rising(tol, &mut c),
        2 => half_lz(tol, &mut c),
        3 => exponential(tol, &mut c),
        4 => small_detuning(&mut c),
        5 => universal(tol, &mut c),
        6 => large_detuning(tol, &mut c),
        7 => rosen_zener_grid(tol, &mut c),
        8 => trig_lineshapes(tol, &mut c),
        9 => half_scrap_checks(tol, &mut c),
        10 => properties(tol, &mut c),
        _ => Err(crate::error::Error::InvalidArgument(format!("no criterion {id}"))),
    };
    if let Err(e) = r {
        c.passed = false;
        c.note(format!("error: {e}"));
    }
    let seconds = start.elapsed().as_secs_f64();
    let budget_seconds = budget(id);
    if seconds > budget_seconds {
        c.passed = false;
        c.note(format!("runtime {seconds:.1} s exceeds {budget_seconds} s"));
    }
    CriterionOutcome { id, title: title(id), passed: c.passed, detail: c.parts.join("; "), seconds, budget_seconds }
}

pub fn run_all(tol: f64) -> Vec<CriterionOutcome> {
    (1..=CRITERIA).map(|id| run_criterion(id, tol)).collect()
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}
