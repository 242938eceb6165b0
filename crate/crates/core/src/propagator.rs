//! Numerical propagation of the driven two-level system, frame changes
//! (bare, adiabatic, Landau-Zener), adiabaticity diagnostics and dynamical
//! phases.
//!
//! Conventions: the state is (B-, B+) and obeys
//! i d/dtau (B-, B+) = (1/2) [[-D, W(tau)], [W(tau), D]] (B-, B+)
//! with D = T0*Delta0 and W = T0*Omega(tau).

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::pulses::{rabi_at, rabi_derivative, PulseKind, PulseShape, SystemParams};
use crate::quad::{integrate as quad, QuadOptions};
use num_complex::Complex64 as C;
use std::f64::consts::FRAC_1_SQRT_2;

pub const DEFAULT_TOL: f64 = 1e-11;

/// Element of SU(2) stored as its first row; the full matrix is
/// [[u11, u12], [-conj(u12), conj(u11)]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Operator {
    pub u11: C,
    pub u12: C,
}

pub type Matrix2 = [[C; 2]; 2];

impl SU2Operator {
    pub fn identity() -> Self {
        SU2Operator { u11: C::new(1.0, 0.0), u12: C::new(0.0, 0.0) }
    }

    pub fn new(u11: C, u12: C) -> Self {
        SU2Operator { u11, u12 }
    }

    pub fn diagonal_phase(phase: f64) -> Self {
        SU2Operator { u11: C::from_polar(1.0, phase), u12: C::new(0.0, 0.0) }
    }

    pub fn matrix(&self) -> Matrix2 {
        [[self.u11, self.u12], [-self.u12.conj(), self.u11.conj()]]
    }

    /// Re-pack a matrix assumed to lie in SU(2) (its first row is kept).
    pub fn from_matrix(m: &Matrix2) -> Self {
        SU2Operator { u11: m[0][0], u12: m[0][1] }
    }

    /// self * other
    pub fn compose(&self, other: &SU2Operator) -> Self {
        Self::from_matrix(&matmul(&self.matrix(), &other.matrix()))
    }

    pub fn dagger(&self) -> Self {
        SU2Operator { u11: self.u11.conj(), u12: -self.u12 }
    }

    pub fn transpose(&self) -> Self {
        SU2Operator { u11: self.u11, u12: -self.u12.conj() }
    }

    pub fn apply(&self, s: &StateVector) -> StateVector {
        let m = self.matrix();
        StateVector {
            b_minus: m[0][0] * s.b_minus + m[0][1] * s.b_plus,
            b_plus: m[1][0] * s.b_minus + m[1][1] * s.b_plus,
        }
    }

    /// | |u11|^2 + |u12|^2 - 1 |
    pub fn unitarity_defect(&self) -> f64 {
        (self.u11.norm_sqr() + self.u12.norm_sqr() - 1.0).abs()
    }

    /// Largest entry-wise distance between the full matrices.
    pub fn distance(&self, other: &SU2Operator) -> f64 {
        (self.u11 - other.u11).norm().max((self.u12 - other.u12).norm())
    }
}

pub fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut r = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub b_minus: C,
    pub b_plus: C,
}

impl StateVector {
    pub fn ground() -> Self {
        StateVector { b_minus: C::new(1.0, 0.0), b_plus: C::new(0.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.b_minus.norm_sqr() + self.b_plus.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Picture {
    /// Integrate the bare amplitudes directly.
    #[default]
    Schrodinger,
    /// Factor out the detuning phases e^{-+ i D tau / 2}; preferable when
    /// D is large compared with the coupling.
    Interaction,
}

#[derive(Debug, Clone, Copy)]
pub struct PropagatorConfig {
    pub tol: f64,
    pub picture: Picture,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        PropagatorConfig { tol: DEFAULT_TOL, picture: Picture::Schrodinger }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(Error::InvalidArgument(format!("tol must lie in [1e-13, 1e-6], got {tol}")));
    }
    Ok(())
}

/// Interval endpoints split at the envelope's breakpoints.
fn segments(shape: &PulseShape, a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a];
    for p in shape.breakpoints() {
        if p > a && p < b {
            pts.push(p);
        }
    }
    pts.push(b);
    pts
}

// state layout: [Re B-, Im B-, Re B+, Im B+] per column
fn rhs_lab(d: f64, w: f64, y: &[f64], out: &mut [f64]) {
    // i B-' = (-d B- + w B+)/2  =>  B-' = -i(-d B- + w B+)/2
    let (bm, bp) = (C::new(y[0], y[1]), C::new(y[2], y[3]));
    let mi = C::new(0.0, -0.5);
    let dm = mi * (-d * bm + w * bp);
    let dp = mi * (w * bm + d * bp);
    out[0] = dm.re;
    out[1] = dm.im;
    out[2] = dp.re;
    out[3] = dp.im;
}

fn rhs_interaction(d: f64, w: f64, tau: f64, y: &[f64], out: &mut [f64]) {
    // i c-' = (w/2) e^{-i d tau} c+,  i c+' = (w/2) e^{i d tau} c-
    let (cm, cp) = (C::new(y[0], y[1]), C::new(y[2], y[3]));
    let e = C::from_polar(1.0, -d * tau);
    let mi = C::new(0.0, -0.5 * w);
    let dm = mi * e * cp;
    let dp = mi * e.conj() * cm;
    out[0] = dm.re;
    out[1] = dm.im;
    out[2] = dp.re;
    out[3] = dp.im;
}

fn to_picture(picture: Picture, d: f64, tau: f64, s: StateVector) -> StateVector {
    match picture {
        Picture::Schrodinger => s,
        Picture::Interaction => StateVector {
            b_minus: s.b_minus * C::from_polar(1.0, -d * tau / 2.0),
            b_plus: s.b_plus * C::from_polar(1.0, d * tau / 2.0),
        },
    }
}

fn from_picture(picture: Picture, d: f64, tau: f64, s: StateVector) -> StateVector {
    match picture {
        Picture::Schrodinger => s,
        Picture::Interaction => StateVector {
            b_minus: s.b_minus * C::from_polar(1.0, d * tau / 2.0),
            b_plus: s.b_plus * C::from_polar(1.0, -d * tau / 2.0),
        },
    }
}

fn pack(s: &StateVector, y: &mut [f64]) {
    y[0] = s.b_minus.re;
    y[1] = s.b_minus.im;
    y[2] = s.b_plus.re;
    y[3] = s.b_plus.im;
}

fn unpack(y: &[f64]) -> StateVector {
    StateVector { b_minus: C::new(y[0], y[1]), b_plus: C::new(y[2], y[3]) }
}

/// Evolves both basis states at once and reports the bare-frame operator
/// U(tau, tau_a) at every requested sample (sorted, inside [tau_a, tau_b]).
pub fn propagate_operator_samples(
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    samples: &[f64],
    cfg: &PropagatorConfig,
) -> Result<Vec<SU2Operator>> {
    check_tol(cfg.tol)?;
    let tau_b = samples.iter().cloned().fold(tau_a, f64::max);
    if samples.iter().any(|&s| s < tau_a || !s.is_finite()) || !tau_a.is_finite() {
        return Err(Error::InvalidArgument("samples must be finite and not precede tau_a".into()));
    }
    let d = params.t0_delta0;
    let picture = cfg.picture;
    let opts = OdeOptions::with_tol(cfg.tol);
    let mut y = [0.0; 8];
    pack(&to_picture(picture, d, tau_a, StateVector::ground()), &mut y[0..4]);
    pack(
        &to_picture(picture, d, tau_a, StateVector { b_minus: C::new(0.0, 0.0), b_plus: C::new(1.0, 0.0) }),
        &mut y[4..8],
    );
    let mut out: Vec<(f64, SU2Operator)> = Vec::with_capacity(samples.len());
    let pts = segments(shape, tau_a, tau_b);
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    for win in pts.windows(2) {
        let (a, b) = (win[0], win[1]);
        let last = b == tau_b;
        let local: Vec<f64> = sorted
            .iter()
            .cloned()
            .filter(|&s| s >= a && (s < b || (last && s <= b)))
            .filter(|&s| !(s == a && a != tau_a && out.iter().any(|o| o.0 == s)))
            .collect();
        // evaluate the envelope strictly inside the segment so one-sided
        // values are used at kinks
        let mid = 0.5 * (a + b);
        let w_at = |t: f64| {
            let tt = t.clamp(a, b);
            let w = rabi_at(shape, tt);
            if shape.kind.is_truncated() && (tt == a || tt == b) {
                rabi_at(shape, tt + (mid - tt) * 1e-12)
            } else {
                w
            }
        };
        let rhs = |t: f64, y: &[f64; 8], dy: &mut [f64; 8]| {
            let w = w_at(t);
            match picture {
                Picture::Schrodinger => {
                    rhs_lab(d, w, &y[0..4], &mut dy[0..4]);
                    rhs_lab(d, w, &y[4..8], &mut dy[4..8]);
                }
                Picture::Interaction => {
                    rhs_interaction(d, w, t, &y[0..4], &mut dy[0..4]);
                    rhs_interaction(d, w, t, &y[4..8], &mut dy[4..8]);
                }
            }
        };
        y = ode::integrate(rhs, a, y, b, opts, &local, |t, y| {
            let c1 = from_picture(picture, d, t, unpack(&y[0..4]));
            let c2 = from_picture(picture, d, t, unpack(&y[4..8]));
            out.push((t, SU2Operator { u11: c1.b_minus, u12: c2.b_minus }));
            let _ = c2.b_plus;
        })?;
    }
    // map back to the caller's ordering
    let mut res = Vec::with_capacity(samples.len());
    for s in samples {
        let op = out
            .iter()
            .find(|o| o.0 == *s)
            .map(|o| o.1)
            .ok_or_else(|| Error::InvalidArgument(format!("sample {s} was not reached")))?;
        res.push(op);
    }
    Ok(res)
}

/// Bare-frame evolution operator U(tau_b, tau_a).
pub fn propagate(params: &SystemParams, shape: &PulseShape, tau_a: f64, tau_b: f64, tol: f64) -> Result<SU2Operator> {
    propagate_with(params, shape, tau_a, tau_b, &PropagatorConfig { tol, ..Default::default() })
}

pub fn propagate_with(
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    tau_b: f64,
    cfg: &PropagatorConfig,
) -> Result<SU2Operator> {
    if tau_a.is_nan() || tau_b.is_nan() || tau_a > tau_b {
        return Err(Error::InvalidArgument(format!("tau_a = {tau_a} exceeds tau_b = {tau_b}")));
    }
    Ok(propagate_operator_samples(params, shape, tau_a, &[tau_b], cfg)?[0])
}

/// Mixing angle theta in [0, pi/2) with tan(2 theta) = Omega / Delta.
pub fn mixing_angle(omega: f64, delta: f64) -> Result<f64> {
    if omega == 0.0 && delta == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    Ok(0.5 * omega.atan2(delta))
}

/// R(theta) = [[cos, sin], [-sin, cos]]: columns are the adiabatic states.
pub fn rotation(theta: f64) -> SU2Operator {
    SU2Operator { u11: C::new(theta.cos(), 0.0), u12: C::new(theta.sin(), 0.0) }
}

fn theta_at(params: &SystemParams, shape: &PulseShape, tau: f64) -> Result<f64> {
    mixing_angle(rabi_at(shape, tau), params.t0_delta0)
}

/// U_A = R(theta(tau_b))^dagger U R(theta(tau_a)).
pub fn to_adiabatic_frame(
    u: &SU2Operator,
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    tau_b: f64,
) -> Result<SU2Operator> {
    let ra = rotation(theta_at(params, shape, tau_a)?);
    let rb = rotation(theta_at(params, shape, tau_b)?);
    Ok(rb.dagger().compose(u).compose(&ra))
}

/// Inverse of [`to_adiabatic_frame`].
pub fn from_adiabatic_frame(
    ua: &SU2Operator,
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    tau_b: f64,
) -> Result<SU2Operator> {
    let ra = rotation(theta_at(params, shape, tau_a)?);
    let rb = rotation(theta_at(params, shape, tau_b)?);
    Ok(rb.compose(ua).compose(&ra.dagger()))
}

/// Adiabatic amplitudes (A-, A+) = R(theta)^dagger (B-, B+).
pub fn state_to_adiabatic(s: &StateVector, theta: f64) -> StateVector {
    rotation(theta).dagger().apply(s)
}

/// The fixed Landau-Zener basis change S = [[1, 1], [-1, 1]] / sqrt(2).
pub fn lz_matrix() -> SU2Operator {
    SU2Operator { u11: C::new(FRAC_1_SQRT_2, 0.0), u12: C::new(FRAC_1_SQRT_2, 0.0) }
}

/// U_LZ = S^dagger U S.
pub fn lz_frame(u: &SU2Operator) -> SU2Operator {
    let s = lz_matrix();
    s.dagger().compose(u).compose(&s)
}

/// U = S U_LZ S^dagger.
pub fn from_lz_frame(u_lz: &SU2Operator) -> SU2Operator {
    let s = lz_matrix();
    s.compose(u_lz).compose(&s.dagger())
}

/// Non-adiabatic coupling gamma = 2 dtheta/dtau = W' D / (D^2 + W^2).
pub fn nonadiabatic_coupling(params: &SystemParams, shape: &PulseShape, tau: f64) -> Result<f64> {
    let d = params.t0_delta0;
    let w = rabi_at(shape, tau);
    let dw = rabi_derivative(shape, tau, 1)?;
    if d == 0.0 && w == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    Ok(dw * d / (d * d + w * w))
}

/// gamma~ = |gamma| / (2 delta), delta = sqrt(D^2 + W^2).
pub fn gamma_tilde(params: &SystemParams, shape: &PulseShape, tau: f64) -> Result<f64> {
    let d = params.t0_delta0;
    let w = rabi_at(shape, tau);
    let g = nonadiabatic_coupling(params, shape, tau)?;
    Ok(g.abs() / (2.0 * (d * d + w * w).sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticityProfile {
    pub tau_m: f64,
    pub gamma_tilde_max: f64,
    pub samples: Vec<(f64, f64)>,
    /// Closed-form (tau_M, gamma~(tau_M)) when the shape admits one.
    pub closed_form: Option<(f64, f64)>,
}

const PROFILE_SAMPLES: usize = 2001;

/// Location and size of the strongest non-adiabaticity over the support.
pub fn adiabaticity_profile(params: &SystemParams, shape: &PulseShape) -> Result<AdiabaticityProfile> {
    let (mut a, mut b) = shape.support();
    if !a.is_finite() {
        a = -40.0;
    }
    if !b.is_finite() {
        b = 40.0;
    }
    let eval = |t: f64| gamma_tilde(params, shape, t).unwrap_or(f64::NAN);
    let mut samples = Vec::with_capacity(PROFILE_SAMPLES);
    for i in 0..PROFILE_SAMPLES {
        let t = a + (b - a) * i as f64 / (PROFILE_SAMPLES - 1) as f64;
        samples.push((t, eval(t)));
    }
    let (imax, _) = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.1.is_finite())
        .fold((0usize, f64::NEG_INFINITY), |acc, (i, s)| if s.1 > acc.1 { (i, s.1) } else { acc });
    // golden-section refinement inside the bracketing cells
    let lo = samples[imax.saturating_sub(1)].0;
    let hi = samples[(imax + 1).min(samples.len() - 1)].0;
    let (tau_m, gmax) = golden_max(&eval, lo, hi, samples[imax]);
    let closed_form = match shape.kind {
        PulseKind::PowerRise(n) if params.t0_delta0 > 0.0 && shape.omega0 > 0.0 => {
            let nf = n as f64;
            let x = ((nf - 1.0) / (2.0 * nf + 1.0)).powf(1.0 / (2.0 * nf))
                * (params.t0_delta0 / shape.omega0).powf(1.0 / nf);
            let t = shape.tau_start + x;
            let g = if n == 1 {
                0.5 * shape.omega0 / (params.t0_delta0 * params.t0_delta0)
            } else {
                eval(t)
            };
            Some((t, g))
        }
        _ => None,
    };
    Ok(AdiabaticityProfile { tau_m, gamma_tilde_max: gmax, samples, closed_form })
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, best: (f64, f64)) -> (f64, f64) {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut best = best;
    for _ in 0..80 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        let (f1, f2) = (f(x1), f(x2));
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v.is_finite() && v > best.1 {
                best = (x, v);
            }
        }
        if f1 >= f2 {
            hi = x2;
        } else {
            lo = x1;
        }
        if hi - lo < 1e-13 * (1.0 + lo.abs()) {
            break;
        }
    }
    best
}

/// eta_d = (1/2) * integral of sqrt(D^2 + W^2) over [tau_a, tau_b].
pub fn dynamical_phase(params: &SystemParams, shape: &PulseShape, tau_a: f64, tau_b: f64) -> Result<f64> {
    if tau_a.is_nan() || tau_b.is_nan() || tau_a > tau_b {
        return Err(Error::InvalidArgument(format!("tau_a = {tau_a} exceeds tau_b = {tau_b}")));
    }
    let d = params.t0_delta0;
    let w0 = shape.omega0;
    let linear_prim = |x: f64| {
        // antiderivative of (1/2) sqrt(d^2 + w0^2 x^2)
        if d == 0.0 {
            0.25 * w0 * x * x.abs()
        } else if w0 == 0.0 {
            0.5 * d * x
        } else {
            0.5 * (0.5 * x * (d * d + w0 * w0 * x * x).sqrt() + d * d / (2.0 * w0) * (w0 * x / d).asinh())
        }
    };
    let (s, e) = shape.support();
    match shape.kind {
        PulseKind::PowerRise(1) | PulseKind::PowerFall(1) => {
            // outside the support only the detuning contributes
            let (ca, cb) = (tau_a.max(s).min(e), tau_b.min(e).max(s));
            let outside = 0.5 * d * ((tau_b - tau_a) - (cb - ca).max(0.0));
            let inner = if cb > ca {
                match shape.kind {
                    PulseKind::PowerRise(_) => linear_prim(cb - s) - linear_prim(ca - s),
                    _ => linear_prim(e - ca) - linear_prim(e - cb),
                }
            } else {
                0.0
            };
            Ok(inner + outside)
        }
        _ => {
            let pts = segments(shape, tau_a, tau_b);
            let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 20_000 };
            let mut total = 0.0;
            for win in pts.windows(2) {
                let r = quad(
                    |t: f64| {
                        let w = rabi_at(shape, t);
                        0.5 * (d * d + w * w).sqrt()
                    },
                    win[0],
                    win[1],
                    opts,
                );
                if !r.converged {
                    return Err(Error::IntegrationFailure {
                        tau: win[0],
                        reason: "dynamical phase quadrature did not converge".into(),
                    });
                }
                total += r.value;
            }
            Ok(total)
        }
    }
}

/// Creation-of-degeneracy operator from the rising operator on the
/// mirrored interval: the transpose.
pub fn falling_from_rising(u_rise: &SU2Operator) -> SU2Operator {
    u_rise.transpose()
}

/// Bare states at the samples, starting from `init` at `tau_a`.
pub fn propagate_states(
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    init: StateVector,
    samples: &[f64],
    cfg: &PropagatorConfig,
) -> Result<Vec<StateVector>> {
    let ops = propagate_operator_samples(params, shape, tau_a, samples, cfg)?;
    Ok(ops.iter().map(|u| u.apply(&init)).collect())
}

/// Integrates the adiabatic-frame equation
/// i A' = (1/2) [[-delta, -i gamma], [i gamma, delta]] A directly.
pub fn propagate_adiabatic(
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    tau_b: f64,
    init: StateVector,
    tol: f64,
) -> Result<StateVector> {
    check_tol(tol)?;
    let d = params.t0_delta0;
    let opts = OdeOptions::with_tol(tol);
    let mut y = [0.0; 4];
    pack(&init, &mut y);
    for win in segments(shape, tau_a, tau_b).windows(2) {
        let (a, b) = (win[0], win[1]);
        let mid = 0.5 * (a + b);
        let inner = |t: f64| if t <= a || t >= b { t + (mid - t) * 1e-12 } else { t };
        let mut failure = None;
        let rhs = |t: f64, y: &[f64; 4], dy: &mut [f64; 4]| {
            let tt = inner(t);
            let w = rabi_at(shape, tt);
            let delta = (d * d + w * w).sqrt();
            let g = match rabi_derivative(shape, tt, 1) {
                Ok(dw) => dw * d / (d * d + w * w),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            };
            let (am, ap) = (C::new(y[0], y[1]), C::new(y[2], y[3]));
            // A' = -i H_A A
            let mi = C::new(0.0, -0.5);
            let dm = mi * (-delta * am + C::new(0.0, -g) * ap);
            let dp = mi * (C::new(0.0, g) * am + delta * ap);
            dy[0] = dm.re;
            dy[1] = dm.im;
            dy[2] = dp.re;
            dy[3] = dp.im;
        };
        y = ode::integrate(rhs, a, y, b, opts, &[], |_, _| {})?;
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(unpack(&y))
}

/// Phase unwrapping by nearest-branch continuation.
pub fn unwrap_phases(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    let two_pi = 2.0 * std::f64::consts::PI;
    for (i, &p) in wrapped.iter().enumerate() {
        if i > 0 {
            let prev = wrapped[i - 1];
            let jump = p - prev;
            offset -= two_pi * (jump / two_pi).round();
        }
        out.push(p + offset);
    }
    out
}

/// One sample of an adiabatic-frame trajectory.
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticSample {
    pub tau: f64,
    pub a_minus: C,
    pub a_plus: C,
    /// arg A-, unwrapped along the trajectory
    pub phase_minus: f64,
    /// arg A+, unwrapped along the trajectory
    pub phase_plus: f64,
}

/// Adiabatic amplitudes along a trajectory, sampled densely enough for
/// continuous phase unwrapping; the returned samples are those requested.
pub fn adiabatic_trajectory(
    params: &SystemParams,
    shape: &PulseShape,
    tau_a: f64,
    init: StateVector,
    samples: &[f64],
    cfg: &PropagatorConfig,
) -> Result<Vec<AdiabaticSample>> {
    let tau_b = samples.iter().cloned().fold(tau_a, f64::max);
    let d = params.t0_delta0;
    // bound the phase rate delta/2 on a probe grid
    let probe = 4096;
    let mut wmax: f64 = 0.0;
    for i in 0..=probe {
        let t = tau_a + (tau_b - tau_a) * i as f64 / probe as f64;
        wmax = wmax.max(rabi_at(shape, t));
    }
    let rate = 0.5 * (d * d + wmax * wmax).sqrt() + 1.0;
    let dense_n = (((tau_b - tau_a) * rate / 0.5).ceil() as usize).clamp(2, 2_000_000);
    let mut grid: Vec<f64> = (0..=dense_n)
        .map(|i| tau_a + (tau_b - tau_a) * i as f64 / dense_n as f64)
        .chain(samples.iter().cloned())
        .collect();
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    let states = propagate_states(params, shape, tau_a, init, &grid, cfg)?;
    let mut am = Vec::with_capacity(grid.len());
    let mut ap = Vec::with_capacity(grid.len());
    for (t, s) in grid.iter().zip(states.iter()) {
        let w = rabi_at(shape, *t);
        let th = if w == 0.0 && d == 0.0 { 0.0 } else { mixing_angle(w, d)? };
        let a = state_to_adiabatic(s, th);
        am.push(a.b_minus);
        ap.push(a.b_plus);
    }
    let pm = unwrap_phases(&am.iter().map(|z| z.arg()).collect::<Vec<_>>());
    let pp = unwrap_phases(&ap.iter().map(|z| z.arg()).collect::<Vec<_>>());
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        let i = grid.partition_point(|g| g < s);
        out.push(AdiabaticSample { tau: *s, a_minus: am[i], a_plus: ap[i], phase_minus: pm[i], phase_plus: pp[i] });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_algebra() {
        let u = SU2Operator::new(C::new(0.6, 0.0), C::new(0.0, 0.8));
        let id = u.compose(&u.dagger());
        assert!(id.distance(&SU2Operator::identity()) < 1e-15);
        let t = u.transpose().matrix();
        let m = u.matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((t[i][j] - m[j][i]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn unwrap_follows_branch() {
        let raw = [3.0, -3.1, 2.9, 2.0];
        let u = unwrap_phases(&raw);
        assert!((u[1] - (-3.1 + 2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!((u[2] - 2.9).abs() < 1e-15);
    }
}
