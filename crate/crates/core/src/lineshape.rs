//! Full-pulse transfer built from lifting, adiabatic following and
//! creation of quasi-degeneracy; Rosen-Zener and trig-pulse lineshapes;
//! Half-SCRAP superpositions.

use crate::asymptotics::{exponential_lifting, universal_lifting_flagged, LiftingResult};
use crate::error::{Error, Result};
use crate::propagator::{
    dynamical_phase, falling_from_rising, gamma_tilde, propagate_with, rotation, mixing_angle, PropagatorConfig,
    SU2Operator,
};
use crate::pulses::{pulse_area, ExpSign, PulseKind, PulseShape, SystemParams};
use crate::specfun::wrap_angle;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Final bare amplitudes after a complete pulse.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LineshapePoint {
    pub t0_delta0: f64,
    pub b_minus: C,
    pub b_plus: C,
    /// |B+|^2.
    pub p_transfer: f64,
    /// False when the phase of B- is only approximate.
    pub b_minus_phase_exact: bool,
    pub warning: Option<String>,
}

impl LineshapePoint {
    fn new(t0_delta0: f64, b_minus: C, b_plus: C, b_minus_phase_exact: bool, warning: Option<String>) -> Self {
        LineshapePoint { t0_delta0, b_minus, b_plus, p_transfer: b_plus.norm_sqr(), b_minus_phase_exact, warning }
    }
}

/// Validity thresholds of [`composed_transfer`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposeOptions {
    /// Smallest accepted pulse area.
    pub min_area: f64,
    /// gamma~ at the junctions must stay below this.
    pub junction_threshold: f64,
    /// Explicit junction times; located automatically when `None`.
    pub tau_1: Option<f64>,
    pub tau_2: Option<f64>,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions { min_area: 5.0, junction_threshold: 0.01, tau_1: None, tau_2: None }
    }
}

/// Operator in the adiabatic basis whose first column is (A-, A+).
fn lifting_operator(l: &LiftingResult, phase: f64) -> SU2Operator {
    let (am, ap) = l.amplitudes(phase);
    SU2Operator::new(am, -ap.conj())
}

const JUNCTION_SAMPLES: usize = 2001;

/// Point of smallest gamma~ between `from` and `to` (ties resolved towards
/// `to`). The asymptotic lifting phases hold deep in the plateau, so a
/// junction placed where gamma~ merely crosses a threshold leaves a phase
/// error for exponential tails that does not shrink with Omega0.
fn find_junction(params: &SystemParams, shape: &PulseShape, from: f64, to: f64, threshold: f64) -> Result<f64> {
    let mut best = (from, f64::INFINITY);
    for i in 0..JUNCTION_SAMPLES {
        let t = from + (to - from) * i as f64 / (JUNCTION_SAMPLES - 1) as f64;
        // the conical point only occurs at D = 0, where gamma vanishes anyway
        let g = gamma_tilde(params, shape, t).unwrap_or(0.0);
        if g <= best.1 {
            best = (t, g);
        }
    }
    if best.1 >= threshold {
        return Err(Error::NonAdiabaticJunction { tau: best.0, gamma_tilde: best.1, threshold });
    }
    Ok(best.0)
}

fn check_junction(params: &SystemParams, shape: &PulseShape, tau: f64, threshold: f64) -> Result<()> {
    let g = gamma_tilde(params, shape, tau).unwrap_or(0.0);
    if g >= threshold {
        return Err(Error::NonAdiabaticJunction { tau, gamma_tilde: g, threshold });
    }
    Ok(())
}

/// Full-pulse amplitudes from U = U_c U_a U_l: lifting on the rise,
/// adiabatic following with the dynamical phase, and creation of
/// quasi-degeneracy on the fall (the transposed rising operator).
///
/// Supported pulses: `TrigPower(n)`, `LinearTruncated` and `Sech`.
pub fn composed_transfer(params: &SystemParams, shape: &PulseShape, opts: &ComposeOptions) -> Result<LineshapePoint> {
    let d = params.t0_delta0;
    let (ti, tf) = shape.support();
    if !(ti.is_finite() && tf.is_finite()) {
        return Err(Error::InvalidArgument("composed_transfer needs a finite support".into()));
    }
    let area = pulse_area(shape, ti, tf)?;
    if area < opts.min_area {
        return Err(Error::AreaTooSmall { area, min: opts.min_area });
    }
    let mid = 0.5 * (ti + tf);
    let thr = opts.junction_threshold;
    let t1 = match opts.tau_1 {
        Some(t) => t,
        None if d == 0.0 => mid,
        None => find_junction(params, shape, ti, mid, thr)?,
    };
    let t2 = match opts.tau_2 {
        Some(t) => t,
        None if d == 0.0 => mid,
        None => find_junction(params, shape, tf, mid, thr)?,
    };
    if !(ti <= t1 && t1 <= t2 && t2 <= tf) {
        return Err(Error::InvalidArgument(format!("junctions {t1}, {t2} not ordered inside [{ti}, {tf}]")));
    }
    check_junction(params, shape, t1, thr)?;
    check_junction(params, shape, t2, thr)?;

    let follow = dynamical_phase(params, shape, t1, t2)?;
    let (rise, fall, phase_exact) = match shape.kind {
        PulseKind::TrigPower(n) => {
            let l = universal_lifting_flagged(n, d, shape.omega0)?;
            let r = lifting_operator(&l, dynamical_phase(params, shape, ti, t1)?);
            let f = lifting_operator(&l, dynamical_phase(params, shape, t2, tf)?);
            (r, f, true)
        }
        PulseKind::LinearTruncated => {
            let l = universal_lifting_flagged(1, d, shape.omega0)?;
            let r = lifting_operator(&l, dynamical_phase(params, shape, ti, t1)?);
            let f = lifting_operator(&l, dynamical_phase(params, shape, t2, tf)?);
            (r, f, true)
        }
        PulseKind::Sech => {
            // tails 2 Omega0 e^{-|tau|}: the area before the cut is the initial area
            let w0 = shape.omega0;
            let s_i = w0 * 2.0 * ti.exp().atan();
            let s_f = w0 * 2.0 * (-tf).exp().atan();
            let z1 = 0.5 * (s_i + pulse_area(shape, ti, t1)?);
            let z2 = 0.5 * (s_f + pulse_area(shape, t2, tf)?);
            let r = lifting_operator(&exponential_lifting(d, z1, s_i)?, z1);
            let f = lifting_operator(&exponential_lifting(d, z2, s_f)?, z2);
            (r, f, false)
        }
        other => {
            return Err(Error::InvalidArgument(format!("no closed-form lifting for {other:?}")));
        }
    };
    let ua = SU2Operator::diagonal_phase(follow);
    let u = falling_from_rising(&fall).compose(&ua).compose(&rise);
    let warning = (area < 5.0).then(|| format!("pulse area {area} is not large"));
    Ok(LineshapePoint::new(d, u.u11, -u.u12.conj(), phase_exact, warning))
}

/// Rosen-Zener result for Omega0 sech(tau). B- is returned without the
/// common phase e^{2 i xi}, which depends on the truncation of the tails.
pub fn rosen_zener(t0_omega0: f64, t0_delta0: f64) -> LineshapePoint {
    let (s, c) = (PI * t0_omega0 / 2.0).sin_cos();
    let x = PI * t0_delta0 / 2.0;
    let b_plus = C::new(0.0, -s / x.cosh());
    let b_minus = C::new(c, s * x.tanh());
    LineshapePoint::new(t0_delta0, b_minus, b_plus, false, None)
}

/// Closed-form lineshape of Omega0 sin^n(tau) on [0, pi].
pub fn trig_lineshape(n: u32, t0_omega0: f64, t0_delta0: f64) -> Result<LineshapePoint> {
    let shape = PulseShape::trig(n, t0_omega0)?;
    let params = SystemParams::new(t0_omega0.max(f64::MIN_POSITIVE), t0_delta0, n)?;
    let eta = dynamical_phase(&params, &shape, 0.0, PI)?;
    // near tau = 0 the pulse behaves as Omega0 tau^n
    let l = universal_lifting_flagged(n, t0_delta0, t0_omega0)?;
    let (pm, pp) = (l.p_minus, l.p_plus);
    let sigma = l.chi_plus + l.chi_minus + eta;
    let b_plus = C::new(0.0, -2.0 * (pp * pm).sqrt() * sigma.sin());
    let b_minus = C::from_polar(pm, 2.0 * l.chi_minus + eta) + C::from_polar(pp, -(2.0 * l.chi_plus + eta));
    let area = pulse_area(&shape, 0.0, PI)?;
    let warning = if area < PI * (1.0 - 1e-12) {
        Some(format!("pulse area {area} is below pi"))
    } else {
        l.warning
    };
    Ok(LineshapePoint::new(t0_delta0, b_minus, b_plus, true, warning))
}

/// lambda-+ = -+ (1/2) sqrt(Omega^2 + Delta^2), in units of hbar / T0.
pub fn eigenenergy_surface(t0_omega: f64, t0_delta: f64) -> (f64, f64) {
    let h = 0.5 * t0_omega.hypot(t0_delta);
    (-h, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sequence {
    /// Stark pulse first: lifting along Delta, creation along Omega.
    StarkPump,
    /// Pump pulse first: lifting along Omega, creation along Delta.
    PumpStark,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HalfScrapResult {
    pub sequence: Sequence,
    pub p_plus_final: f64,
    /// arg B+ - arg B-, wrapped to (-pi, pi] (optical phase excluded).
    pub relative_phase: f64,
    /// True when the relative phase carries no dynamical phase.
    pub robust_phase: bool,
    /// True when the lifting was obtained by integrating the Schrodinger equation.
    pub numeric: bool,
    pub b_minus: C,
    pub b_plus: C,
}

/// Half-SCRAP superposition produced by a pump of the given rising shape.
///
/// The Stark pulse is modelled as the path direction in (Omega, Delta):
/// along Delta it lifts or creates the degeneracy trivially (theta = 0).
/// The adiabatic plateau accumulates the dynamical phase of `pump_shape`
/// over its support.
pub fn half_scrap(
    sequence: Sequence,
    pump_shape: &PulseShape,
    t0_omega0: f64,
    t0_delta0: f64,
    tol: f64,
) -> Result<HalfScrapResult> {
    let shape = pump_shape.with_omega0(t0_omega0);
    let n = match shape.kind {
        PulseKind::PowerRise(n) => n,
        _ => 1,
    };
    let params = SystemParams::new(t0_omega0, t0_delta0, n)?;
    let (ti, tf) = shape.support();
    let (a_minus, a_plus, numeric) = match shape.kind {
        PulseKind::PowerRise(n) => {
            let l = crate::asymptotics::universal_lifting(n, t0_delta0, t0_omega0)?;
            let eta = dynamical_phase(&params, &shape, ti, tf)?;
            let (am, ap) = l.amplitudes(eta);
            (am, ap, false)
        }
        PulseKind::Exponential(ExpSign::Rising) => {
            let s_i = t0_omega0 * ti.exp();
            let zeta = 0.5 * t0_omega0 * tf.exp();
            let l = exponential_lifting(t0_delta0, zeta, s_i)?;
            let (am, ap) = l.amplitudes(zeta);
            (am, ap, false)
        }
        PulseKind::Gaussian => {
            // no closed lifting formula: integrate up to the peak
            let end = 0.0f64.min(tf);
            let cfg = PropagatorConfig { tol, ..Default::default() };
            let u = propagate_with(&params, &shape, ti, end, &cfg)?;
            let theta = mixing_angle(crate::pulses::rabi_at(&shape, end), t0_delta0)?;
            let ua = rotation(theta).dagger().compose(&u);
            (ua.u11, -ua.u12.conj(), true)
        }
        other => return Err(Error::InvalidArgument(format!("unsupported pump shape {other:?}"))),
    };
    let (b_minus, b_plus, robust) = match sequence {
        // creation along Omega: the transposed lifting acting on Phi-
        Sequence::StarkPump => {
            let rising = SU2Operator::new(a_minus, -a_plus.conj());
            let u = falling_from_rising(&rising);
            (u.u11, -u.u12.conj(), true)
        }
        // creation along Delta maps Phi+- onto the bare states
        Sequence::PumpStark => (a_minus, a_plus, false),
    };
    let p = b_plus.norm_sqr();
    Ok(HalfScrapResult {
        sequence,
        p_plus_final: p,
        relative_phase: wrap_angle(b_plus.arg() - b_minus.arg()),
        robust_phase: robust,
        numeric,
        b_minus,
        b_plus,
    })
}
