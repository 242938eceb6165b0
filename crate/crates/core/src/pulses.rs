//! Coupling envelopes T0*Omega(tau) in scaled time tau = t/T0, and the
//! constant-detuning system parameters.

use crate::error::{Error, Result};
use crate::specfun::{erf, erfc};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpSign {
    Rising,
    Falling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseKind {
    /// Omega0 (tau - tau_start)^n on the support.
    PowerRise(u32),
    /// Omega0 (tau_end - tau)^n on the support.
    PowerFall(u32),
    /// Omega0 e^{+tau} or Omega0 e^{-tau}.
    Exponential(ExpSign),
    /// Omega0 e^{-tau^2}.
    Gaussian,
    /// Omega0 sech(tau).
    Sech,
    /// Omega0 sin^n(tau - tau_start) on [tau_start, tau_start + pi].
    TrigPower(u32),
    /// Trapezoid: unit-length linear ramps of slope Omega0 around a plateau.
    LinearTruncated,
}

impl PulseKind {
    pub fn is_truncated(self) -> bool {
        matches!(
            self,
            PulseKind::PowerRise(_) | PulseKind::PowerFall(_) | PulseKind::TrigPower(_) | PulseKind::LinearTruncated
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseShape {
    pub kind: PulseKind,
    /// Dimensionless peak value or slope coefficient T0*Omega0.
    pub omega0: f64,
    pub tau_start: f64,
    pub tau_end: f64,
}

/// Envelope level standing in for "switched off" on smooth tails.
pub const DEFAULT_CUTOFF_LEVEL: f64 = 1e-8;

impl PulseShape {
    pub fn new(kind: PulseKind, omega0: f64, tau_start: f64, tau_end: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("omega0 must be finite and non-negative, got {omega0}")));
        }
        if tau_start.is_nan() || tau_end.is_nan() || tau_start > tau_end {
            return Err(Error::InvalidArgument(format!("invalid support [{tau_start}, {tau_end}]")));
        }
        match kind {
            PulseKind::PowerRise(0) | PulseKind::PowerFall(0) | PulseKind::TrigPower(0) => {
                return Err(Error::InvalidArgument("power n must be at least 1".into()))
            }
            PulseKind::PowerRise(_) | PulseKind::PowerFall(_) | PulseKind::LinearTruncated
                if !(tau_start.is_finite() && tau_end.is_finite()) =>
            {
                return Err(Error::InvalidArgument("truncated pulses need a finite support".into()))
            }
            PulseKind::TrigPower(_) if !tau_start.is_finite() => {
                return Err(Error::InvalidArgument("trig pulses need a finite start".into()))
            }
            PulseKind::LinearTruncated if tau_end - tau_start < 2.0 => {
                return Err(Error::InvalidArgument("trapezoid needs a support of length >= 2".into()))
            }
            _ => {}
        }
        let tau_end = match kind {
            PulseKind::TrigPower(_) => tau_start + PI,
            _ => tau_end,
        };
        Ok(PulseShape { kind, omega0, tau_start, tau_end })
    }

    pub fn power_rise(n: u32, omega0: f64, tau_end: f64) -> Result<Self> {
        Self::new(PulseKind::PowerRise(n), omega0, 0.0, tau_end)
    }

    pub fn trig(n: u32, omega0: f64) -> Result<Self> {
        Self::new(PulseKind::TrigPower(n), omega0, 0.0, PI)
    }

    pub fn sech(omega0: f64, half_width: f64) -> Result<Self> {
        Self::new(PulseKind::Sech, omega0, -half_width, half_width)
    }

    /// Exponential rise from the cutoff where T0*Omega drops below `level`
    /// up to `tau_end`.
    pub fn exponential_rise(omega0: f64, tau_end: f64, level: f64) -> Result<Self> {
        let start = (level / omega0).ln().min(tau_end);
        Self::new(PulseKind::Exponential(ExpSign::Rising), omega0, start, tau_end)
    }

    pub fn gaussian(omega0: f64, level: f64) -> Result<Self> {
        let cut = (omega0 / level).ln().max(0.0).sqrt();
        Self::new(PulseKind::Gaussian, omega0, -cut, cut)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.tau_start, self.tau_end)
    }

    fn inside(&self, tau: f64) -> bool {
        tau >= self.tau_start && tau <= self.tau_end
    }

    /// Points where the envelope or one of its derivatives jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            PulseKind::LinearTruncated => {
                vec![self.tau_start, self.tau_start + 1.0, self.tau_end - 1.0, self.tau_end]
            }
            k if k.is_truncated() => vec![self.tau_start, self.tau_end],
            _ => vec![],
        }
    }

    /// Same shape with a different amplitude.
    pub fn with_omega0(&self, omega0: f64) -> Self {
        PulseShape { omega0, ..*self }
    }
}

/// Fourier coefficients c_j (j = -n..=n, stored at j + n) of sin^n x.
fn sin_power_fourier(n: u32) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    let half_i = Complex64::new(0.0, -0.5); // 1/(2i)
    for _ in 0..n {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 2];
        for (j, cj) in c.iter().enumerate() {
            next[j + 2] += cj * half_i;
            next[j] -= cj * half_i;
        }
        c = next;
    }
    c
}

fn falling_factorial(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// T0*Omega(tau). Zero outside the support for truncated kinds.
pub fn rabi_at(shape: &PulseShape, tau: f64) -> f64 {
    let w0 = shape.omega0;
    match shape.kind {
        PulseKind::PowerRise(n) => {
            if shape.inside(tau) {
                w0 * (tau - shape.tau_start).powi(n as i32)
            } else {
                0.0
            }
        }
        PulseKind::PowerFall(n) => {
            if shape.inside(tau) {
                w0 * (shape.tau_end - tau).powi(n as i32)
            } else {
                0.0
            }
        }
        PulseKind::Exponential(ExpSign::Rising) => w0 * tau.exp(),
        PulseKind::Exponential(ExpSign::Falling) => w0 * (-tau).exp(),
        PulseKind::Gaussian => w0 * (-tau * tau).exp(),
        PulseKind::Sech => w0 / tau.cosh(),
        PulseKind::TrigPower(n) => {
            if shape.inside(tau) {
                w0 * (tau - shape.tau_start).sin().max(0.0).powi(n as i32)
            } else {
                0.0
            }
        }
        PulseKind::LinearTruncated => {
            if !shape.inside(tau) {
                0.0
            } else {
                w0 * (tau - shape.tau_start).min(shape.tau_end - tau).min(1.0)
            }
        }
    }
}

/// Exact derivative of the envelope of the given order (>= 1). At truncation
/// points the one-sided limit from the support interior is returned.
pub fn rabi_derivative(shape: &PulseShape, tau: f64, order: u32) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
    }
    let w0 = shape.omega0;
    let check_power = |n: u32| {
        if order > n + 2 {
            Err(Error::InvalidArgument(format!("derivative order {order} exceeds n + 2 = {}", n + 2)))
        } else {
            Ok(())
        }
    };
    Ok(match shape.kind {
        PulseKind::PowerRise(n) => {
            check_power(n)?;
            if !shape.inside(tau) || order > n {
                0.0
            } else {
                w0 * falling_factorial(n, order) * (tau - shape.tau_start).powi((n - order) as i32)
            }
        }
        PulseKind::PowerFall(n) => {
            check_power(n)?;
            if !shape.inside(tau) || order > n {
                0.0
            } else {
                let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * w0 * falling_factorial(n, order) * (shape.tau_end - tau).powi((n - order) as i32)
            }
        }
        PulseKind::Exponential(ExpSign::Rising) => w0 * tau.exp(),
        PulseKind::Exponential(ExpSign::Falling) => {
            let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * w0 * (-tau).exp()
        }
        PulseKind::Gaussian => {
            // d^k e^{-x^2} = (-1)^k H_k(x) e^{-x^2}
            let (mut hm, mut h) = (1.0, 2.0 * tau);
            for k in 1..order {
                let next = 2.0 * tau * h - 2.0 * k as f64 * hm;
                hm = h;
                h = next;
            }
            let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * w0 * h * (-tau * tau).exp()
        }
        PulseKind::Sech => {
            // d^k sech = sech * P_k(tanh), P_{k+1} = -t P_k + (1 - t^2) P_k'
            let mut p = vec![1.0];
            for _ in 0..order {
                let mut next = vec![0.0; p.len() + 1];
                for (j, &c) in p.iter().enumerate() {
                    next[j + 1] -= c;
                    if j > 0 {
                        next[j - 1] += c * j as f64;
                        next[j + 1] -= c * j as f64;
                    }
                }
                p = next;
            }
            let t = tau.tanh();
            let val = p.iter().rev().fold(0.0, |acc, &c| acc * t + c);
            w0 * val / tau.cosh()
        }
        PulseKind::TrigPower(n) => {
            if !shape.inside(tau) {
                0.0
            } else {
                let x = tau - shape.tau_start;
                let c = sin_power_fourier(n);
                let mut acc = Complex64::new(0.0, 0.0);
                for (idx, cj) in c.iter().enumerate() {
                    let j = idx as f64 - n as f64;
                    if j == 0.0 {
                        continue;
                    }
                    acc += cj * Complex64::new(0.0, j).powu(order) * Complex64::new(0.0, j * x).exp();
                }
                w0 * acc.re
            }
        }
        PulseKind::LinearTruncated => {
            check_power(1)?;
            if !shape.inside(tau) || order > 1 {
                0.0
            } else if tau < shape.tau_start + 1.0 {
                w0
            } else if tau >= shape.tau_end - 1.0 {
                -w0
            } else {
                0.0
            }
        }
    })
}

fn gd(x: f64) -> f64 {
    // Gudermannian: integral of sech from 0
    2.0 * (x / 2.0).tanh().atan()
}

/// T0 * integral of Omega over [tau_a, tau_b] (bounds may be infinite for
/// smooth kinds).
pub fn pulse_area(shape: &PulseShape, tau_a: f64, tau_b: f64) -> Result<f64> {
    if tau_a.is_nan() || tau_b.is_nan() || tau_a > tau_b {
        return Err(Error::InvalidArgument(format!("invalid interval [{tau_a}, {tau_b}]")));
    }
    let w0 = shape.omega0;
    let clip = |a: f64, b: f64| (a.max(shape.tau_start), b.min(shape.tau_end));
    Ok(match shape.kind {
        PulseKind::PowerRise(n) | PulseKind::PowerFall(n) => {
            let (a, b) = clip(tau_a, tau_b);
            if a >= b {
                return Ok(0.0);
            }
            let np1 = (n + 1) as f64;
            let (xa, xb) = match shape.kind {
                PulseKind::PowerRise(_) => (a - shape.tau_start, b - shape.tau_start),
                _ => (shape.tau_end - b, shape.tau_end - a),
            };
            w0 * (xb.powi(n as i32 + 1) - xa.powi(n as i32 + 1)) / np1
        }
        PulseKind::Exponential(ExpSign::Rising) => w0 * (tau_b.exp() - tau_a.exp()),
        PulseKind::Exponential(ExpSign::Falling) => w0 * ((-tau_a).exp() - (-tau_b).exp()),
        PulseKind::Gaussian => {
            let k = w0 * PI.sqrt() / 2.0;
            if tau_a >= 0.0 {
                k * (erfc(tau_a) - erfc(tau_b))
            } else if tau_b <= 0.0 {
                k * (erfc(-tau_b) - erfc(-tau_a))
            } else {
                k * (erf(tau_b) - erf(tau_a))
            }
        }
        PulseKind::Sech => {
            let g = |x: f64| if x.is_infinite() { x.signum() * FRAC_PI_2 } else { gd(x) };
            w0 * (g(tau_b) - g(tau_a))
        }
        PulseKind::TrigPower(n) => {
            let (a, b) = clip(tau_a, tau_b);
            if a >= b {
                return Ok(0.0);
            }
            let (xa, xb) = (a - shape.tau_start, b - shape.tau_start);
            let c = sin_power_fourier(n);
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, cj) in c.iter().enumerate() {
                let j = idx as f64 - n as f64;
                if j == 0.0 {
                    acc += cj * (xb - xa);
                } else {
                    let ij = Complex64::new(0.0, j);
                    acc += cj * ((ij * xb).exp() - (ij * xa).exp()) / ij;
                }
            }
            w0 * acc.re
        }
        PulseKind::LinearTruncated => {
            let (a, b) = clip(tau_a, tau_b);
            if a >= b {
                return Ok(0.0);
            }
            // antiderivative of min(x, L - x, 1) with x = tau - start
            let len = shape.tau_end - shape.tau_start;
            let prim = |x: f64| {
                if x <= 1.0 {
                    0.5 * x * x
                } else if x <= len - 1.0 {
                    0.5 + (x - 1.0)
                } else {
                    let y = len - x;
                    len - 1.0 - 0.5 * y * y
                }
            };
            w0 * (prim(b - shape.tau_start) - prim(a - shape.tau_start))
        }
    })
}

/// One scenario: coupling scale, detuning and power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub t0_omega0: f64,
    pub t0_delta0: f64,
    pub n: u32,
}

impl SystemParams {
    pub fn new(t0_omega0: f64, t0_delta0: f64, n: u32) -> Result<Self> {
        if !(t0_omega0.is_finite() && t0_omega0 > 0.0) {
            return Err(Error::InvalidArgument(format!("t0_omega0 must be positive, got {t0_omega0}")));
        }
        if !(t0_delta0.is_finite() && t0_delta0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("t0_delta0 must be non-negative, got {t0_delta0}")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        Ok(SystemParams { t0_omega0, t0_delta0, n })
    }

    /// Landau-Zener parameter T0*Delta0 / sqrt(2 T0*Omega0).
    pub fn omega(&self) -> f64 {
        self.t0_delta0 / (2.0 * self.t0_omega0).sqrt()
    }

    /// Dimensionless detuning of the exponential model.
    pub fn varpi(&self) -> f64 {
        self.t0_delta0
    }

    /// Large-detuning parameter T0*Delta0 (Delta0/Omega0)^{1/n}.
    pub fn alpha_n(&self) -> f64 {
        self.t0_delta0 * (self.t0_delta0 / self.t0_omega0).powf(1.0 / self.n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_power_fourier_reconstructs() {
        for n in 1..6 {
            let c = sin_power_fourier(n);
            for &x in &[0.3, 1.2, 2.9] {
                let v: Complex64 = c
                    .iter()
                    .enumerate()
                    .map(|(i, cj)| cj * Complex64::new(0.0, (i as f64 - n as f64) * x).exp())
                    .sum();
                assert!((v.re - f64::sin(x).powi(n as i32)).abs() < 1e-14);
                assert!(v.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(PulseShape::new(PulseKind::PowerRise(0), 1.0, 0.0, 1.0).is_err());
        assert!(PulseShape::new(PulseKind::PowerRise(1), -1.0, 0.0, 1.0).is_err());
        assert!(PulseShape::new(PulseKind::PowerRise(1), 1.0, 2.0, 1.0).is_err());
        assert!(PulseShape::new(PulseKind::LinearTruncated, 1.0, 0.0, 1.0).is_err());
        assert!(SystemParams::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn gudermannian_limits() {
        assert!((gd(40.0) - FRAC_PI_2).abs() < 1e-15);
        assert!((gd(1.0) - (2.0 * 1f64.exp().atan() - FRAC_PI_2)).abs() < 1e-15);
    }
}
