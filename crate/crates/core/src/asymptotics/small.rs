use crate::error::{Error, Result};
use crate::pulses::{ExpSign, PulseKind};
use crate::quad::{integrate, QuadOptions};
use crate::specfun::{erf, erfc, ln_gamma_real};
use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// First-order small-detuning result. `k` multiplies T0*Delta0 in the
/// population; `l` is the in-quadrature coefficient where it exists.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SmallDetuningResult {
    pub k: f64,
    pub l: Option<f64>,
    pub t0_delta0: f64,
    /// P+ = (1 - T0*Delta0 k) / 2.
    pub p_plus: f64,
    pub warning: Option<String>,
}

impl SmallDetuningResult {
    /// A+- = e^{-+ i zeta} [1 + (T0*Delta0/2)(-+k + i l)] / sqrt(2); needs `l`.
    pub fn amplitudes(&self, zeta: f64) -> Option<(C, C)> {
        let l = self.l?;
        let h = 0.5 * self.t0_delta0;
        let am = C::from_polar(FRAC_1_SQRT_2, zeta) * C::new(1.0 + h * self.k, h * l);
        let ap = C::from_polar(FRAC_1_SQRT_2, -zeta) * C::new(1.0 - h * self.k, h * l);
        Some((am, ap))
    }
}

fn check_power(n: u32, t0_omega0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(t0_omega0.is_finite() && t0_omega0 > 0.0) {
        return Err(Error::InvalidArgument(format!("t0_omega0 must be positive, got {t0_omega0}")));
    }
    Ok(n as f64)
}

/// K_n = (T0*Omega0)^{-1/(n+1)} sqrt(pi) [2(n+1)]^{-n/(n+1)} Gamma((n+2)/(2n+2)) / Gamma((2n+1)/(2n+2)).
pub fn k_n(n: u32, t0_omega0: f64) -> Result<f64> {
    let nf = check_power(n, t0_omega0)?;
    let m = nf + 1.0;
    let lg = ln_gamma_real((nf + 2.0) / (2.0 * m)) - ln_gamma_real((2.0 * nf + 1.0) / (2.0 * m));
    Ok(t0_omega0.powf(-1.0 / m) * PI.sqrt() * (2.0 * m).powf(-nf / m) * lg.exp())
}

/// L_n = K_n sin((pi/2)(n+2)/(n+1)) / sin((pi/2)(2n+1)/(n+1)).
pub fn l_n(n: u32, t0_omega0: f64) -> Result<f64> {
    let nf = n as f64;
    let m = nf + 1.0;
    Ok(k_n(n, t0_omega0)? * (0.5 * PI * (nf + 2.0) / m).sin() / (0.5 * PI * (2.0 * nf + 1.0) / m).sin())
}

/// G(x) = int_{-inf}^0 sin[(sqrt(pi)/2) x (1 + erf tau)] dtau.
pub fn gaussian_g(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidArgument(format!("x must be finite and >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let c = 0.5 * PI.sqrt() * x;
    // below tau_cut the integrand is bounded by c erfc(|tau|) < 1e-16
    let mut cut = 1.0;
    while c * erfc(cut) > 1e-16 {
        cut += 0.25;
    }
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: 20_000 };
    // split where the phase advances by about one period
    let pieces = ((c / PI).ceil() as usize).clamp(1, 4096);
    let mut edges = vec![-cut];
    for k in 1..pieces {
        // tau where 1 + erf(tau) = 2k/pieces, found by bisection
        let target = 2.0 * k as f64 / pieces as f64 - 1.0;
        let (mut lo, mut hi) = (-cut, 0.0);
        if erf(lo) >= target {
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if erf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        edges.push(0.5 * (lo + hi));
    }
    edges.push(0.0);
    let mut total = 0.0;
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = integrate(|t: f64| (c * erfc(-t)).sin(), w[0], w[1], opts);
        if !r.converged {
            return Err(Error::IntegrationFailure { tau: w[0], reason: "G(x) quadrature did not converge".into() });
        }
        total += r.value;
    }
    Ok(total)
}

/// Small-detuning first-order transfer for power-law, exponential or
/// Gaussian rising (the Gaussian evaluated at the pulse peak).
pub fn small_detuning_transfer(kind: PulseKind, t0_delta0: f64, t0_omega0: f64) -> Result<SmallDetuningResult> {
    if !(t0_delta0.is_finite() && t0_delta0 >= 0.0) {
        return Err(Error::InvalidArgument(format!("t0_delta0 must be finite and >= 0, got {t0_delta0}")));
    }
    let (k, l) = match kind {
        PulseKind::PowerRise(n) => (k_n(n, t0_omega0)?, Some(l_n(n, t0_omega0)?)),
        PulseKind::Exponential(ExpSign::Rising) => (PI / 2.0, None),
        PulseKind::Gaussian => (gaussian_g(t0_omega0)?, None),
        other => {
            return Err(Error::InvalidArgument(format!("no small-detuning formula for {other:?}")));
        }
    };
    let corr = t0_delta0 * k;
    let warning = (corr.abs() > 0.5).then(|| format!("first-order correction {corr} exceeds 0.5"));
    Ok(SmallDetuningResult { k, l, t0_delta0, p_plus: 0.5 * (1.0 - corr), warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_closed_form() {
        let k = k_n(1, 100.0).unwrap();
        assert!((k - 0.5 * (PI / 100.0).sqrt()).abs() < 1e-15);
        assert!((k - 0.088_622_692_545_275_8).abs() < 1e-15);
    }

    #[test]
    fn l_over_k_ratio() {
        let r = l_n(2, 100.0).unwrap() / k_n(2, 100.0).unwrap();
        let expect = (0.5 * PI * 4.0 / 3.0).sin() / (0.5 * PI * 5.0 / 3.0).sin();
        assert!((r - expect).abs() < 1e-12);
        // Gamma form of L_2
        let lg = ln_gamma_real(1.0 / 6.0) - ln_gamma_real(2.0 / 6.0);
        let l_gamma = 100f64.powf(-1.0 / 3.0) * PI.sqrt() * 6f64.powf(-2.0 / 3.0) * lg.exp();
        assert!((l_n(2, 100.0).unwrap() - l_gamma).abs() < 1e-13);
    }

    #[test]
    fn g_reference_values() {
        // high-precision reference quadrature
        assert_eq!(gaussian_g(0.0).unwrap(), 0.0);
        assert!((gaussian_g(1.0).unwrap() - 0.473_213_444_280_768_7).abs() < 1e-9);
        assert!((gaussian_g(10.0).unwrap() - 0.584_807_726_172_727_7).abs() < 1e-9);
        assert!((gaussian_g(100.0).unwrap() - 0.361_103_691_996_042_6).abs() < 1e-9);
    }

    #[test]
    fn exponential_limit() {
        let r = small_detuning_transfer(PulseKind::Exponential(ExpSign::Rising), 0.1, 100.0).unwrap();
        assert!((r.p_plus - 0.5 * (1.0 - 0.05 * PI)).abs() < 1e-15);
        assert!(r.amplitudes(0.0).is_none());
    }

    #[test]
    fn amplitudes_match_population() {
        let r = small_detuning_transfer(PulseKind::PowerRise(2), 0.2, 100.0).unwrap();
        let (_, ap) = r.amplitudes(0.3).unwrap();
        // |A+|^2 = P+ up to the second-order term
        assert!((ap.norm_sqr() - r.p_plus).abs() < 0.1 * 0.04);
    }
}
