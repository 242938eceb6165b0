use super::small::k_n;
use super::{lifting_core, LiftingResult, Model};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// 2 sqrt(D^2 + W0^2) must exceed this multiple of n.
pub const ADIABATICITY_FACTOR: f64 = 10.0;

/// omega_n = sqrt(2/pi) K_n T0*Delta0; for n = 1 this is exactly
/// T0*Delta0 / sqrt(2 T0*Omega0).
pub fn omega_n(n: u32, t0_delta0: f64, t0_omega0: f64) -> Result<f64> {
    if !(t0_delta0.is_finite() && t0_delta0 >= 0.0) {
        return Err(Error::InvalidArgument(format!("t0_delta0 must be finite and >= 0, got {t0_delta0}")));
    }
    if n == 1 {
        if !(t0_omega0.is_finite() && t0_omega0 > 0.0) {
            return Err(Error::InvalidArgument(format!("t0_omega0 must be positive, got {t0_omega0}")));
        }
        return Ok(t0_delta0 / (2.0 * t0_omega0).sqrt());
    }
    Ok((2.0 / PI).sqrt() * k_n(n, t0_omega0)? * t0_delta0)
}

/// Universal lifting for a power-law rise of order n.
pub fn universal_lifting(n: u32, t0_delta0: f64, t0_omega0: f64) -> Result<LiftingResult> {
    let r = universal_lifting_flagged(n, t0_delta0, t0_omega0)?;
    match r.warning {
        Some(w) => Err(Error::Adiabaticity(w)),
        None => Ok(r),
    }
}

/// As [`universal_lifting`], but an unmet adiabaticity condition only sets
/// the warning. Used where the formulas are knowingly pushed (pi-pulses).
pub fn universal_lifting_flagged(n: u32, t0_delta0: f64, t0_omega0: f64) -> Result<LiftingResult> {
    let w = omega_n(n, t0_delta0, t0_omega0)?;
    let nf = n as f64;
    let scale = 2.0 * t0_delta0.hypot(t0_omega0);
    let warning = (scale < ADIABATICITY_FACTOR * nf).then(|| {
        format!("2 sqrt(D^2 + W0^2) = {scale} is below {ADIABATICITY_FACTOR} n = {}", ADIABATICITY_FACTOR * nf)
    });
    let m = nf + 1.0;
    let ratio = (0.5 * PI * (2.0 * nf + 1.0) / m).sin() / (0.5 * PI * (nf + 2.0) / m).sin();
    let c = lifting_core(w, ratio, nf)?;
    Ok(LiftingResult {
        p_minus: c.p_minus,
        p_plus: c.p_plus,
        chi_minus: c.chi_minus,
        chi_plus: c.chi_plus,
        common_phase: 0.0,
        model: Model::UniversalN(n),
        parameter: w,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::super::linear_lifting;
    use super::*;

    #[test]
    fn n1_reduces_to_linear() {
        for &(d, w0) in &[(0.0, 100.0), (5.0, 100.0), (3.3, 47.0), (20.0, 10.0)] {
            let u = universal_lifting(1, d, w0).unwrap();
            let l = linear_lifting(d / (2.0 * w0).sqrt()).unwrap();
            assert_eq!(u.p_plus, l.p_plus);
            assert_eq!(u.p_minus, l.p_minus);
            assert!((u.chi_plus - l.chi_plus).abs() < 1e-12);
            assert!((u.chi_minus - l.chi_minus).abs() < 1e-12);
        }
    }

    #[test]
    fn general_omega_n_matches_k_form_at_n1() {
        let a = (2.0 / PI).sqrt() * k_n(1, 100.0).unwrap() * 5.0;
        assert!((a - omega_n(1, 5.0, 100.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_adiabatic() {
        assert!(matches!(universal_lifting(3, 1.0, 2.0), Err(Error::Adiabaticity(_))));
    }
}
