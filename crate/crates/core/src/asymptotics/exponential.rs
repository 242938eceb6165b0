use super::{LiftingResult, Model};
use crate::error::{Error, Result};
use crate::propagator::SU2Operator;
use crate::specfun::{im_log_gamma, kummer_m_with_derivative};
use num_complex::Complex64 as C;
use std::f64::consts::{LN_2, PI};

fn check_varpi(varpi: f64) -> Result<()> {
    if !(varpi.is_finite() && varpi >= 0.0) {
        return Err(Error::InvalidArgument(format!("varpi must be finite and >= 0, got {varpi}")));
    }
    Ok(())
}

fn check_s(name: &str, s: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!("{name} must be finite and > 0, got {s}")));
    }
    Ok(())
}

/// Common phase xi = arg Gamma(1/2 + i varpi/2) + varpi ln 2 - (varpi/2) ln s_i,
/// where s_i = 2 zeta(tau_i) is the area at the truncated initial time.
pub fn exponential_xi(varpi: f64, s_i: f64) -> Result<f64> {
    check_varpi(varpi)?;
    check_s("s_i", s_i)?;
    Ok(im_log_gamma(C::new(0.5, varpi / 2.0))? + varpi * LN_2 - 0.5 * varpi * s_i.ln())
}

/// Asymptotic lifting for exponential rising; `zeta` is the current
/// half-area and `s_i` the initial area used to truncate the start.
pub fn exponential_lifting(varpi: f64, zeta: f64, s_i: f64) -> Result<LiftingResult> {
    let xi = exponential_xi(varpi, s_i)?;
    if !(zeta.is_finite() && zeta >= 0.0) {
        return Err(Error::InvalidArgument(format!("zeta must be finite and >= 0, got {zeta}")));
    }
    let e = (-PI * varpi).exp();
    let p_plus = e / (1.0 + e);
    let p_minus = 1.0 / (1.0 + e);
    let warning = (zeta < 5.0 * varpi)
        .then(|| format!("half-area zeta = {zeta} is not large compared to varpi = {varpi}"));
    Ok(LiftingResult {
        p_minus,
        p_plus,
        chi_minus: 0.0,
        chi_plus: 0.0,
        common_phase: xi,
        model: Model::ExponentialExact,
        parameter: varpi,
        warning,
    })
}

/// Exact bare-state operator for exponential rising from area `s_i` to area
/// `s`, built from B-(s) = (s/s_i)^{i varpi/2} e^{-is/2} M(i varpi/2, i varpi, is)
/// and B+ = 2i dB-/ds + (varpi/s) B-.
pub fn exponential_exact(varpi: f64, s: f64, s_i: f64) -> Result<SU2Operator> {
    check_varpi(varpi)?;
    check_s("s", s)?;
    check_s("s_i", s_i)?;
    if varpi == 0.0 {
        // M(eps/2, eps, z) -> (1 + e^z)/2
        let bm = C::new((s / 2.0).cos(), 0.0);
        let bp = C::new(0.0, -(s / 2.0).sin());
        return Ok(SU2Operator::new(bm, -bp.conj()));
    }
    let a = C::new(0.0, varpi / 2.0);
    let b = C::new(0.0, varpi);
    let (m, dm) = kummer_m_with_derivative(a, b, C::new(0.0, s))?;
    let pre = C::from_polar(1.0, 0.5 * varpi * (s / s_i).ln() - s / 2.0);
    // the (varpi/s) B- terms cancel analytically in 2i dB-/ds + (varpi/s) B-
    let bm = pre * m;
    let bp = pre * (m - 2.0 * dm);
    Ok(SU2Operator::new(bm, -bp.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn populations_depend_only_on_varpi() {
        let r = exponential_lifting(0.4, 50.0, 1e-10).unwrap();
        assert!((r.p_plus - 0.221_553_346_549_894_7).abs() < 1e-15, "{}", r.p_plus);
        assert_eq!(r.p_plus, exponential_lifting(0.4, 500.0, 1e-10).unwrap().p_plus);
        assert!(r.warning.is_none());
        assert!(exponential_lifting(2.0, 1.0, 1e-10).unwrap().warning.is_some());
    }

    #[test]
    fn small_area_is_near_identity() {
        let u = exponential_exact(0.4, 2e-10, 1e-10).unwrap();
        // (s/s_i)^{i varpi/2} is the removable phase
        let ph = C::from_polar(1.0, 0.2 * 2f64.ln());
        assert!((u.u11 - ph).norm() < 1e-8);
        assert!(u.u12.norm() < 1e-8);
    }

    #[test]
    fn resonant_case_is_rabi() {
        let u = exponential_exact(0.0, 3.0, 1e-10).unwrap();
        assert!((u.u11.re - 1.5f64.cos()).abs() < 1e-15);
        assert!(u.unitarity_defect() < 1e-14);
    }
}
