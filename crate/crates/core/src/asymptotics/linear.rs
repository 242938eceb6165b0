use super::{lifting_core, LiftingResult, Model};
use crate::error::{Error, Result};
use crate::propagator::{from_lz_frame, mixing_angle, rotation, SU2Operator};
use crate::specfun::{log_gamma, parabolic_cylinder_d};
use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_PI_4, LN_2, SQRT_2};

/// Asymptotic populations and phases after a linear rise with parameter
/// omega = T0*Delta0 / sqrt(2 T0*Omega0).
pub fn linear_lifting(omega: f64) -> Result<LiftingResult> {
    let c = lifting_core(omega, 1.0, 1.0)?;
    Ok(LiftingResult {
        p_minus: c.p_minus,
        p_plus: c.p_plus,
        chi_minus: c.chi_minus,
        chi_plus: c.chi_plus,
        common_phase: 0.0,
        model: Model::LinearExact,
        parameter: omega,
        warning: None,
    })
}

/// Exact half Landau-Zener evolution operator U_LZ(T, 0) in the
/// Landau-Zener basis, with T = sqrt(T0*Omega0/2) tau.
pub fn half_lz_exact(omega: f64, t_big: f64) -> Result<SU2Operator> {
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::InvalidArgument(format!("omega must be finite and >= 0, got {omega}")));
    }
    if !(t_big.is_finite() && t_big >= 0.0) {
        return Err(Error::InvalidArgument(format!("T must be finite and >= 0, got {t_big}")));
    }
    if omega == 0.0 {
        let ph = 0.5 * t_big * t_big;
        return Ok(SU2Operator::new(C::from_polar(1.0, ph), C::new(0.0, 0.0)));
    }
    let w2 = omega * omega;
    let nu = C::new(0.0, w2 / 2.0);
    let z1 = C::from_polar(SQRT_2 * t_big, -FRAC_PI_4);
    let d1 = parabolic_cylinder_d(nu, z1)?;
    let d2 = parabolic_cylinder_d(nu, -z1)?;
    let lg_1 = log_gamma(C::new(1.0, -w2 / 2.0))?;
    // 2^{i w^2 / 4}
    let two_pow = C::new(0.0, w2 / 4.0 * LN_2);
    let pre11 = (lg_1 - log_gamma(C::new(1.0, -w2 / 4.0))? + two_pow - LN_2).exp();
    let pre12 = (lg_1 - log_gamma(C::new(0.5, -w2 / 4.0))? + two_pow + C::new(0.0, FRAC_PI_4)).exp() / omega;
    Ok(SU2Operator::new(pre11 * (d1 + d2), pre12 * (d1 - d2)))
}

/// Adiabatic-frame image R(theta_T)^dagger S U_LZ S^dagger of the half
/// Landau-Zener operator, started at theta = 0 (requires omega > 0).
pub fn half_lz_adiabatic(omega: f64, t_big: f64) -> Result<SU2Operator> {
    if omega == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let u = from_lz_frame(&half_lz_exact(omega, t_big)?);
    let theta = mixing_angle(t_big, omega)?;
    Ok(rotation(theta).dagger().compose(&u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_identity() {
        for &w in &[0.0, 0.1, 0.35, 2.0] {
            let u = half_lz_exact(w, 0.0).unwrap();
            assert!(u.distance(&SU2Operator::identity()) < 1e-13, "omega {w}");
        }
    }

    #[test]
    fn exact_operator_is_unitary() {
        for &w in &[0.1, 0.35, 1.0, 2.0] {
            for &t in &[0.5, 3.0, 10.0] {
                assert!(half_lz_exact(w, t).unwrap().unitarity_defect() < 1e-10);
            }
        }
    }

    #[test]
    fn large_detuning_phases_limit() {
        // chi+ -> -pi/2 and chi- -> 0, both approached as 1/(12 omega^2)
        for &w in &[4.0, 6.0, 10.0] {
            let r = linear_lifting(w).unwrap();
            let gap = 1.0 / (12.0 * w * w);
            assert!((r.chi_plus + std::f64::consts::FRAC_PI_2 - gap).abs() < 0.05 * gap, "chi+ = {}", r.chi_plus);
            assert!((r.chi_minus - gap).abs() < 0.05 * gap, "chi- = {}", r.chi_minus);
            assert!(r.p_minus > 1.0 - 1e-3);
        }
        let r = linear_lifting(10.0).unwrap();
        assert!((r.chi_plus + std::f64::consts::FRAC_PI_2).abs() < 1e-3);
        assert!(r.chi_minus.abs() < 1e-3);
    }

    #[test]
    fn late_time_populations_match_lifting() {
        let w = 5.0 / 200f64.sqrt();
        let ua = half_lz_adiabatic(w, 10.0).unwrap();
        let r = linear_lifting(w).unwrap();
        assert!((ua.u11.norm_sqr() - r.p_minus).abs() < 1e-4);
    }
}
