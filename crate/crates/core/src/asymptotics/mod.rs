//! Closed-form and asymptotic descriptions of the lifting of quasi-degeneracy:
//! exact linear and exponential rising, large- and small-detuning
//! perturbation theory, and the universal `omega_n` approximation.

mod exponential;
mod large;
mod linear;
mod small;
mod universal;

pub use exponential::{exponential_exact, exponential_lifting, exponential_xi};
pub use large::{b_n_const, large_detuning_transfer, PerturbationTerms, LARGE_DETUNING_ALPHA_MIN};
pub use linear::{half_lz_adiabatic, half_lz_exact, linear_lifting};
pub use small::{gaussian_g, k_n, l_n, small_detuning_transfer, SmallDetuningResult};
pub use universal::{omega_n, universal_lifting, universal_lifting_flagged, ADIABATICITY_FACTOR};

use crate::error::{Error, Result};
use crate::specfun::im_log_gamma;
use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Which analytic description produced a [`LiftingResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    LinearExact,
    ExponentialExact,
    UniversalN(u32),
    LargeDetuning(u32),
    SmallDetuning,
}

/// Asymptotic adiabatic populations and phase shifts after the lifting.
///
/// The amplitudes follow from [`LiftingResult::amplitudes`]; the "dynamical"
/// argument is eta_d for power-law rising and the half-area zeta for
/// exponential rising.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingResult {
    pub p_minus: f64,
    pub p_plus: f64,
    pub chi_minus: f64,
    pub chi_plus: f64,
    /// xi for exponential rising, 0 otherwise.
    pub common_phase: f64,
    pub model: Model,
    /// The scaling parameter the populations depend on (omega, omega_n or varpi).
    pub parameter: f64,
    /// Soft validity warning; the numbers are still returned.
    pub warning: Option<String>,
}

impl LiftingResult {
    /// (A-, A+) = (sqrt(p-) e^{i(xi + chi- + phase)}, sqrt(p+) e^{i(xi - chi+ - phase)}).
    pub fn amplitudes(&self, phase: f64) -> (C, C) {
        let am = C::from_polar(self.p_minus.sqrt(), self.common_phase + self.chi_minus + phase);
        let ap = C::from_polar(self.p_plus.sqrt(), self.common_phase - self.chi_plus - phase);
        (am, ap)
    }
}

/// Shared phase algebra of the linear solution, evaluated at an effective
/// parameter `w`. `chi_minus_factor` scales chi_0 inside chi_-, `arg_factor`
/// scales the arg term inside chi_+ (both 1 for the exact linear case).
struct Core {
    p_minus: f64,
    p_plus: f64,
    chi_minus: f64,
    chi_plus: f64,
}

fn lifting_core(w: f64, chi_minus_factor: f64, arg_factor: f64) -> Result<Core> {
    if !(w.is_finite() && w >= 0.0) {
        return Err(Error::InvalidArgument(format!("lifting parameter must be finite and >= 0, got {w}")));
    }
    let q = w * w / 4.0;
    let lg_half = im_log_gamma(C::new(0.5, -q))?;
    let phi = im_log_gamma(C::new(1.0, -q))? - lg_half + PI / 4.0;
    let e = (-PI * w * w / 2.0).exp();
    let a = FRAC_1_SQRT_2 * (1.0 + e).sqrt();
    let b = FRAC_1_SQRT_2 * (1.0 - e).sqrt();
    // sqrt(1 - e^{-pi w^2}) = 2ab without cancellation for small w
    let amp = 2.0 * a * b;
    let (cphi, sphi) = (phi.cos(), phi.sin());
    let p_plus = 0.5 * (1.0 - amp * cphi);
    let p_minus = 1.0 - p_plus;
    let chi0 = if q == 0.0 { 0.0 } else { lg_half - q * (1.0 - q.ln()) };
    // a - b e^{i phi} keeps a positive real part (a > b), so atan2 stays continuous
    let arg_minus = (b * sphi).atan2(a + b * cphi);
    let arg_plus = (-b * sphi).atan2(a - b * cphi);
    Ok(Core {
        p_minus,
        p_plus,
        chi_minus: chi_minus_factor * chi0 + arg_minus,
        chi_plus: chi0 + arg_factor * arg_plus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_at_zero_is_even_split() {
        let c = lifting_core(0.0, 1.0, 1.0).unwrap();
        assert_eq!(c.p_plus, 0.5);
        assert_eq!(c.chi_minus, 0.0);
        assert_eq!(c.chi_plus, 0.0);
    }

    #[test]
    fn amplitudes_carry_populations() {
        let r = linear_lifting(0.7).unwrap();
        let (am, ap) = r.amplitudes(1.3);
        assert!((am.norm_sqr() + ap.norm_sqr() - 1.0).abs() < 1e-14);
        assert!((ap.arg() - crate::specfun::wrap_angle(-r.chi_plus - 1.3)).abs() < 1e-12);
    }
}
