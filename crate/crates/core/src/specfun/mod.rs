//! Special functions for the exact solutions: complex log-Gamma, the error
//! function, parabolic cylinder functions and the Kummer function.

mod continuation;
pub(crate) mod dd;
mod gamma;
mod kummer;
mod pcf;

pub use gamma::{arg_gamma, gamma, log_gamma, recip_gamma, wrap_angle};
pub(crate) use gamma::{im_log_gamma, ln_gamma_real};
pub use kummer::{
    kummer_m, kummer_m_with_derivative, KUMMER_ASYMPTOTIC_MIN_RADIUS, KUMMER_SERIES_MAX_RADIUS,
};
pub use pcf::{
    parabolic_cylinder_d, parabolic_cylinder_d_with_derivative, PCF_ASYMPTOTIC_MIN_RADIUS,
    PCF_SERIES_MAX_RADIUS,
};

/// Complex intermediate values throughout the crate.
pub type ComplexValue = num_complex::Complex64;

/// Real error function (backed by `libm`).
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[doc(hidden)]
pub mod internals {
    //! Method-level entry points, exposed for crossover sweeps in tests.
    use super::*;
    use crate::error::Result;

    /// Asymptotic-series value of D_nu(z) and its estimated relative error.
    pub fn pcf_asymptotic(nu: ComplexValue, z: ComplexValue) -> Result<(ComplexValue, f64)> {
        let e = pcf::asymptotic(nu, z)?;
        Ok((e.value, e.rel_err))
    }

    pub fn pcf_series(nu: ComplexValue, z: ComplexValue) -> Result<(ComplexValue, f64)> {
        let e = pcf::maclaurin_pub(nu, z)?;
        Ok((e.value, e.rel_err))
    }

    pub fn kummer_series(a: ComplexValue, b: ComplexValue, z: ComplexValue) -> Result<(ComplexValue, f64)> {
        kummer::maclaurin_pub(a, b, z)
    }

    pub fn kummer_asymptotic(a: ComplexValue, b: ComplexValue, z: ComplexValue) -> Result<(ComplexValue, f64)> {
        kummer::asymptotic_pub(a, b, z)
    }
}
