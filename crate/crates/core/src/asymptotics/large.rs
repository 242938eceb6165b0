use crate::error::{Error, Result};
use crate::specfun::ln_gamma_real;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Smallest alpha_n accepted by [`large_detuning_transfer`].
pub const LARGE_DETUNING_ALPHA_MIN: f64 = 1.0;

/// First-order large-detuning amplitude J_n = S_n + I_n, where S_n comes
/// from the discontinuous n-th derivative at the start and I_n is the
/// exponentially small pole contribution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PerturbationTerms {
    pub n: u32,
    pub j_n: C,
    pub s_n: C,
    /// Pole contribution with the pi/3 prefactor of first-order theory.
    pub i_n: C,
    /// Pole contribution with prefactor 1 (matches the exact n = 1 result).
    pub i_n_corrected: C,
    pub alpha_n: f64,
    pub b_n_const: f64,
}

impl PerturbationTerms {
    /// P+ = |J_n|^2.
    pub fn p_plus(&self) -> f64 {
        self.j_n.norm_sqr()
    }

    pub fn j_n_corrected(&self) -> C {
        self.s_n + self.i_n_corrected
    }

    pub fn p_plus_corrected(&self) -> f64 {
        self.j_n_corrected().norm_sqr()
    }
}

/// b_n = int_0^1 sqrt(1 - x^{2n}) dx.
pub fn b_n_const(n: u32) -> f64 {
    let nf = n as f64;
    PI.sqrt() / (4.0 * nf)
        * (ln_gamma_real(1.0 / (2.0 * nf)) - ln_gamma_real((3.0 * nf + 1.0) / (2.0 * nf))).exp()
}

fn pole_sum(n: u32, alpha: f64, b: f64) -> C {
    let nf = n as f64;
    let f = |k: u32| {
        let ang = PI / nf * (k as f64 + 0.5);
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * (-alpha * b * ang.sin()).exp() * C::from_polar(1.0, alpha * b * ang.cos())
    };
    if n.is_multiple_of(2) {
        (0..n / 2).map(f).sum()
    } else {
        let sign = if ((n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        let lead = C::new(0.5 * sign * (-alpha * b).exp(), 0.0);
        lead + (0..(n - 1) / 2).map(f).sum::<C>()
    }
}

pub fn large_detuning_transfer(n: u32, alpha_n: f64) -> Result<PerturbationTerms> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !alpha_n.is_finite() {
        return Err(Error::NonFinite("alpha_n"));
    }
    if alpha_n < LARGE_DETUNING_ALPHA_MIN {
        return Err(Error::Validity(format!(
            "large-detuning theory needs alpha_n >= {LARGE_DETUNING_ALPHA_MIN}, got {alpha_n}"
        )));
    }
    let nf = n as f64;
    let fact = (ln_gamma_real(nf + 1.0)).exp();
    // (i/alpha)^n n! / 2
    let s_n = C::from_polar(0.5 * fact * alpha_n.powf(-nf), nf * PI / 2.0);
    let b = b_n_const(n);
    let sum = pole_sum(n, alpha_n, b);
    let i_n = sum * (PI / 3.0);
    Ok(PerturbationTerms { n, j_n: s_n + i_n, s_n, i_n, i_n_corrected: sum, alpha_n, b_n_const: b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b1_is_quarter_pi() {
        assert!((b_n_const(1) - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn b_n_matches_quadrature() {
        for n in 1..6 {
            let q = crate::quad::integrate(
                |x: f64| (1.0 - x.powi(2 * n as i32)).sqrt(),
                0.0,
                1.0,
                Default::default(),
            );
            assert!((q.value - b_n_const(n)).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn s_term_scaling() {
        let t = large_detuning_transfer(1, 20.0).unwrap();
        assert!((t.s_n.norm_sqr() - 1.0 / 1600.0).abs() < 1e-18);
        assert!((t.s_n - C::new(0.0, 0.025)).norm() < 1e-17);
        assert_eq!(t.j_n, t.s_n + t.i_n);
        assert!(large_detuning_transfer(2, 0.5).is_err());
    }

    #[test]
    fn odd_n_pole_structure() {
        // n = 1 has only the real half-residue
        let t = large_detuning_transfer(1, 2.0).unwrap();
        let expect = 0.5 * (-2.0 * PI / 4.0).exp();
        assert!((t.i_n_corrected - C::new(expect, 0.0)).norm() < 1e-15);
    }
}
