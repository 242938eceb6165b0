//! Closed-form and asymptotic results checked against direct propagation.

use lifting::asymptotics::{
    exponential_lifting, large_detuning_transfer, linear_lifting, small_detuning_transfer, universal_lifting,
};
use lifting::lineshape::{eigenenergy_surface, rosen_zener, trig_lineshape};
use lifting::propagator::{mixing_angle, propagate, state_to_adiabatic, StateVector};
use lifting::pulses::{rabi_at, PulseKind, PulseShape, SystemParams};
use std::f64::consts::PI;

const TOL: f64 = 1e-12;

fn bare_final(p: &SystemParams, s: &PulseShape) -> StateVector {
    let (a, b) = s.support();
    propagate(p, s, a, b, TOL).unwrap().apply(&StateVector::ground())
}

fn adiabatic_final(p: &SystemParams, s: &PulseShape) -> StateVector {
    let end = s.support().1;
    state_to_adiabatic(&bare_final(p, s), mixing_angle(rabi_at(s, end), p.t0_delta0).unwrap())
}

#[test]
fn linear_lifting_matches_propagation() {
    let w0 = 200.0;
    for &d in &[2.0, 5.0, 10.0] {
        let p = SystemParams::new(w0, d, 1).unwrap();
        let s = PulseShape::power_rise(1, w0, 1.0).unwrap();
        let num = adiabatic_final(&p, &s).b_plus.norm_sqr();
        let th = linear_lifting(p.omega()).unwrap().p_plus;
        assert!((num - th).abs() < 1e-4, "D {d}: {num} vs {th}");
    }
}

#[test]
fn rosen_zener_matches_propagation() {
    let w0 = 1.0;
    for &d in &[0.0, 0.5, 1.0, 2.0] {
        let p = SystemParams::new(w0, d, 1).unwrap();
        let s = PulseShape::sech(w0, 25.0).unwrap();
        let b = bare_final(&p, &s);
        let rz = rosen_zener(w0, d);
        assert!((b.b_plus.norm_sqr() - rz.p_transfer).abs() < 1e-9, "D {d}");
        // B- is known only up to the common tail phase
        assert!((b.b_minus.norm() - rz.b_minus.norm()).abs() < 1e-9, "D {d}");
    }
}

#[test]
fn trig_lineshape_n1_matches_propagation() {
    for &(w0, d) in &[(50.0, 10.0), (20.0, 5.0)] {
        let p = SystemParams::new(w0, d, 1).unwrap();
        let s = PulseShape::trig(1, w0).unwrap();
        let b = bare_final(&p, &s);
        let t = trig_lineshape(1, w0, d).unwrap();
        assert!(t.b_minus_phase_exact);
        assert!((b.b_plus.norm_sqr() - t.p_transfer).abs() < 5e-3, "W0 {w0} D {d}");
        assert!((b.b_minus - t.b_minus).norm() < 1e-2 && (b.b_plus - t.b_plus).norm() < 1e-2, "W0 {w0} D {d}");
    }
}

#[test]
fn small_detuning_slope_matches_propagation() {
    let w0 = 100.0;
    for &(n, d) in &[(1, 0.02), (2, 0.02), (2, 0.05), (3, 0.05)] {
        let p = SystemParams::new(w0, d, n).unwrap();
        let s = PulseShape::power_rise(n, w0, 1.0).unwrap();
        let num = adiabatic_final(&p, &s).b_plus.norm_sqr();
        let r = small_detuning_transfer(PulseKind::PowerRise(n), d, w0).unwrap();
        // first order in D: the neglected term is O(D^2)
        assert!((num - r.p_plus).abs() < 1e-5, "n {n} D {d}: {num} vs {}", r.p_plus);
    }
    let r = small_detuning_transfer(PulseKind::PowerRise(2), 0.0, w0).unwrap();
    assert_eq!(r.p_plus, 0.5);
}

#[test]
fn exponential_lifting_matches_propagation() {
    let (w0, end) = (1.0, 3.0);
    for &d in &[0.5, 1.0] {
        let s = PulseShape::exponential_rise(w0, end, 1e-8).unwrap();
        let p = SystemParams::new(w0, d, 1).unwrap();
        let num = adiabatic_final(&p, &s).b_plus.norm_sqr();
        let s_i = w0 * s.tau_start.exp();
        let zeta = 0.5 * w0 * end.exp();
        let th = exponential_lifting(d, zeta, s_i).unwrap().p_plus;
        assert!((num - th).abs() < 1e-3, "D {d}: {num} vs {th}");
    }
}

#[test]
fn large_detuning_n1_approaches_linear() {
    // alpha_1 = 2 omega^2; corrections fall off faster than 1/omega^2
    for &w in &[3.0f64, 4.0, 6.0] {
        let exact = linear_lifting(w).unwrap().p_plus;
        let pt = large_detuning_transfer(1, 2.0 * w * w).unwrap().p_plus_corrected();
        assert!((pt - exact).abs() < 0.2 / (w * w) * exact, "omega {w}: {pt} vs {exact}");
    }
}

#[test]
fn universal_populations_sum_to_one() {
    for n in 1..=4 {
        for k in 0..=20 {
            let r = universal_lifting(n, k as f64, 100.0).unwrap();
            assert!((r.p_minus + r.p_plus - 1.0).abs() < 1e-14);
            let (am, ap) = r.amplitudes(0.4);
            assert!((am.norm_sqr() + ap.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn eigenenergies_split_symmetrically() {
    let (lm, lp) = eigenenergy_surface(3.0, 4.0);
    assert_eq!((lm, lp), (-2.5, 2.5));
    assert_eq!(eigenenergy_surface(0.0, 0.0), (0.0, 0.0));
    let (_, l) = eigenenergy_surface(PI, 0.0);
    assert!((l - PI / 2.0).abs() < 1e-15);
}
