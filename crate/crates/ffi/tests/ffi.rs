use lifting_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> Option<String> {
    let p = lifting_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn scenario_lifecycle_and_unitarity() {
    // SAFETY: pointers passed below are live locals, handles from the library, or NULL
    unsafe {
        let mut h = ptr::null_mut();
        let s = lifting_scenario_new(LiftingPulseKind::PowerRise, 1, 100.0, 5.0, 0.0, 1.0, &mut h);
        assert_eq!(s, LiftingStatus::Ok);
        assert!(!h.is_null());
        let mut u = LiftingOperator::default();
        assert_eq!(lifting_propagate(h, 0.0, 1.0, 0.0, &mut u), LiftingStatus::Ok);
        let norm = u.u11.re.powi(2) + u.u11.im.powi(2) + u.u12.re.powi(2) + u.u12.im.powi(2);
        assert!((norm - 1.0).abs() < 1e-9);
        assert!(last_error().is_none());

        // the oracle agrees with the exact linear lifting
        let mut a = LiftingAmplitudes::default();
        assert_eq!(lifting_adiabatic_amplitudes(h, 1.0, 0.0, &mut a), LiftingStatus::Ok);
        let mut l = LiftingLifting::default();
        assert_eq!(lifting_linear(5.0 / 200f64.sqrt(), &mut l), LiftingStatus::Ok);
        let p_plus = a.plus.re.powi(2) + a.plus.im.powi(2);
        assert!((p_plus - l.p_plus).abs() < 1e-4, "{p_plus} vs {}", l.p_plus);
        lifting_scenario_free(h);
        lifting_scenario_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    // SAFETY: pointers passed below are live locals, handles from the library, or NULL
    unsafe {
        let mut h = ptr::null_mut();
        let s = lifting_scenario_new(LiftingPulseKind::Sech, 1, -1.0, 0.0, -5.0, 5.0, &mut h);
        assert_eq!(s, LiftingStatus::InvalidArgument);
        assert!(h.is_null());
        assert!(last_error().unwrap().contains("omega0"));

        let mut u = LiftingOperator::default();
        assert_eq!(lifting_propagate(ptr::null(), 0.0, 1.0, 0.0, &mut u), LiftingStatus::NullPointer);
        assert_eq!(lifting_linear(0.3, ptr::null_mut()), LiftingStatus::NullPointer);

        let mut g = LiftingComplex::default();
        assert_eq!(lifting_log_gamma(LiftingComplex { re: -2.0, im: 0.0 }, &mut g), LiftingStatus::Pole);
        // a later success clears the message
        assert_eq!(lifting_log_gamma(LiftingComplex { re: 0.5, im: 0.0 }, &mut g), LiftingStatus::Ok);
        assert!((g.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!(last_error().is_none());
    }
}

#[test]
fn closed_forms() {
    // SAFETY: pointers passed below are live locals, handles from the library, or NULL
    unsafe {
        let mut a = LiftingAmplitudes::default();
        assert_eq!(lifting_rosen_zener(1.0, 0.0, &mut a), LiftingStatus::Ok);
        // resonant pi pulse: full transfer
        assert!((a.plus.re.powi(2) + a.plus.im.powi(2) - 1.0).abs() < 1e-15);
        assert_eq!(lifting_trig_lineshape(1, std::f64::consts::FRAC_PI_2, 2.0, &mut a), LiftingStatus::Ok);
        assert_eq!(a.plus.re, 0.0);
        let mut l = LiftingLifting::default();
        assert_eq!(lifting_universal(2, 0.0, 100.0, &mut l), LiftingStatus::Ok);
        assert!((l.p_plus - 0.5).abs() < 1e-15);
        assert_eq!(lifting_exponential(0.0, 500.0, 1e-8, &mut l), LiftingStatus::Ok);
        assert!((l.p_plus + l.p_minus - 1.0).abs() < 1e-15);
    }
}

#[test]
fn scenario_json_roundtrip() {
    // SAFETY: pointers passed below are live locals, handles from the library, or NULL
    unsafe {
        let cfg = CString::new(
            "name = \"ffi\"\nmodels = [\"linear_exact\"]\n[shape]\nkind = \"power_rise\"\nn = 1\ntau_end = 1.0\n\
             [params]\nt0_omega0 = 100.0\nt0_delta0 = 5.0\n",
        )
        .unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(lifting_run_scenario_json(cfg.as_ptr(), 0.0, &mut out), LiftingStatus::Ok);
        let json = CStr::from_ptr(out).to_str().unwrap().to_owned();
        lifting_string_free(out);
        assert!(json.contains("\"scenario\": \"ffi\""));

        let bad = CString::new(cfg.to_str().unwrap().replace("[\"linear_exact\"]", "[]")).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(lifting_run_scenario_json(bad.as_ptr(), 0.0, &mut out), LiftingStatus::ConfigError);
        assert!(out.is_null());
        assert!(last_error().unwrap().contains("models"));
    }
}

#[test]
fn last_error_is_per_thread() {
    // SAFETY: pointers passed below are live locals, handles from the library, or NULL
    unsafe {
        let mut g = LiftingComplex::default();
        assert_eq!(lifting_log_gamma(LiftingComplex { re: 0.0, im: 0.0 }, &mut g), LiftingStatus::Pole);
        std::thread::spawn(|| assert!(last_error().is_none())).join().unwrap();
        assert!(last_error().is_some());
    }
}
