use std::ffi::CStr;
use std::ptr;

use wirephase_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    let n = unsafe { wp_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned();
    assert_eq!(s.len(), n.min(buf.len() - 1));
    s
}

#[test]
fn reference_phase_and_limit() {
    unsafe {
        let s = wp_scenario_reference();
        let mut p = 0.0;
        assert_eq!(wp_scenario_prefactor(s, &mut p), WpStatus::Ok);
        assert!((p / 2.531567748126157e-6 - 1.0).abs() < 1e-12);
        let mut phase = WpPhase::default();
        assert_eq!(
            wp_phase_difference(s, WpMethod::ClosedForm, &mut phase),
            WpStatus::Ok
        );
        assert!((phase.delta_phi / 2.1317e-6 - 1.0).abs() < 1e-4);
        let mut a = 0.0;
        assert_eq!(
            wp_alpha_limit(s, WpMethod::ClosedForm, &mut a),
            WpStatus::Ok
        );
        assert!((a - 469.108).abs() < 1e-2);
        wp_scenario_free(s);
    }
}

#[test]
fn special_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(wp_bessel_k0(1.0, &mut v), WpStatus::Ok);
        assert!((v - 0.421_024_438_240_708_23).abs() < 1e-15);
        assert_eq!(wp_hyp2f1_half(1, 1.0, &mut v), WpStatus::Ok);
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(wp_bessel_k0(-1.0, &mut v), WpStatus::Domain);
        assert!(last_error().contains("domain"));
        assert_eq!(wp_bessel_k0(1.0, ptr::null_mut()), WpStatus::NullPointer);
    }
}

#[test]
fn errors_and_messages() {
    unsafe {
        let mut s = ptr::null_mut();
        let st = wp_scenario_new(2e-25, 0.0, 1.0, 2e4, 1e-4, 1e-4, 1.0, 1e-3, 1e-3, &mut s);
        assert_eq!(st, WpStatus::InvalidParameter);
        assert!(s.is_null());
        assert!(last_error().contains("beam.speed"));

        let st = wp_scenario_new(2e-25, 10.0, 1.0, 2e4, 1e-4, 1e-4, 1.0, 1e-3, 1e-3, &mut s);
        assert_eq!(st, WpStatus::Ok);
        assert_eq!(wp_last_error_message(ptr::null_mut(), 0), 0);
        let mut a = 0.0;
        assert_eq!(
            wp_alpha_limit(s, WpMethod::ClosedForm, &mut a),
            WpStatus::UnsupportedModel
        );
        assert_eq!(
            wp_scenario_set_extradim(s, 0, 1.0, 1e-4),
            WpStatus::InvalidParameter
        );
        assert_eq!(
            wp_scenario_set_yukawa(ptr::null_mut(), 1.0, 1e-4),
            WpStatus::NullPointer
        );
        assert_eq!(
            wp_scenario_set_quadrature(s, 1.0, 100),
            WpStatus::InvalidParameter
        );
        let mut best = WpDistanceOptimum::default();
        assert_eq!(
            wp_optimize_distance(s, 0, 1e-4, 1e-3, 1e-6, &mut best),
            WpStatus::Range
        );
        wp_scenario_free(s);
        wp_scenario_free(ptr::null_mut());
    }
}

#[test]
fn numerical_newtonian_is_exact_path_phase() {
    unsafe {
        let s = wp_scenario_reference();
        assert_eq!(wp_scenario_set_newtonian(s), WpStatus::Ok);
        assert_eq!(wp_scenario_set_distance(s, 1e-5), WpStatus::Ok);
        let (mut c, mut n) = (WpPhase::default(), WpPhase::default());
        assert_eq!(
            wp_phase_difference(s, WpMethod::ClosedForm, &mut c),
            WpStatus::Ok
        );
        assert_eq!(
            wp_phase_difference(s, WpMethod::Numerical, &mut n),
            WpStatus::Ok
        );
        assert!((n.delta_phi / c.delta_phi - 0.79332).abs() < 1e-4);
        wp_scenario_free(s);
    }
}

#[test]
fn scan_curve_access() {
    unsafe {
        let s = wp_scenario_reference();
        let mut curve = ptr::null_mut();
        let st = wp_scan(
            s,
            2,
            1e-5,
            1e-3,
            21,
            1e-4,
            WpMassCoupling::TracksDistance,
            WpMethod::ClosedForm,
            &mut curve,
        );
        assert_eq!(st, WpStatus::Ok);
        assert_eq!(wp_curve_len(curve), 21);
        assert_eq!(wp_curve_failures(curve), 0);
        let (mut l, mut a, mut r) = (0.0, 0.0, WpRegime::Native);
        let mut prev = 0.0;
        for i in 0..21 {
            assert_eq!(
                wp_curve_point(curve, i, &mut l, &mut a, &mut r),
                WpStatus::Ok
            );
            assert!(l > prev && a > 0.0);
            let want = if l < 1e-4 {
                WpRegime::YukawaExtrapolated
            } else {
                WpRegime::Native
            };
            assert_eq!(r, want);
            prev = l;
        }
        assert_eq!(
            wp_curve_point(curve, 21, &mut l, &mut a, &mut r),
            WpStatus::IndexOutOfBounds
        );
        wp_curve_free(curve);
        assert_eq!(wp_curve_len(ptr::null()), 0);

        let st = wp_scan(
            s,
            0,
            1e-3,
            1e-5,
            5,
            1e-4,
            WpMassCoupling::FixedMass,
            WpMethod::ClosedForm,
            &mut curve,
        );
        assert_eq!(st, WpStatus::Range);

        let mut best = WpDistanceOptimum::default();
        assert_eq!(
            wp_optimize_distance(s, 0, 1e-4, 1e-6, 1e-3, &mut best),
            WpStatus::Ok
        );
        assert!((5e-5..=2e-4).contains(&best.distance));
        wp_scenario_free(s);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(wp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
