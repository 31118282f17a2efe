use std::f64::consts::PI;

use proptest::prelude::*;
use trenchjj::junction::*;
use trenchjj::transmon::*;
use trenchjj::Error;

// e = 1.602176634e-19 C; Δ/e in volts for Δ in µeV is Δ·1e-6 V
fn ab_oracle_amps(r_n: f64, delta_uev: f64) -> f64 {
    PI * delta_uev * 1e-6 / (2.0 * r_n)
}

#[test]
fn critical_current_against_si_formula() {
    for (r, delta) in [(6600.0, 180.0), (10e3, 170.0), (1.0, 340.0)] {
        let ic_na = critical_current(r, delta).unwrap();
        assert!((ic_na * 1e-9 / ab_oracle_amps(r, delta) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn density_is_current_over_area() {
    // 1 Ω·µm² at Δ = 180 µeV: I_c = 282.74 µA over 1 µm² = 28274 A/cm²
    let jc = critical_current_density(1.0, 180.0).unwrap();
    let oracle = ab_oracle_amps(1.0, 180.0) / 1e-8;
    assert!((jc / oracle - 1.0).abs() < 1e-12);
}

#[test]
fn junction_record_is_consistent() {
    let j = JunctionElectrical::from_measurement(6600.0, 0.065, 180.0).unwrap();
    assert!((j.rna_ohm_um2 - 429.0).abs() < 1e-9);
    let jc_from_ic = j.ic_na * 1e-9 / (j.area_um2 * 1e-8);
    assert!((j.jc_a_cm2 / jc_from_ic - 1.0).abs() < 1e-12);
    assert!(JunctionElectrical::from_measurement(0.0, 0.065, 180.0).is_err());
    assert!(JunctionElectrical::from_measurement(6600.0, -1.0, 180.0).is_err());
}

#[test]
fn spectroscopy_round_trip() {
    for (ej, ec) in [(6000.0_f64, 190.0_f64), (5500.0, 177.0), (3000.0, 250.0)] {
        let f = (8.0 * ej * ec).sqrt() - ec;
        let e = energies_from_spectroscopy(f, ec).unwrap();
        assert!((e.e_j_mhz / ej - 1.0).abs() < 1e-12);
        assert!((e.ej_ec_ratio - ej / ec).abs() < 1e-9);
    }
}

#[test]
fn unphysical_dephasing_rejected() {
    assert!(matches!(
        quality_factors(2811.6, 100.0, 250.0),
        Err(Error::UnphysicalDephasing { .. })
    ));
}

#[test]
fn params_bundle_matches_parts() {
    let p = TransmonParams::derive(
        2811.6,
        190.5,
        70.0,
        667.0,
        6.65,
        0.01,
        Some((184.79, 207.15)),
        RateConvention::OrdinaryFrequency,
    )
    .unwrap();
    let e = energies_from_spectroscopy(2811.6, 190.5).unwrap();
    assert_eq!(p.energies, e);
    let q = photon_dephasing_bound(0.01, 667.0, 70.0, 2811.6, RateConvention::OrdinaryFrequency).unwrap();
    assert_eq!(p.q_phi_photon, q);
    assert!(p.coherence.is_some());
}

proptest! {
    #[test]
    fn ic_scales_inversely_with_rn(r in 10.0..1e5f64, k in 0.1..10.0f64, delta in 50.0..400.0f64) {
        let a = critical_current(r, delta).unwrap();
        let b = critical_current(r * k, delta).unwrap();
        prop_assert!((a / b / k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn design_inverse_round_trip(jc in 1.0..500.0f64, area in 0.01..2.0f64, delta in 100.0..300.0f64) {
        let rn = rn_for_target(jc, area, delta).unwrap();
        let back = JunctionElectrical::from_measurement(rn, area, delta).unwrap();
        prop_assert!((back.jc_a_cm2 / jc - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_phi_at_least_q2e(f in 1000.0..8000.0f64, t1 in 5.0..500.0f64, frac in 0.05..0.98f64) {
        let t2e = 2.0 * t1 * frac;
        let s = quality_factors(f, t1, t2e).unwrap();
        prop_assert!(s.q_phi >= s.q2e * (1.0 - 1e-12));
        prop_assert!((s.q1 / (2.0 * PI * f * 1e6 * t1 * 1e-6) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn photon_bound_falls_with_nbar(n in 1e-4..1.0f64, k in 50.0..1000.0f64, chi in 10.0..500.0f64) {
        let conv = RateConvention::OrdinaryFrequency;
        let a = photon_dephasing_bound(n, k, chi, 3000.0, conv).unwrap();
        let b = photon_dephasing_bound(2.0 * n, k, chi, 3000.0, conv).unwrap();
        prop_assert!((a / b - 2.0).abs() < 1e-9);
        // a larger dispersive shift only adds dephasing
        let stronger = photon_dephasing_bound(n, k, 2.0 * chi, 3000.0, conv).unwrap();
        prop_assert!(stronger < a);
    }
}
