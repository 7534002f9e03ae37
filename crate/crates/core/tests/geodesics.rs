use std::f64::consts::PI;

use flatspace_core::geodesic::*;
use proptest::prelude::*;

const R_O: f64 = 1476.6;
const A: f64 = 5.79e10;
const ECC: f64 = 0.2056;

#[test]
fn mercury_rosette_matches_analytic() {
    let tr = integrate_rosette(R_O, A, ECC, 10, 1e-12).unwrap();
    let num = precession_numeric(&tr).unwrap();
    let ana = precession_analytic(R_O, A, ECC);
    assert_eq!(num.orbits, 10);
    let rel = (num.delta_phi_per_orbit / ana.delta_phi_per_orbit - 1.0).abs();
    assert!(rel < 5e-3, "numeric {} analytic {}", num.delta_phi_per_orbit, ana.delta_phi_per_orbit);
}

#[test]
fn mercury_analytic_value() {
    let ana = precession_analytic(R_O, A, ECC).delta_phi_per_orbit;
    // 6π·1476.6 / (5.79e10·(1 − 0.2056²))
    let oracle = 6.0 * std::f64::consts::PI * 1476.6 / (5.79e10 * 0.95772864);
    assert!((ana - oracle).abs() < 1e-18);
    assert!((ana - 5.018e-7).abs() < 0.002e-7);
}

#[test]
fn high_eccentricity_rosette() {
    let a = 1e10;
    let r_o = 1e-7 * a;
    let tr = integrate_rosette(r_o, a, 0.9, 5, 1e-13).unwrap();
    let num = precession_numeric(&tr).unwrap().delta_phi_per_orbit;
    let ana = precession_analytic(r_o, a, 0.9).delta_phi_per_orbit;
    assert!((num / ana - 1.0).abs() < 1e-2, "{num} vs {ana}");
}

#[test]
fn mercury_exact_geodesic_matches_its_closed_form() {
    let (s, i) = orbit_from_elements(R_O, A, ECC).unwrap();
    let tr = integrate_orbit(R_O, &s, &i, 10, DEFAULT_TOL).unwrap();
    let num = precession_numeric(&tr).unwrap().delta_phi_per_orbit;
    let exact = precession_exact(R_O, &i);
    assert!((num / exact - 1.0).abs() < 5e-3, "{num} vs {exact}");
    // the exact metric alone gives one sixth of the rosette value
    let ana = precession_analytic(R_O, A, ECC).delta_phi_per_orbit;
    assert!((exact / ana - 1.0 / 6.0).abs() < 1e-3);
}

#[test]
fn kepler_limit_does_not_precess() {
    let a = 1e10;
    let r_o = 1e-12 * a;
    let (s, i) = orbit_from_elements(r_o, a, 0.3).unwrap();
    let tr = integrate_orbit(r_o, &s, &i, 3, DEFAULT_TOL).unwrap();
    let num = precession_numeric(&tr).unwrap().delta_phi_per_orbit;
    assert!(num.abs() < 1e-9, "{num}");
}

#[test]
fn constraint_holds_over_100_orbits() {
    let (s, i) = orbit_from_elements(R_O, A, ECC).unwrap();
    let tr = integrate_orbit(R_O, &s, &i, 100, DEFAULT_TOL).unwrap();
    assert!(tr.max_residual() < 1e-9, "{}", tr.max_residual());
}

#[test]
fn newtonian_closure_circle_is_nearly_circular() {
    let (s, i) = orbit_from_elements(R_O, A, 0.0).unwrap();
    assert_eq!(s.drdp, 0.0);
    let tr = integrate_span(R_O, &s, &i, 2.0 * keplerian_period(R_O, A), DEFAULT_TOL).unwrap();
    for st in tr.states() {
        assert!((st.r - A).abs() / A < 10.0 * R_O / A);
    }
}

#[test]
fn strong_field_departs_from_weak_formula() {
    let r_o = 1.0;
    let (r1, r2) = (20.0, 40.0);
    let (s, i) = orbit_from_turning_points(r_o, r1, r2).unwrap();
    let tr = integrate_orbit(r_o, &s, &i, 5, DEFAULT_TOL).unwrap();
    let num = precession_numeric(&tr).unwrap().delta_phi_per_orbit;
    let a = 0.5 * (r1 + r2);
    let ecc = (r2 - r1) / (r2 + r1);
    let weak = precession_analytic(r_o, a, ecc).delta_phi_per_orbit;
    assert!((num / weak - 1.0).abs() > 0.01);
    let quad = precession_quadrature(r_o, &i).unwrap();
    assert!((num / quad - 1.0).abs() < 1e-6);
}

#[test]
fn turning_point_residual_vanishes() {
    for (r1, r2) in [(20.0, 40.0), (100.0, 101.0), (1e6, 3e6)] {
        let (_, i) = orbit_from_turning_points(1.0, r1, r2).unwrap();
        let (a, b) = turning_points(1.0, &i).unwrap();
        for r in [a, b] {
            let x = 1.0 / r;
            let rdot2 = 2.0 * x + x * x + i.one_minus_mu - i.j_phi * i.j_phi / (r * r);
            assert!(rdot2.abs() < 1e-12, "{rdot2}");
        }
    }
}

#[test]
fn time_reversal_returns_to_start() {
    let (s, i) = orbit_from_turning_points(1.0, 25.0, 70.0).unwrap();
    let fwd = integrate_orbit(1.0, &s, &i, 3, DEFAULT_TOL).unwrap();
    let end = fwd.last_state();
    let back = integrate_span(1.0, &end, &i, s.p, DEFAULT_TOL).unwrap();
    let home = back.last_state();
    assert!((home.r - s.r).abs() / s.r < 1e-8);
    assert!((home.phi - s.phi).abs() < 1e-8);
}

#[test]
fn closure_precession_is_one_sixth_over_span() {
    // large r/r_o: closed form 2π(1/√(1 − r_o²/J²) − 1) ≈ π r_o /(a(1 − ε²))
    let (_, i) = orbit_from_elements(R_O, A, ECC).unwrap();
    let exact = precession_exact(R_O, &i);
    let leading = PI * R_O / (A * (1.0 - ECC * ECC));
    assert!((exact / leading - 1.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn elements_satisfy_constraint(a in 1e3f64..1e12, ecc in 0.0f64..0.95, x in 1e-9f64..1e-3) {
        let r_o = x * a * (1.0 - ecc);
        let (s, i) = orbit_from_elements(r_o, a, ecc).unwrap();
        prop_assert!(constraint_residual(r_o, &i, s.r, s.drdp).abs() < 1e-12);
        let (r1, _) = turning_points(r_o, &i).unwrap();
        prop_assert!((r1 - s.r).abs() / s.r < 1e-8);
    }

    #[test]
    fn numeric_advance_matches_exact(r1 in 15.0f64..60.0, span in 1.1f64..4.0) {
        let (s, i) = orbit_from_turning_points(1.0, r1, r1 * span).unwrap();
        let tr = integrate_orbit(1.0, &s, &i, 2, DEFAULT_TOL).unwrap();
        let num = precession_numeric(&tr).unwrap().delta_phi_per_orbit;
        let exact = precession_exact(1.0, &i);
        prop_assert!((num - exact).abs() < 1e-7 * exact.max(1e-3));
    }
}
