//! One function per subcommand, each returning a finished report.

use std::f64::consts::PI;

use flatspace_core::carrier::{
    density_identities, electric_profile, enclosed_energy, enclosed_energy_split, energy_density,
    field_intensity, gauss_flux, ElectricCarrier, RadialCarrier,
};
use flatspace_core::geodesic::{
    circular_orbit, integrate_inverse_radius, integrate_orbit, integrate_rosette, integrate_span,
    orbit_from_elements, precession_analytic, precession_exact, precession_numeric, InverseRadiusTrajectory,
};
use flatspace_core::photon::{deflection_integral, fermat_ray_integrate, shapiro_delay, RayState};
use flatspace_core::spin::{
    frame_dragging_rate, measured_rotation, predicted_rotation, transport_spin, EmbeddedOrbit, RotatingFieldSpec,
};
use flatspace_core::Vec3;
use rayon::prelude::*;

use crate::baseline::{echo_geometry, observable, rosette_rtol, Quantity};
use crate::report::{RunReport, Table};
use crate::scenario::{Model, OrbitPlane, Scenario, ARCSEC, C_SI, G_SI, SECONDS_PER_YEAR};
use crate::CliError;

const WEBER: &str = "flatspace-weber";

fn unsupported(command: &str, model: Model) -> CliError {
    CliError::UnsupportedQuantity(format!("{command} under model {model}"))
}

fn inverse_radius_orbit(s: &Scenario) -> Result<(InverseRadiusTrajectory, &'static str), CliError> {
    let r_o = s.r_o;
    let l2 = r_o * s.semi_major_axis * (1.0 - s.eccentricity * s.eccentricity);
    let k = r_o / l2;
    let u_peri = 1.0 / (s.semi_major_axis * (1.0 - s.eccentricity));
    let rtol = rosette_rtol(s);
    Ok(match s.model {
        Model::FlatspaceWeber => (
            integrate_rosette(r_o, s.semi_major_axis, s.eccentricity, s.n_orbits, rtol)?,
            "numeric rosette integration in phi",
        ),
        Model::Schwarzschild => (
            integrate_inverse_radius(move |u, _| -u + k + 3.0 * r_o * u * u, u_peri, s.n_orbits, rtol)?,
            "numeric Binet equation u'' + u = r_o/L^2 + 3 r_o u^2",
        ),
        Model::Newtonian => (
            integrate_inverse_radius(move |u, _| k - u, u_peri, s.n_orbits, rtol)?,
            "numeric Kepler Binet equation",
        ),
    })
}

fn precession_rows(report: &mut RunReport, s: &Scenario, tr: &InverseRadiusTrajectory, provenance: &str) -> Result<(), CliError> {
    let model = s.model.name();
    let per_century = s.orbits_per_century();
    let numeric = precession_numeric(tr)?.with_orbits_per_century(per_century);
    report.add(model, "precession_numeric", numeric.delta_phi_per_orbit, "rad/orbit", Some(rosette_rtol(s)), provenance);
    report.add(
        model,
        "precession_numeric_century",
        numeric.arcsec_per_century.unwrap_or_default(),
        "arcsec/century",
        None,
        "numeric rate times orbits per century",
    );
    report.add(model, "orbits_averaged", numeric.orbits as f64, "1", None, "perihelion passages - 1");
    if s.model != Model::Newtonian {
        let analytic = precession_analytic(s.r_o, s.semi_major_axis, s.eccentricity).with_orbits_per_century(per_century);
        report.add(model, "precession_analytic", analytic.delta_phi_per_orbit, "rad/orbit", None, "6 pi r_o / (a (1 - e^2))");
        report.add(
            model,
            "precession_analytic_century",
            analytic.arcsec_per_century.unwrap_or_default(),
            "arcsec/century",
            None,
            "analytic rate times orbits per century",
        );
    }
    if s.model == Model::FlatspaceWeber {
        let (_, integrals) = orbit_from_elements(s.r_o, s.semi_major_axis, s.eccentricity)?;
        report.add(
            model,
            "precession_exact_metric_geodesic",
            precession_exact(s.r_o, &integrals),
            "rad/orbit",
            None,
            "closed form 2 pi (1/sqrt(1 - r_o^2/J^2) - 1) of the warped-time geodesic",
        );
    }
    Ok(())
}

/// Integrates the orbit and emits its `(φ, r)` trajectory plus precession.
pub fn orbit(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("orbit", s);
    let (tr, provenance) = inverse_radius_orbit(s)?;
    precession_rows(&mut report, s, &tr, provenance)?;
    let mut table = Table::new("trajectory", &["phi_rad", "r_m", "u_per_m", "du_dphi_per_m"]);
    for (phi, u, up) in tr.points() {
        table.push(vec![phi, 1.0 / u, u, up]);
    }
    report.tables.push(table);

    if s.model == Model::FlatspaceWeber {
        // proper-time geodesic of the warped-time metric, for its constraint drift
        let (state, integrals) = orbit_from_elements(s.r_o, s.semi_major_axis, s.eccentricity)?;
        let exact = integrate_orbit(s.r_o, &state, &integrals, s.n_orbits, s.tol)?;
        report.add(
            WEBER,
            "geodesic_constraint_residual",
            exact.max_residual(),
            "1",
            Some(s.tol * s.n_orbits as f64),
            "max relative mass-shell residual along the proper-time geodesic",
        );
    }
    Ok(report)
}

pub fn precession(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("precession", s);
    let (tr, provenance) = inverse_radius_orbit(s)?;
    precession_rows(&mut report, s, &tr, provenance)?;
    Ok(report)
}

pub fn light_deflect(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("light-deflect", s);
    let model = s.model.name();
    if s.model != Model::FlatspaceWeber {
        let (v, prov) = observable(s.model, Quantity::Deflection, s)?;
        report.add(model, "deflection", v, "rad", None, prov);
        report.add(model, "deflection_arcsec", v / ARCSEC, "arcsec", None, prov);
        return Ok(report);
    }
    let integral = deflection_integral(s.r_o, s.body_radius)?;
    let ray = fermat_ray_integrate(&RayState::incoming(1.0 / s.body_radius), s.r_o)?;
    let routes = [
        ("deflection_integral", integral.quadrature, "quadrature of the transverse speed gradient"),
        ("deflection_ray", ray.deflection, "ray equation u'' + u = 2 r_o u0^2 integrated in phi"),
        ("deflection_closed_form", integral.closed_form, "-4 r_o / R"),
    ];
    for (q, v, prov) in routes {
        report.add(model, q, v, "rad", None, prov);
        report.add(model, &format!("{q}_arcsec"), v / ARCSEC, "arcsec", None, prov);
    }
    report.add(
        model,
        "ray_first_integral_residual",
        ray.max_first_integral_residual,
        "1",
        Some(17.0 * (s.r_o / s.body_radius).powi(2)),
        "max |(1 - 4 r_o u)(u'^2 + u^2) - u0^2| / u0^2",
    );
    let mut table = Table::new("ray", &["phi_rad", "u_per_m", "du_dphi_per_m"]);
    for p in &ray.points {
        table.push(vec![p.phi, p.u, p.uprime]);
    }
    report.tables.push(table);
    Ok(report)
}

pub fn echo_delay(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("echo-delay", s);
    let model = s.model.name();
    if s.model != Model::FlatspaceWeber {
        let (v, prov) = observable(s.model, Quantity::Delay, s)?;
        report.add(model, "delay", v, "s", None, prov);
        report.add(model, "delay_us", v * 1e6, "us", None, prov);
        return Ok(report);
    }
    let d = shapiro_delay(&echo_geometry(s)?, true)?;
    let rows = [
        ("delay_quadrature", d.quadrature, "quadrature of 1/ldot - 1 along the straight path"),
        ("delay_closed_form", d.closed_form, "4 r_o ln(4 r_ms r_es / R^2)"),
        ("delay_observer", d.observer.unwrap_or(d.quadrature), "quadrature times sqrt(g00) at the Earth"),
    ];
    for (q, v, prov) in rows {
        report.add(model, q, v / C_SI, "s", None, prov);
        report.add(model, &format!("{q}_us"), v / C_SI * 1e6, "us", None, prov);
    }
    report.add(
        model,
        "delay_quadrature_vs_closed_form",
        d.quadrature / d.closed_form - 1.0,
        "1",
        Some(0.02),
        "relative difference",
    );
    Ok(report)
}

pub fn gyro(s: &Scenario) -> Result<RunReport, CliError> {
    if s.model != Model::FlatspaceWeber {
        return Err(unsupported("gyro", s.model));
    }
    let mut report = RunReport::new("gyro", s);
    let omega = Vec3::new(0.0, 0.0, s.spin_per_length());
    let spec = RotatingFieldSpec::homogeneous_sphere(s.r_o, s.body_radius, omega);
    let r = s.orbit_radius;
    let (state, integrals) = circular_orbit(s.r_o, r)?;
    let p_end = 2.0 * PI * r * r / integrals.j_phi * s.n_orbits as f64;
    let tr = integrate_span(s.r_o, &state, &integrals, p_end, s.tol)?;
    let e2 = match s.orbit_plane {
        OrbitPlane::Polar => Vec3::z(),
        OrbitPlane::Equatorial => Vec3::y(),
    };
    let orbit = EmbeddedOrbit::new(tr, Vec3::x(), e2)?;
    let period_s = orbit.trajectory.last_state().t / C_SI / s.n_orbits as f64;

    let measured = measured_rotation(&spec, &orbit, s.tol)?;
    let predicted = predicted_rotation(&spec, &orbit)?;
    let still = RotatingFieldSpec { omega: Vec3::zeros(), ..spec };
    let geodetic = measured_rotation(&still, &orbit, s.tol)?.rotation;
    let dragging = measured.rotation - geodetic;
    let to_mas_per_year = SECONDS_PER_YEAR / (period_s * s.n_orbits as f64) / ARCSEC * 1e3;

    let model = WEBER;
    for (label, v, prov) in [
        ("rotation_measured", measured.rotation, "transported basis spins, antisymmetric part of the J map"),
        ("rotation_predicted", predicted, "integral of (Omega_fd + Omega_gf) dt"),
        ("rotation_geodetic", geodetic, "measured rotation with the body spin removed"),
        ("rotation_frame_dragging", dragging, "measured minus geodetic"),
    ] {
        for (axis, c) in ["x", "y", "z"].iter().zip(v.iter()) {
            report.add(model, &format!("{label}_{axis}"), *c, "rad", Some(s.tol), prov);
        }
        report.add(model, &format!("{label}_rate"), v.norm() * to_mas_per_year, "mas/yr", None, prov);
    }
    report.add(
        model,
        "rotation_relative_mismatch",
        (measured.rotation - predicted).norm() / predicted.norm(),
        "1",
        Some(0.01),
        "|measured - predicted| / |predicted|",
    );
    report.add(model, "rotation_symmetric_residual", measured.symmetric_residual, "1", None, "non-rotational part of the J map");
    report.add(model, "orbit_period", period_s, "s", None, "coordinate time of one revolution");

    let scale = spec.inertia * omega.z / r.powi(3);
    let equatorial = frame_dragging_rate(&spec, &Vec3::new(r, 0.0, 0.0));
    let polar = frame_dragging_rate(&spec, &Vec3::new(0.0, 0.0, r));
    report.add(model, "omega_fd_equatorial_over_gi_omega_r3", equatorial.z / scale, "1", None, "frame-dragging rate at the equator");
    report.add(model, "omega_fd_polar_over_gi_omega_r3", polar.z / scale, "1", None, "frame-dragging rate over the pole");

    let spin = transport_spin(&Vec3::x(), &spec, &orbit, s.tol)?;
    let mut table = Table::new(
        "spin",
        &["t_s", "x_m", "y_m", "z_m", "s_x", "s_y", "s_z", "j_x", "j_y", "j_z", "norm"],
    );
    for q in &spin.samples {
        table.push(vec![
            q.t / C_SI, q.x.x, q.x.y, q.x.z, q.s.x, q.s.y, q.s.z, q.j.x, q.j.y, q.j.z, q.norm,
        ]);
    }
    report.tables.push(table);
    Ok(report)
}

pub fn density(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("density", s);
    // E_M = r_o c⁴/G in joules
    let coupling = G_SI / C_SI.powi(4);
    let c = RadialCarrier::new(s.r_o, coupling)?;
    let model = WEBER;
    report.add(model, "carrier_energy", c.energy(), "J", None, "E_M = r_o c^4 / G");
    let total = enclosed_energy(&c, f64::INFINITY)?;
    report.add(model, "enclosed_fraction_infinity", total.quadrature / c.energy(), "1", Some(1e-8), "quadrature to 1e3 r_o plus exact tail");
    let wide = enclosed_energy_split(&c, f64::INFINITY, 1e6 * c.r_o)?;
    report.add(model, "normalization_1e6", wide.quadrature / c.energy(), "1", Some(1e-8), "quadrature to 1e6 r_o plus exact tail");

    let mut table = Table::new(
        "density",
        &["r_over_ro", "r_m", "epsilon_scaled", "epsilon_j_per_m3", "w_r_scaled", "potential", "enclosed_fraction"],
    );
    let e_scale = c.energy() / c.r_o.powi(3);
    for &x in &s.r_over_ro {
        let r = x * c.r_o;
        let eps = energy_density(&c, r)?;
        let field = field_intensity(&c, r)?;
        let enc = enclosed_energy(&c, r)?;
        let ids = density_identities(&c, r, 1e-3 * r)?;
        table.push(vec![x, r, eps / e_scale, eps, field.w_r * c.r_o, field.potential, enc.fraction(&c)]);
        let tag = format!("r_over_ro={x}");
        report.add(model, &format!("enclosed_fraction[{tag}]"), enc.fraction(&c), "1", Some(1e-12), "E_M R/(R + r_o) normalised");
        report.add(
            model,
            &format!("enclosed_quadrature_mismatch[{tag}]"),
            (enc.quadrature / enc.analytic - 1.0).abs(),
            "1",
            Some(1e-10),
            "adaptive quadrature vs closed form",
        );
        report.add(
            model,
            &format!("density_equality_residual[{tag}]"),
            ids.equality_residual / ids.epsilon,
            "1",
            Some(1e-12),
            "|eps_active - eps_passive| / eps",
        );
        report.add(model, &format!("epsilon_scaled[{tag}]"), eps / e_scale, "1", None, "eps r_o^3 / E_M");
    }
    report.tables.push(table);
    let geometric = RadialCarrier::geometric(s.r_o)?;
    let f1 = gauss_flux(&geometric, s.r_o)?;
    let f2 = gauss_flux(&geometric, 2.0 * s.r_o)?;
    report.add(model, "gauss_flux_ratio_r_2r", f2 / f1, "1", Some(1e-10), "surface integral of f/E_m at 2 r_o over r_o");
    Ok(report)
}

pub fn electric(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("electric", s);
    if s.charge == 0.0 {
        return Err(CliError::Config("electric needs a nonzero charge".into()));
    }
    let c = ElectricCarrier::new(s.charge, s.r_e, s.r_o)?;
    let model = WEBER;
    report.add(model, "total_charge", c.total_charge()?, "e", Some(1e-8), "quadrature to 1e3 r_o plus exact tail");
    report.add(model, "charge_fraction_inside_r_o", c.charge_inside(c.r_o) / c.e, "1", Some(1e-12), "e R/(R + r_o) at R = r_o");
    let se = c.self_energy()?;
    report.add(model, "self_energy_over_e2_re[constant_potential]", se.constant_potential / se.expected, "1", Some(1e-8), "integral of rho e/r_e");
    report.add(model, "self_energy_over_e2_re[potential_overlap]", se.potential_overlap / se.expected, "1", Some(1e-8), "integral of rho W_e");
    report.add(model, "self_energy_over_e2_re[field_energy]", se.field_energy / se.expected, "1", Some(1e-8), "integral of E.D / 4 pi");
    let grad = c.self_potential_gradient(&Vec3::new(c.r_o, 0.0, 0.0), 1e-3 * c.r_o);
    report.add(model, "self_force", grad.norm(), "e/m^2", Some(0.0), "gradient of the constant self-potential");

    let mut table = Table::new("electric", &["r_over_ro", "rho_scaled", "d_r_scaled", "e_r_scaled", "w_e_scaled", "div_d_over_4pi_rho"]);
    for &x in &s.r_over_ro {
        let p = electric_profile(&c, x * c.r_o)?;
        let r3 = c.r_o.powi(3);
        let r2 = c.r_o * c.r_o;
        table.push(vec![
            x,
            p.rho * r3 / c.e,
            p.d_r * r2 / c.e,
            p.e_r * c.r_e * c.r_o / c.e,
            p.w_e * c.r_e / c.e,
            p.div_d / (4.0 * PI * p.rho),
        ]);
    }
    report.tables.push(table);
    Ok(report)
}

/// All three observables under every model, evaluated in parallel and
/// emitted in a fixed order.
pub fn compare(s: &Scenario) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("compare", s);
    let jobs: Vec<(Quantity, Model)> = Quantity::ALL
        .into_iter()
        .flat_map(|q| Model::ALL.into_iter().map(move |m| (q, m)))
        .collect();
    let values: Vec<Result<(f64, &'static str), CliError>> =
        jobs.par_iter().map(|&(q, m)| observable(m, q, s)).collect();
    let mut by_job = Vec::with_capacity(jobs.len());
    for (&(q, m), v) in jobs.iter().zip(values) {
        let (value, prov) = v?;
        report.add(m.name(), q.name(), value, q.unit(), None, prov);
        by_job.push(((q, m), value));
    }
    let get = |q: Quantity, m: Model| by_job.iter().find(|(k, _)| *k == (q, m)).map(|(_, v)| *v).unwrap_or(f64::NAN);
    for q in Quantity::ALL {
        let (a, b) = (get(q, Model::FlatspaceWeber), get(q, Model::Schwarzschild));
        let rel = if b == 0.0 { (a - b).abs() } else { (a / b - 1.0).abs() };
        report.add(
            "flatspace-weber vs schwarzschild",
            &format!("{}_relative_difference", q.name()),
            rel,
            "1",
            Some(1e-3),
            "|flatspace-weber / schwarzschild - 1|",
        );
    }
    Ok(report)
}
