//! The three classic observables for each model, so weak-field agreement
//! and strong-field divergence can be tabulated side by side.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use flatspace_core::geodesic::{integrate_inverse_radius, integrate_rosette, precession_numeric};
use flatspace_core::numerics::{integrate, QuadOptions};
use flatspace_core::photon::{deflection_integral, shapiro_delay, EchoGeometry};

use crate::scenario::{Model, Scenario, C_SI};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Precession,
    Deflection,
    Delay,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Precession, Quantity::Deflection, Quantity::Delay];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Precession => "precession",
            Quantity::Deflection => "deflection",
            Quantity::Delay => "delay",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Quantity::Precession => "rad/orbit",
            Quantity::Deflection => "rad",
            Quantity::Delay => "s",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| CliError::UnsupportedQuantity(s.into()))
    }
}

/// Value of `q` under `model`, with a provenance label.
pub fn observable(model: Model, q: Quantity, s: &Scenario) -> Result<(f64, &'static str), CliError> {
    match model {
        Model::FlatspaceWeber => flatspace(q, s),
        Model::Schwarzschild => Ok((schwarzschild_baseline(q, s)?, schwarzschild_provenance(q))),
        Model::Newtonian => newtonian(q, s),
    }
}

fn flatspace(q: Quantity, s: &Scenario) -> Result<(f64, &'static str), CliError> {
    Ok(match q {
        Quantity::Precession => {
            let tr = integrate_rosette(s.r_o, s.semi_major_axis, s.eccentricity, s.n_orbits, rosette_rtol(s))?;
            (precession_numeric(&tr)?.delta_phi_per_orbit, "numeric rosette integration in phi")
        }
        Quantity::Deflection => (
            deflection_integral(s.r_o, s.body_radius)?.quadrature,
            "quadrature of the transverse speed gradient",
        ),
        Quantity::Delay => (
            shapiro_delay(&echo_geometry(s)?, false)?.quadrature / C_SI,
            "quadrature of 1/ldot - 1 along the straight path",
        ),
    })
}

pub(crate) fn rosette_rtol(s: &Scenario) -> f64 {
    (s.tol * 1e-2).clamp(1e-13, 1e-6)
}

pub(crate) fn echo_geometry(s: &Scenario) -> Result<EchoGeometry, CliError> {
    Ok(EchoGeometry::new(s.earth_distance, s.planet_distance, s.body_radius, s.r_o)?)
}

fn schwarzschild_provenance(q: Quantity) -> &'static str {
    match q {
        Quantity::Precession => "numeric Binet equation u'' + u = r_o/L^2 + 3 r_o u^2",
        Quantity::Deflection => "exact Schwarzschild null geodesic by quadrature",
        Quantity::Delay => "isotropic refractive index along the straight path",
    }
}

/// Same observable from the Schwarzschild solution (`g_00 = 1 − 2r_o/r`
/// with curved space). Returns 0 for `r_o = 0`.
pub fn schwarzschild_baseline(q: Quantity, s: &Scenario) -> Result<f64, CliError> {
    let r_o = s.r_o;
    if r_o == 0.0 {
        return Ok(0.0);
    }
    match q {
        Quantity::Precession => {
            let l2 = r_o * s.semi_major_axis * (1.0 - s.eccentricity * s.eccentricity);
            let k = r_o / l2;
            let u_peri = 1.0 / (s.semi_major_axis * (1.0 - s.eccentricity));
            let tr = integrate_inverse_radius(move |u, _| -u + k + 3.0 * r_o * u * u, u_peri, s.n_orbits, rosette_rtol(s))?;
            Ok(precession_numeric(&tr)?.delta_phi_per_orbit)
        }
        Quantity::Deflection => schwarzschild_deflection(r_o, s.body_radius),
        Quantity::Delay => schwarzschild_delay(s),
    }
}

/// `2∫₀^{u_m} du/√(b⁻² − u² + 2r_o u³) − π` for closest approach `1/u_m`,
/// reported with the negative (toward the body) sign convention.
pub fn schwarzschild_deflection(r_o: f64, closest: f64) -> Result<f64, CliError> {
    let um = 1.0 / closest;
    if 3.0 * r_o * um >= 1.0 {
        return Err(CliError::Config(format!("closest approach {closest} is inside the photon sphere")));
    }
    // u = u_m(1 − s²) factors the turning point out of the radicand
    let half = integrate(
        |s: f64| {
            let u = um * (1.0 - s * s);
            let bracket = (um + u) - 2.0 * r_o * (um * um + um * u + u * u);
            2.0 * um.sqrt() / bracket.sqrt()
        },
        0.0,
        1.0,
        QuadOptions::rel(1e-14),
    )
    .map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(-(2.0 * half.value - PI))
}

/// Round-trip excess light time (s) with the isotropic index
/// `n = (1 + r_o/2r)³/(1 − r_o/2r)` along the straight path.
pub fn schwarzschild_delay(s: &Scenario) -> Result<f64, CliError> {
    echo_geometry(s)?;
    let (r_o, big_r) = (s.r_o, s.body_radius);
    let theta = |d: f64| ((d * d - big_r * big_r).sqrt() / big_r).atan();
    // r = R sec θ, dl = R sec²θ dθ; n − 1 = (4q + 3q² + q³)/(1 − q), q = r_o/2r
    let one_way = integrate(
        |th: f64| {
            let c = th.cos();
            let q = 0.5 * r_o * c / big_r;
            (4.0 * q + 3.0 * q * q + q * q * q) / (1.0 - q) * big_r / (c * c)
        },
        -theta(s.earth_distance),
        theta(s.planet_distance),
        QuadOptions::rel(1e-12),
    )
    .map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(2.0 * one_way.value / C_SI)
}

fn newtonian(q: Quantity, s: &Scenario) -> Result<(f64, &'static str), CliError> {
    Ok(match q {
        Quantity::Precession => {
            let l2 = s.r_o * s.semi_major_axis * (1.0 - s.eccentricity * s.eccentricity);
            let k = s.r_o / l2;
            let u_peri = 1.0 / (s.semi_major_axis * (1.0 - s.eccentricity));
            let tr = integrate_inverse_radius(move |u, _| k - u, u_peri, s.n_orbits, rosette_rtol(s))?;
            (precession_numeric(&tr)?.delta_phi_per_orbit, "numeric Kepler Binet equation")
        }
        Quantity::Deflection => (-2.0 * s.r_o / s.body_radius, "corpuscular deflection -2 r_o/R"),
        Quantity::Delay => (0.0, "no delay for constant light speed"),
    })
}
