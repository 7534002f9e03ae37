use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::orbit::{exact_apsidal_angle, turning_points, Trajectory};
use super::{GeodesicError, OrbitIntegrals};
use crate::numerics::{integrate, refine_root, Dopri5, OdeSystem, QuadOptions, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecessionMethod {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecessionResult {
    /// Perihelion advance per orbit (rad).
    pub delta_phi_per_orbit: f64,
    /// Filled in by [`PrecessionResult::with_orbits_per_century`].
    pub arcsec_per_century: Option<f64>,
    pub method: PrecessionMethod,
    /// Orbits averaged over (0 for analytic results).
    pub orbits: usize,
}

impl PrecessionResult {
    pub fn with_orbits_per_century(mut self, n: f64) -> Self {
        self.arcsec_per_century = Some(self.delta_phi_per_orbit * n * 180.0 * 3600.0 / PI);
        self
    }
}

/// `Δφ = 6π r_o / (a(1 − ε²))` per orbit.
pub fn precession_analytic(r_o: f64, a: f64, ecc: f64) -> PrecessionResult {
    PrecessionResult {
        delta_phi_per_orbit: 6.0 * PI * r_o / (a * (1.0 - ecc * ecc)),
        arcsec_per_century: None,
        method: PrecessionMethod::Analytic,
        orbits: 0,
    }
}

/// Closed-form advance of the exact central-field geodesic,
/// `2π(1/√(1 − r_o²/J²) − 1)`.
pub fn precession_exact(r_o: f64, integrals: &OrbitIntegrals) -> f64 {
    exact_apsidal_angle(r_o, integrals) - 2.0 * PI
}

/// Advance of the exact geodesic from `2∫ dφ/dr dr` between the turning
/// points, with `r = c − h cos θ` removing the endpoint singularities.
pub fn precession_quadrature(r_o: f64, integrals: &OrbitIntegrals) -> Result<f64, GeodesicError> {
    let (r1, r2) = turning_points(r_o, integrals)?;
    let (c, h) = (0.5 * (r1 + r2), 0.5 * (r2 - r1));
    let scale = integrals.j_phi / (-integrals.one_minus_mu).sqrt();
    let half = integrate(|th: f64| scale / (c - h * th.cos()), 0.0, PI, QuadOptions::rel(1e-13))?;
    Ok(2.0 * half.value - 2.0 * PI)
}

/// Kepler period `2π √(a³/r_o)` in length units (multiply by 1/c for time).
pub fn keplerian_period(r_o: f64, a: f64) -> f64 {
    2.0 * PI * (a * a * a / r_o).sqrt()
}

/// Anything that can report the polar angles of its radial minima.
pub trait PerihelionSource {
    fn perihelion_angles(&self) -> Result<Vec<f64>, GeodesicError>;
}

/// Mean advance between successive radial minima, minus 2π.
pub fn precession_numeric<T: PerihelionSource + ?Sized>(
    trajectory: &T,
) -> Result<PrecessionResult, GeodesicError> {
    let angles = trajectory.perihelion_angles()?;
    if angles.len() < 2 {
        return Err(GeodesicError::InsufficientOrbits(angles.len()));
    }
    let orbits = angles.len() - 1;
    let sweep = (angles[orbits] - angles[0]) / orbits as f64;
    Ok(PrecessionResult {
        delta_phi_per_orbit: sweep - 2.0 * PI,
        arcsec_per_century: None,
        method: PrecessionMethod::Numeric,
        orbits,
    })
}

/// Angles of radial minima along stored samples. `slope` has the sign of
/// `dr/dφ`; crossings from negative to non-negative are refined by
/// re-stepping from the left sample.
pub(crate) fn minima_angles<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    samples: &[Sample<N>],
    slope: impl Fn(&[f64; N]) -> f64,
    angle: impl Fn(f64, &[f64; N]) -> f64,
    xtol: impl Fn(&Sample<N>) -> f64,
) -> Result<Vec<f64>, GeodesicError> {
    let mut out = Vec::new();
    if samples.len() >= 2 && slope(&samples[0].y) == 0.0 && slope(&samples[1].y) > 0.0 {
        out.push(angle(samples[0].x, &samples[0].y));
    }
    for w in samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if slope(&a.y) < 0.0 && slope(&b.y) >= 0.0 {
            let h = refine_root(
                |h| slope(&Dopri5::advance(sys, a, h)),
                0.0,
                b.x - a.x,
                xtol(a),
            )?;
            out.push(angle(a.x + h, &Dopri5::advance(sys, a, h)));
        }
    }
    Ok(out)
}

impl PerihelionSource for Trajectory {
    fn perihelion_angles(&self) -> Result<Vec<f64>, GeodesicError> {
        minima_angles(
            &self.system(),
            &self.samples,
            |y| y[3],
            |_, y| y[2],
            |s| 1e-13 / s.dy[2].abs().max(1e-300),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{integrate_orbit, orbit_from_turning_points, DEFAULT_TOL};

    #[test]
    fn analytic_is_linear_in_r_o() {
        assert_eq!(precession_analytic(0.0, 1e10, 0.3).delta_phi_per_orbit, 0.0);
        let one = precession_analytic(1.0, 1e10, 0.3).delta_phi_per_orbit;
        let two = precession_analytic(2.0, 1e10, 0.3).delta_phi_per_orbit;
        assert!((two - 2.0 * one).abs() < 1e-30);
    }

    #[test]
    fn century_conversion() {
        let r = PrecessionResult {
            delta_phi_per_orbit: PI / (180.0 * 3600.0),
            arcsec_per_century: None,
            method: PrecessionMethod::Analytic,
            orbits: 0,
        }
        .with_orbits_per_century(415.0);
        assert!((r.arcsec_per_century.unwrap() - 415.0).abs() < 1e-9);
    }

    #[test]
    fn strong_field_routes_agree() {
        let (s, i) = orbit_from_turning_points(1.0, 20.0, 40.0).unwrap();
        let exact = precession_exact(1.0, &i);
        let quad = precession_quadrature(1.0, &i).unwrap();
        assert!((quad - exact).abs() < 1e-11);
        let tr = integrate_orbit(1.0, &s, &i, 4, DEFAULT_TOL).unwrap();
        let num = precession_numeric(&tr).unwrap();
        assert_eq!(num.orbits, 4);
        assert!((num.delta_phi_per_orbit - exact).abs() < 1e-8 * exact);
    }

    struct Fixed(Vec<f64>);
    impl PerihelionSource for Fixed {
        fn perihelion_angles(&self) -> Result<Vec<f64>, GeodesicError> {
            Ok(self.0.clone())
        }
    }

    #[test]
    fn needs_two_passages() {
        assert_eq!(
            precession_numeric(&Fixed(vec![0.0])),
            Err(GeodesicError::InsufficientOrbits(1))
        );
        let r = precession_numeric(&Fixed(vec![0.0, 2.0 * PI + 0.1, 4.0 * PI + 0.2])).unwrap();
        assert!((r.delta_phi_per_orbit - 0.1).abs() < 1e-14);
    }
}
