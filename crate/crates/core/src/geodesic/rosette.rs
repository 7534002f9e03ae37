use std::sync::Arc;

use super::precession::{minima_angles, PerihelionSource};
use super::GeodesicError;
use crate::numerics::{Dopri5, OdeSystem, Sample};

/// Correction terms of the rosette equation,
/// `(9/2) r_o u² + 3 r_o u″ u + (3/2) r_o u′²`.
pub fn rosette_correction(u: f64, uprime: f64, usecond: f64, r_o: f64) -> f64 {
    r_o * (4.5 * u * u + 3.0 * usecond * u + 1.5 * uprime * uprime)
}

/// `u″` from `u″ + u − r_o/L² = (9/2) r_o u² + 3 r_o u″ u + (3/2) r_o u′²`.
pub fn rosette_rhs(u: f64, uprime: f64, r_o: f64, l: f64) -> Result<f64, GeodesicError> {
    let denom = 1.0 - 3.0 * r_o * u;
    if !(denom > 0.0) {
        return Err(GeodesicError::DenominatorVanishes(u));
    }
    Ok((-u + r_o / (l * l) + r_o * (4.5 * u * u + 1.5 * uprime * uprime)) / denom)
}

type SecondOrder = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

struct InverseRadiusSystem(SecondOrder);

impl OdeSystem<2> for InverseRadiusSystem {
    fn rhs(&self, _phi: f64, y: &[f64; 2], dy: &mut [f64; 2]) {
        dy[0] = y[1];
        dy[1] = (self.0)(y[0], y[1]);
    }
}

/// Orbit `u(φ)` of a second-order equation `u″ = f(u, u′)`.
#[derive(Clone)]
pub struct InverseRadiusTrajectory {
    f: SecondOrder,
    samples: Vec<Sample<2>>,
}

impl std::fmt::Debug for InverseRadiusTrajectory {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("InverseRadiusTrajectory")
            .field("samples", &self.samples.len())
            .finish_non_exhaustive()
    }
}

impl InverseRadiusTrajectory {
    /// `(φ, u, u′)` at each accepted step.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.samples.iter().map(|s| (s.x, s.y[0], s.y[1]))
    }

    pub fn samples(&self) -> &[Sample<2>] {
        &self.samples
    }
}

impl PerihelionSource for InverseRadiusTrajectory {
    fn perihelion_angles(&self) -> Result<Vec<f64>, GeodesicError> {
        let sys = InverseRadiusSystem(self.f.clone());
        minima_angles(&sys, &self.samples, |y| -y[1], |x, _| x, |_| 1e-13)
    }
}

/// Integrates `u″ = f(u, u′)` in `φ` from a perihelion `u = u_peri`,
/// `u′ = 0` until `n_orbits` further perihelia have been passed.
pub fn integrate_inverse_radius(
    f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    u_peri: f64,
    n_orbits: usize,
    rtol: f64,
) -> Result<InverseRadiusTrajectory, GeodesicError> {
    if !(u_peri > 0.0) {
        return Err(GeodesicError::NonPositiveRadius(1.0 / u_peri));
    }
    let f: SecondOrder = Arc::new(f);
    let sys = InverseRadiusSystem(f.clone());
    let solver = Dopri5::new(rtol, [rtol * u_peri, rtol * u_peri]).with_h_max(0.25);
    let mut passages = 0usize;
    let mut prev = 0.0;
    let samples = solver.solve(&sys, 0.0, [u_peri, 0.0], f64::INFINITY, |s| {
        if prev > 0.0 && s.y[1] <= 0.0 {
            passages += 1;
        }
        prev = s.y[1];
        passages < n_orbits
    })?;
    Ok(InverseRadiusTrajectory { f, samples })
}

/// Rosette orbit for elements `(a, ε)` with `L² = r_o a (1 − ε²)`, started
/// at the Newtonian perihelion.
pub fn integrate_rosette(
    r_o: f64,
    a: f64,
    ecc: f64,
    n_orbits: usize,
    rtol: f64,
) -> Result<InverseRadiusTrajectory, GeodesicError> {
    if !(ecc < 1.0) {
        return Err(GeodesicError::UnboundOrbit(ecc));
    }
    if !(a > 0.0) || !(ecc >= 0.0) || !(r_o > 0.0) {
        return Err(GeodesicError::InvalidElements(format!(
            "need r_o > 0, a > 0, 0 <= ecc < 1 (got {r_o}, {a}, {ecc})"
        )));
    }
    let l = (r_o * a * (1.0 - ecc * ecc)).sqrt();
    let u_peri = 1.0 / (a * (1.0 - ecc));
    rosette_rhs(u_peri, 0.0, r_o, l)?;
    let k = r_o / (l * l);
    let denom_floor = 3.0 * r_o;
    integrate_inverse_radius(
        move |u, up| (-u + k + r_o * (4.5 * u * u + 1.5 * up * up)) / (1.0 - denom_floor * u),
        u_peri,
        n_orbits,
        rtol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadOptions};
    use std::f64::consts::PI;

    #[test]
    fn harmonic_without_field() {
        assert_eq!(rosette_rhs(0.3, 0.1, 0.0, 2.0).unwrap(), -0.3);
    }

    #[test]
    fn denominator_guard() {
        assert_eq!(
            rosette_rhs(1.0, 0.0, 1.0 / 3.0, 1.0),
            Err(GeodesicError::DenominatorVanishes(1.0))
        );
    }

    #[test]
    fn rhs_satisfies_the_implicit_equation() {
        let (u, up, r_o, l) = (2e-3, 3e-4, 1.5, 40.0);
        let upp = rosette_rhs(u, up, r_o, l).unwrap();
        let lhs = upp + u - r_o / (l * l);
        assert!((lhs - rosette_correction(u, up, upp, r_o)).abs() < 1e-18);
    }

    fn newtonian(r_o: f64, l: f64, e: f64, phi: f64) -> (f64, f64, f64) {
        let k = r_o / (l * l);
        (k * (1.0 + e * phi.cos()), -k * e * phi.sin(), -k * e * phi.cos())
    }

    #[test]
    fn newtonian_residual_is_first_order_in_field() {
        // residual of the full equation is the correction term, O(r_o u) relative
        let p = 1e8;
        let e = 0.3;
        for r_o in [1e2f64, 5e1] {
            let l = (r_o * p).sqrt();
            let (u, up, upp) = newtonian(r_o, l, e, 0.7);
            let residual = upp + u - r_o / (l * l) - rosette_correction(u, up, upp, r_o);
            let rel = residual.abs() / u;
            assert!(rel < 10.0 * r_o / p, "rel = {rel}");
        }
    }

    #[test]
    fn resonant_coefficient_of_correction() {
        let (r_o, l, e) = (2.0, 300.0, 0.4);
        let coeff = integrate(
            |phi| {
                let (u, up, upp) = newtonian(r_o, l, e, phi);
                rosette_correction(u, up, upp, r_o) * phi.cos() / PI
            },
            0.0,
            2.0 * PI,
            QuadOptions::rel(1e-13),
        )
        .unwrap()
        .value;
        let expected = 6.0 * r_o.powi(3) / l.powi(4) * e;
        assert!((coeff - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn kepler_equation_closes() {
        let k = 1e-3;
        let tr = integrate_inverse_radius(move |u, _| k - u, 1.5e-3, 3, 1e-12).unwrap();
        let angles = tr.perihelion_angles().unwrap();
        assert_eq!(angles.len(), 4);
        for (n, a) in angles.iter().enumerate() {
            assert!((a - 2.0 * PI * n as f64).abs() < 1e-9);
        }
    }
}
