//! Light in the static central field. The coordinate speed is
//! `dl/dt = g_00 = (1 + r_o/r)⁻²`, slowed twice relative to the physical
//! speed `√g_00` measured with observer time.

mod ray;

pub use ray::{fermat_ray_integrate, ray_closed_form, RayState, RayTrajectory};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::central_g00;
use crate::numerics::{integrate, OdeError, QuadError, QuadOptions};
use crate::Vec3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhotonError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("invalid geometry: {0}")]
    GeometryInvalid(String),
    #[error("ray captured: u = {u} exceeds 1/(4 r_o) at φ = {phi}")]
    RayCaptured { u: f64, phi: f64 },
    #[error("ray did not leave the field")]
    NoExit,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Integration(#[from] OdeError),
}

fn check_radius(r: f64) -> Result<(), PhotonError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(PhotonError::NonPositiveRadius(r))
    }
}

/// Coordinate speed of light `dl/dt = g_00` (units of c).
pub fn coordinate_speed(r_o: f64, r: f64) -> Result<f64, PhotonError> {
    check_radius(r)?;
    Ok(central_g00(r_o, r))
}

/// Speed of light in observer time, `√g_00`.
pub fn physical_speed(r_o: f64, r: f64) -> Result<f64, PhotonError> {
    check_radius(r)?;
    Ok(1.0 / (1.0 + r_o / r))
}

/// Radar echo geometry: the signal grazes the central body at distance
/// `r_s` on a straight path between two planets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoGeometry {
    pub r_es: f64,
    pub r_ms: f64,
    pub r_s: f64,
    pub r_o: f64,
}

impl EchoGeometry {
    pub fn new(r_es: f64, r_ms: f64, r_s: f64, r_o: f64) -> Result<Self, PhotonError> {
        let g = Self {
            r_es,
            r_ms,
            r_s,
            r_o,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), PhotonError> {
        for (name, v) in [("r_es", self.r_es), ("r_ms", self.r_ms), ("r_s", self.r_s)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(PhotonError::GeometryInvalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.r_o >= 0.0) {
            return Err(PhotonError::GeometryInvalid(format!("r_o must be non-negative, got {}", self.r_o)));
        }
        if self.r_s > self.r_es.min(self.r_ms) {
            return Err(PhotonError::GeometryInvalid(
                "grazing distance exceeds an endpoint distance".into(),
            ));
        }
        Ok(())
    }
}

/// Round-trip delays in length units (divide by c for seconds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapiroDelay {
    /// `2∫(1/ldot − 1) dl` by quadrature.
    pub quadrature: f64,
    /// `4 r_o ln(4 r_ms r_es / r_s²)`.
    pub closed_form: f64,
    /// Quadrature value times `√g_00` at the Earth end, when requested.
    pub observer: Option<f64>,
}

/// Excess round-trip light time over the Euclidean path.
pub fn shapiro_delay(geom: &EchoGeometry, observer_correction: bool) -> Result<ShapiroDelay, PhotonError> {
    geom.validate()?;
    let (r_o, big_r) = (geom.r_o, geom.r_s);
    // x = R tan θ turns 2r_o/r + r_o²/r² dx into (2 r_o sec θ + r_o²/R) dθ
    let th_e = ((geom.r_es * geom.r_es - big_r * big_r).sqrt() / big_r).atan();
    let th_m = ((geom.r_ms * geom.r_ms - big_r * big_r).sqrt() / big_r).atan();
    let one_way = integrate(
        |th: f64| 2.0 * r_o / th.cos() + r_o * r_o / big_r,
        -th_e,
        th_m,
        QuadOptions::rel(1e-10),
    )?;
    let quadrature = 2.0 * one_way.value;
    let closed_form = 4.0 * r_o * (4.0 * geom.r_ms * geom.r_es / (big_r * big_r)).ln();
    let observer = observer_correction.then(|| quadrature / (1.0 + r_o / geom.r_es));
    Ok(ShapiroDelay {
        quadrature,
        closed_form,
        observer,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deflection {
    /// `−2∫₀^∞ ∂_y(ldot) dx` at `y = R` (rad).
    pub quadrature: f64,
    /// `−4 r_o / R`.
    pub closed_form: f64,
}

/// Coordinate deflection of a ray passing at distance `big_r`.
pub fn deflection_integral(r_o: f64, big_r: f64) -> Result<Deflection, PhotonError> {
    if !(big_r > 0.0 && big_r.is_finite()) || !(r_o >= 0.0) {
        return Err(PhotonError::GeometryInvalid(format!("need R > 0 and r_o >= 0, got {big_r}, {r_o}")));
    }
    // ∂_y g_00 = 2 r_o y r⁻³ (1 + r_o/r)⁻³; with x = R tan θ the integrand
    // becomes (2 r_o/R) cos θ (1 + r_o cos θ/R)⁻³ on [0, π/2]
    let k = r_o / big_r;
    let half = integrate(
        |th: f64| {
            let c = th.cos();
            2.0 * k * c / (1.0 + k * c).powi(3)
        },
        0.0,
        FRAC_PI_2,
        QuadOptions::rel(1e-12),
    )?;
    Ok(Deflection {
        quadrature: -2.0 * half.value,
        closed_form: -4.0 * k,
    })
}

/// Covariant wave vector `K_µ` (ħ = 1) at radius `r` for propagation along
/// the unit vector `direction`: `K_0 = ω₀/√g_00`, `K_i = −n_i K_0/√g_00`.
pub fn wave_vector(r_o: f64, r: f64, direction: &Vec3, omega0: f64) -> Result<[f64; 4], PhotonError> {
    check_radius(r)?;
    let n = direction.normalize();
    let sqrt_g00 = 1.0 / (1.0 + r_o / r);
    let k0 = omega0 / sqrt_g00;
    Ok([k0, -n.x * k0 / sqrt_g00, -n.y * k0 / sqrt_g00, -n.z * k0 / sqrt_g00])
}

/// `g^µν K_µ K_ν` for the central field, where `g^00 = (1 + r_o/r)²`.
pub fn null_norm(r_o: f64, r: f64, k: &[f64; 4]) -> f64 {
    let s = 1.0 + r_o / r;
    s * s * k[0] * k[0] - (k[1] * k[1] + k[2] * k[2] + k[3] * k[3])
}

/// Frequency seen by a static observer at `r`, `K_0 dt/dτ = K_0/√g_00`.
pub fn local_frequency(r_o: f64, r: f64, k0: f64) -> Result<f64, PhotonError> {
    check_radius(r)?;
    Ok(k0 * (1.0 + r_o / r))
}

/// `ω(r1)/ω(r2)` for a photon with conserved `K_0`.
pub fn redshift_ratio(r_o: f64, r1: f64, r2: f64) -> Result<f64, PhotonError> {
    Ok(local_frequency(r_o, r1, 1.0)? / local_frequency(r_o, r2, 1.0)?)
}
