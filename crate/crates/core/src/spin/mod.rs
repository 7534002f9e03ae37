//! Point-spin model: transport of a spin covector along a free orbit in a
//! slowly rotating central field, and the precession rates it implies.
//!
//! `dS_i/dt = (−Γ^0_i0 ẋ^j − Γ^0_ik ẋ^k ẋ^j + Γ^j_i0 + Γ^j_ik ẋ^k) S_j`
//! with the bound `S_0 = −ẋ^i S_i`.

mod connection;
mod transport;

pub use connection::{
    linearized_spin_derivative, rotating_connections, spin_derivative, static_connection,
};
pub use transport::{
    measured_rotation, predicted_rotation, transport_spin, EmbeddedOrbit, RotationMeasurement,
    SpinSample, SpinTrajectory,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesic::GeodesicError;
use crate::metric::{MetricError, RotatingCentralPotential, SpacetimeMetric};
use crate::numerics::{OdeError, QuadError};
use crate::Vec3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("spin norm drift {drift:e} per orbit exceeds tolerance {tol:e}")]
    ToleranceNotMet { drift: f64, tol: f64 },
    #[error("orbit plane vectors must be non-parallel and non-zero")]
    InvalidPlane,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Integration(#[from] OdeError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Slowly rotating central body in geometric units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatingFieldSpec {
    /// Energy radius `G E_M` (m).
    pub r_o: f64,
    /// `G I` with `I` the moment of inertia (m³).
    pub inertia: f64,
    /// Angular velocity in rad per metre of light travel.
    pub omega: Vec3,
}

impl RotatingFieldSpec {
    /// Homogeneous sphere of radius `radius`: `G I = (2/5) r_o R²`.
    pub fn homogeneous_sphere(r_o: f64, radius: f64, omega: Vec3) -> Self {
        Self {
            r_o,
            inertia: 0.4 * r_o * radius * radius,
            omega,
        }
    }

    /// `G_0 = −r_o/r`, `G = 2 G I (ω × r)/r³`.
    pub fn potential(&self) -> RotatingCentralPotential {
        RotatingCentralPotential {
            r_o: self.r_o,
            inertia: self.inertia,
            omega: self.omega,
        }
    }
}

/// Precession rates at one orbit point (rad per unit length of `t`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecessionRates {
    /// `Ω_fd = (G I/r³)(3 r̂ (ω·r̂) − ω)`.
    pub frame_dragging: Vec3,
    /// `Ω_gf = −(v/2 − G) × ∇G_0` of the point-spin model.
    pub geodetic_frame: Vec3,
    /// de Sitter's `3 r_o (r × v)/(2 r³)`, for comparison only.
    pub de_sitter: Vec3,
}

impl PrecessionRates {
    pub fn total(&self) -> Vec3 {
        self.frame_dragging + self.geodetic_frame
    }
}

pub fn frame_dragging_rate(spec: &RotatingFieldSpec, at: &Vec3) -> Vec3 {
    let r = at.norm();
    let n = at / r;
    (n * (3.0 * spec.omega.dot(&n)) - spec.omega) * (spec.inertia / (r * r * r))
}

pub fn precession_rates(spec: &RotatingFieldSpec, at: &Vec3, v: &Vec3) -> Result<PrecessionRates, SpinError> {
    let r = at.norm();
    if !(r > 0.0) {
        return Err(SpinError::NonPositiveRadius(r));
    }
    let r3 = r * r * r;
    let grad_g0 = at * (spec.r_o / r3);
    let g = spec.omega.cross(at) * (2.0 * spec.inertia / r3);
    Ok(PrecessionRates {
        frame_dragging: frame_dragging_rate(spec, at),
        geodetic_frame: -(v * 0.5 - g).cross(&grad_g0),
        de_sitter: at.cross(v) * (1.5 * spec.r_o / r3),
    })
}

/// `S_0 = −ẋ·S`.
pub fn time_component(v: &Vec3, s: &Vec3) -> f64 {
    -v.dot(s)
}

/// `g^µν S_µ S_ν` with the bound `S_0 = −ẋ·S`.
pub fn spin_norm(metric: &SpacetimeMetric, v: &Vec3, s: &Vec3) -> f64 {
    let s0 = time_component(v, s);
    metric.inverse_contract(&[s0, s.x, s.y, s.z], &[s0, s.x, s.y, s.z])
}

/// Constant-magnitude vector `J = S − (v·S)(v + 2G)/2`.
pub fn j_vector(v: &Vec3, g: &Vec3, s: &Vec3) -> Vec3 {
    s - (v + g * 2.0) * (0.5 * v.dot(s))
}
