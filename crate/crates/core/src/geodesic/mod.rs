//! Massive-particle motion in the static central field
//! `ds² = (1 + r_o/r)⁻² dt² − dl²`.
//!
//! Orbits are parametrised by `p` with `g_00 dt/dp = 1` and
//! `J = r² dφ/dp`, so the radial equation carries the mass-shell constraint
//!
//! ```text
//! (dr/dp)² + J²/r² − (1 + r_o/r)² = −m²/E_m²
//! ```
//!
//! Weak-field precession is taken from the rosette equation in `u = 1/r`,
//! which keeps the displacement correction of the proper-length element.

mod force;
mod orbit;
mod precession;
mod rosette;

pub use force::{geodesic_force, GeodesicForce};
pub use orbit::{
    circular_orbit, constraint_residual, integrate_orbit, integrate_span, orbit_from_elements,
    orbit_from_turning_points, turning_points, OrbitSystem, Trajectory, DEFAULT_TOL,
};
pub use precession::{
    keplerian_period, precession_analytic, precession_exact, precession_numeric,
    precession_quadrature, PerihelionSource, PrecessionMethod, PrecessionResult,
};
pub use rosette::{
    integrate_inverse_radius, integrate_rosette, rosette_correction, rosette_rhs,
    InverseRadiusTrajectory,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{OdeError, QuadError, RootError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("orbit with eccentricity {0} is not bound")]
    UnboundOrbit(f64),
    #[error("invalid orbital elements: {0}")]
    InvalidElements(String),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("no pair of positive turning points")]
    TurningPointNotFound,
    #[error("constraint drift {drift:e} per orbit exceeds tolerance {tol:e}")]
    ToleranceNotMet { drift: f64, tol: f64 },
    #[error("need at least two perihelion passages, found {0}")]
    InsufficientOrbits(usize),
    #[error("rosette denominator 1 − 3 r_o u vanishes at u = {0}")]
    DenominatorVanishes(f64),
    #[error(transparent)]
    Integration(#[from] OdeError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Point on a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub p: f64,
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub drdp: f64,
    pub dphidp: f64,
}

/// First integrals of the motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitIntegrals {
    /// `E_m/m`.
    pub energy_ratio: f64,
    /// Specific angular momentum `L = J·E_m/m`.
    pub l: f64,
    /// `J = r² dφ/dp`.
    pub j_phi: f64,
    /// `1 − m²/E_m²`, kept separately because it is tiny in weak fields and
    /// cannot be recovered from `energy_ratio` without cancellation.
    pub one_minus_mu: f64,
}
