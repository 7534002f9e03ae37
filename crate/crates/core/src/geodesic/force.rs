use serde::{Deserialize, Serialize};

use super::GeodesicError;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicForce {
    /// `f = E_m ∇(1/√g_00)`.
    pub force: Vec3,
    /// `dv/dt = [f − v(v·f)]/E_m`.
    pub acceleration: Vec3,
}

/// Three-force on an energy-charge `e_m` at position `at` moving with `v`.
pub fn geodesic_force(r_o: f64, e_m: f64, at: &Vec3, v: &Vec3) -> Result<GeodesicForce, GeodesicError> {
    let r = at.norm();
    if !(r > 0.0) {
        return Err(GeodesicError::NonPositiveRadius(r));
    }
    // field per unit energy-charge; E_m never enters the acceleration
    let g = at * (-r_o / (r * r * r));
    Ok(GeodesicForce {
        force: g * e_m,
        acceleration: g - v * v.dot(&g),
    })
}
