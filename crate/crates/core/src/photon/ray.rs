use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::PhotonError;
use crate::numerics::{refine_root, Dopri5, OdeSystem};

/// Photon path variables in the plane of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayState {
    pub u: f64,
    pub uprime: f64,
    pub phi: f64,
    /// Inverse impact parameter.
    pub u0: f64,
}

impl RayState {
    /// Incoming from infinity at `φ = π` with `u′ = −u₀`.
    pub fn incoming(u0: f64) -> Self {
        Self {
            u: 0.0,
            uprime: -u0,
            phi: PI,
            u0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayTrajectory {
    pub points: Vec<RayState>,
    /// Exit angle where `u` returns to zero (rad).
    pub deflection: f64,
    /// Largest `|(1 − 4 r_o u)(u′² + u²) − u₀²| / u₀²` along the path.
    pub max_first_integral_residual: f64,
}

/// `u = u₀ sin φ + 2 r_o u₀² (1 + cos φ)`.
pub fn ray_closed_form(r_o: f64, u0: f64, phi: f64) -> f64 {
    u0 * phi.sin() + 2.0 * r_o * u0 * u0 * (1.0 + phi.cos())
}

struct RaySystem {
    source: f64,
}

impl OdeSystem<2> for RaySystem {
    fn rhs(&self, _phi: f64, y: &[f64; 2], dy: &mut [f64; 2]) {
        dy[0] = y[1];
        dy[1] = self.source - y[0];
    }
}

/// Integrates `u″ + u = 2 r_o u₀²` with decreasing `φ` from `state` until the
/// ray is back at `u = 0`.
pub fn fermat_ray_integrate(state: &RayState, r_o: f64) -> Result<RayTrajectory, PhotonError> {
    let u0 = state.u0;
    if !(u0 > 0.0) || !(r_o >= 0.0) {
        return Err(PhotonError::GeometryInvalid(format!("need u0 > 0 and r_o >= 0, got {u0}, {r_o}")));
    }
    let sys = RaySystem {
        source: 2.0 * r_o * u0 * u0,
    };
    let capture = if r_o > 0.0 { 0.25 / r_o } else { f64::INFINITY };
    let rtol = 1e-13;
    let solver = Dopri5::new(rtol, [rtol * u0, rtol * u0]).with_h_max(0.05);
    let mut captured = None;
    let mut went_in = false;
    let samples = solver.solve(&sys, state.phi, [state.u, state.uprime], state.phi - 2.0 * PI, |s| {
        if s.y[0] > capture {
            captured = Some((s.y[0], s.x));
            return false;
        }
        went_in |= s.y[0] > 0.0;
        !(went_in && s.y[0] <= 0.0)
    })?;
    if let Some((u, phi)) = captured {
        return Err(PhotonError::RayCaptured { u, phi });
    }
    let n = samples.len();
    if n < 2 || samples[n - 1].y[0] > 0.0 {
        return Err(PhotonError::NoExit);
    }
    let left = &samples[n - 2];
    let h = refine_root(
        |h| Dopri5::advance(&sys, left, h)[0],
        0.0,
        samples[n - 1].x - left.x,
        1e-15,
    )
    .map_err(|_| PhotonError::NoExit)?;
    let exit = Dopri5::advance(&sys, left, h);
    let deflection = left.x + h;

    let mut points: Vec<RayState> = samples[..n - 1]
        .iter()
        .map(|s| RayState {
            u: s.y[0],
            uprime: s.y[1],
            phi: s.x,
            u0,
        })
        .collect();
    points.push(RayState {
        u: exit[0],
        uprime: exit[1],
        phi: deflection,
        u0,
    });
    let max_first_integral_residual = points
        .iter()
        .map(|p| ((1.0 - 4.0 * r_o * p.u) * (p.uprime * p.uprime + p.u * p.u) - u0 * u0).abs() / (u0 * u0))
        .fold(0.0, f64::max);
    Ok(RayTrajectory {
        points,
        deflection,
        max_first_integral_residual,
    })
}
