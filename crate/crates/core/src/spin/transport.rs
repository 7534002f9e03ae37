use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::connection::{rotating_connections, spin_derivative};
use super::{j_vector, precession_rates, spin_norm, time_component, RotatingFieldSpec, SpinError};
use crate::geodesic::{OrbitSystem, Trajectory};
use crate::metric::{build_metric, FourPotential};
use crate::numerics::{kronrod15, Dopri5, OdeSystem, Sample};
use crate::Vec3;

/// Planar orbit placed in space: `x = r (cos φ e₁ + sin φ e₂)`.
#[derive(Debug, Clone)]
pub struct EmbeddedOrbit {
    pub trajectory: Trajectory,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl EmbeddedOrbit {
    /// `e₂` is orthonormalised against `e₁`.
    pub fn new(trajectory: Trajectory, e1: Vec3, e2: Vec3) -> Result<Self, SpinError> {
        let n1 = e1.norm();
        if !(n1 > 0.0) {
            return Err(SpinError::InvalidPlane);
        }
        let e1 = e1 / n1;
        let e2 = e2 - e1 * e1.dot(&e2);
        let n2 = e2.norm();
        if !(n2 > 1e-12) {
            return Err(SpinError::InvalidPlane);
        }
        Ok(Self {
            trajectory,
            e1,
            e2: e2 / n2,
        })
    }

    /// Position and coordinate velocity `dx/dt` for an orbit state
    /// `[t, r, φ, dr/dp]`.
    pub fn kinematics(&self, y: &[f64; 4]) -> (Vec3, Vec3) {
        let sys = self.trajectory.system();
        let (r, phi, rp) = (y[1], y[2], y[3]);
        let (sin, cos) = phi.sin_cos();
        let radial = self.e1 * cos + self.e2 * sin;
        let tangential = self.e2 * cos - self.e1 * sin;
        let s = 1.0 + sys.r_o / r;
        let tp = s * s;
        let phip = sys.j_phi / (r * r);
        (radial * r, (radial * rp + tangential * (r * phip)) / tp)
    }

    /// Angle swept by the stored trajectory.
    pub fn revolutions(&self) -> f64 {
        let s = self.trajectory.samples();
        (s[s.len() - 1].y[2] - s[0].y[2]).abs() / (2.0 * PI)
    }
}

/// Orbit state plus the spin change `D = S − base` accumulated within one
/// orbit step. Working with `D` lets the error control see the small
/// precession instead of the unit-sized spin.
struct SpinSystem<'a> {
    orbit: &'a EmbeddedOrbit,
    orbit_sys: OrbitSystem,
    spec: &'a RotatingFieldSpec,
    base: Vec3,
}

impl OdeSystem<7> for SpinSystem<'_> {
    fn rhs(&self, p: f64, y: &[f64; 7], dy: &mut [f64; 7]) {
        let oy = [y[0], y[1], y[2], y[3]];
        let mut ody = [0.0; 4];
        self.orbit_sys.rhs(p, &oy, &mut ody);
        dy[..4].copy_from_slice(&ody);
        let (x, v) = self.orbit.kinematics(&oy);
        let s = self.base + Vec3::new(y[4], y[5], y[6]);
        let ds = match rotating_connections(self.spec, &x) {
            Ok(conn) => spin_derivative(&conn, &v, &s) * ody[0],
            Err(_) => Vec3::repeat(f64::NAN),
        };
        dy[4] = ds.x;
        dy[5] = ds.y;
        dy[6] = ds.z;
    }
}

/// Spin state at one orbit sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinSample {
    pub p: f64,
    pub t: f64,
    pub x: Vec3,
    pub v: Vec3,
    /// Covariant spatial components `S_i`.
    pub s: Vec3,
    /// `S_0 = −ẋ·S`.
    pub s0: f64,
    /// `g^µν S_µ S_ν`.
    pub norm: f64,
    /// `J = S − (v·S)(v + 2G)/2`.
    pub j: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinTrajectory {
    pub samples: Vec<SpinSample>,
    /// Largest relative change of the norm, divided by the revolutions.
    pub norm_drift_per_orbit: f64,
}

fn spin_sample(
    orbit: &EmbeddedOrbit,
    spec: &RotatingFieldSpec,
    p: f64,
    y: &[f64; 4],
    s: Vec3,
) -> Result<SpinSample, SpinError> {
    let (x, v) = orbit.kinematics(y);
    let pot = spec.potential();
    let metric = build_metric(&pot, &x)?;
    Ok(SpinSample {
        p,
        t: y[0],
        x,
        v,
        s,
        s0: time_component(&v, &s),
        norm: spin_norm(&metric, &v, &s),
        j: j_vector(&v, &pot.gi(&x), &s),
    })
}

/// Carries the spin `s_init` along the stored orbit. Each orbit step is
/// re-integrated together with the spin, subdividing where the spin needs
/// it, and the bound `S_0 = −ẋ·S` is applied at every sample.
pub fn transport_spin(
    s_init: &Vec3,
    spec: &RotatingFieldSpec,
    orbit: &EmbeddedOrbit,
    tol: f64,
) -> Result<SpinTrajectory, SpinError> {
    let rtol = (tol * 1e-2).clamp(1e-13, 1e-4);
    let samples = orbit.trajectory.samples();
    let mut sys = SpinSystem {
        orbit,
        orbit_sys: orbit.trajectory.system(),
        spec,
        base: *s_init,
    };
    let r_scale = samples[0].y[1];
    let speed = (orbit.trajectory.integrals.j_phi / r_scale).abs().max(samples[0].y[3].abs());
    // the spin wobbles by about v²|S| around its mean direction
    let wobble = s_init.norm() * speed.powi(2).max(spec.r_o / r_scale).max(1e-300);
    let atol = [
        rtol * r_scale,
        rtol * r_scale,
        rtol,
        rtol * speed.max(1e-300),
        rtol * wobble,
        rtol * wobble,
        rtol * wobble,
    ];

    let mut s = *s_init;
    let mut out = Vec::with_capacity(samples.len());
    out.push(spin_sample(orbit, spec, samples[0].x, &samples[0].y, s)?);
    for w in samples.windows(2) {
        let (a, b): (&Sample<4>, &Sample<4>) = (&w[0], &w[1]);
        sys.base = s;
        let y0 = [a.y[0], a.y[1], a.y[2], a.y[3], 0.0, 0.0, 0.0];
        let solver = Dopri5::new(rtol, atol).with_h_init((b.x - a.x).abs());
        let steps = solver.solve(&sys, a.x, y0, b.x, |_| true)?;
        let end = steps.last().expect("solve returns at least the start").y;
        s += Vec3::new(end[4], end[5], end[6]);
        out.push(spin_sample(orbit, spec, b.x, &b.y, s)?);
    }

    let n0 = out[0].norm;
    let worst = out
        .iter()
        .map(|q| ((q.norm - n0) / n0).abs())
        .fold(0.0, f64::max);
    let norm_drift_per_orbit = worst / orbit.revolutions().max(1.0);
    if norm_drift_per_orbit > tol {
        return Err(SpinError::ToleranceNotMet {
            drift: norm_drift_per_orbit,
            tol,
        });
    }
    Ok(SpinTrajectory {
        samples: out,
        norm_drift_per_orbit,
    })
}

/// Net rotation of `J` over the stored orbit, from transporting the three
/// basis spins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationMeasurement {
    /// Rotation vector (rad).
    pub rotation: Vec3,
    /// Largest symmetric (non-rotational) entry of the map minus identity.
    pub symmetric_residual: f64,
}

pub fn measured_rotation(
    spec: &RotatingFieldSpec,
    orbit: &EmbeddedOrbit,
    tol: f64,
) -> Result<RotationMeasurement, SpinError> {
    let mut j0 = Matrix3::zeros();
    let mut j1 = Matrix3::zeros();
    for (c, e) in [Vec3::x(), Vec3::y(), Vec3::z()].iter().enumerate() {
        let tr = transport_spin(e, spec, orbit, tol)?;
        j0.set_column(c, &tr.samples[0].j);
        j1.set_column(c, &tr.samples[tr.samples.len() - 1].j);
    }
    let inv = j0.try_inverse().ok_or(SpinError::InvalidPlane)?;
    let m = j1 * inv - Matrix3::identity();
    let rotation = Vec3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    );
    let sym = (m + m.transpose()) * 0.5;
    Ok(RotationMeasurement {
        rotation,
        symmetric_residual: sym.abs().max(),
    })
}

/// `∫ (Ω_fd + Ω_gf) dt` along the stored orbit.
pub fn predicted_rotation(spec: &RotatingFieldSpec, orbit: &EmbeddedOrbit) -> Result<Vec3, SpinError> {
    let traj = &orbit.trajectory;
    let samples = traj.samples();
    let mut total = Vec3::zeros();
    let mut failure = None;
    for w in samples.windows(2) {
        for c in 0..3 {
            let mut f = |p: f64| {
                let st = traj.state_at(p);
                let y = [st.t, st.r, st.phi, st.drdp];
                let (x, v) = orbit.kinematics(&y);
                let s = 1.0 + traj.r_o / st.r;
                match precession_rates(spec, &x, &v) {
                    Ok(rates) => rates.total()[c] * s * s,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                }
            };
            total[c] += kronrod15(&mut f, w[0].x, w[1].x)?.0;
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}
