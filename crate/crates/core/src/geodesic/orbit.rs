use std::f64::consts::PI;

use super::{GeodesicError, GeodesicState, OrbitIntegrals};
use crate::numerics::{Dopri5, OdeSystem, Sample};

/// Default per-orbit drift tolerance for [`integrate_orbit`].
pub const DEFAULT_TOL: f64 = 1e-10;

/// Right-hand side in `p` for the state `[t, r, φ, dr/dp]`:
///
/// ```text
/// dt/dp = (1 + r_o/r)²,  dφ/dp = J/r²,  d²r/dp² = −(r_o/r²)(1 + r_o/r) + J²/r³
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSystem {
    pub r_o: f64,
    pub j_phi: f64,
}

impl OdeSystem<4> for OrbitSystem {
    fn rhs(&self, _p: f64, y: &[f64; 4], dy: &mut [f64; 4]) {
        let r = y[1];
        let s = 1.0 + self.r_o / r;
        dy[0] = s * s;
        dy[1] = y[3];
        dy[2] = self.j_phi / (r * r);
        dy[3] = -self.r_o / (r * r) * s + self.j_phi * self.j_phi / (r * r * r);
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), GeodesicError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(GeodesicError::InvalidElements(format!("{name} must be positive, got {v}")))
    }
}

fn perihelion_state(r: f64, integrals: &OrbitIntegrals) -> GeodesicState {
    GeodesicState {
        p: 0.0,
        t: 0.0,
        r,
        phi: 0.0,
        drdp: 0.0,
        dphidp: integrals.j_phi / (r * r),
    }
}

/// Perihelion state of the orbit with semi-major axis `a` and eccentricity
/// `ecc`, using the Newtonian closure `L² = r_o a (1 − ε²)` and `E_m/m` from
/// the mass-shell constraint at `r_p = a(1 − ε)`.
pub fn orbit_from_elements(
    r_o: f64,
    a: f64,
    ecc: f64,
) -> Result<(GeodesicState, OrbitIntegrals), GeodesicError> {
    if !(ecc < 1.0) {
        return Err(GeodesicError::UnboundOrbit(ecc));
    }
    if !(ecc >= 0.0) {
        return Err(GeodesicError::InvalidElements(format!("eccentricity {ecc} is negative")));
    }
    check_positive("semi-major axis", a)?;
    if !(r_o >= 0.0) {
        return Err(GeodesicError::InvalidElements(format!("r_o must be non-negative, got {r_o}")));
    }
    let r_p = a * (1.0 - ecc);
    let x_p = r_o / r_p;
    let l2 = r_o * a * (1.0 - ecc * ecc);
    let k = l2 / (r_p * r_p);
    let energy_ratio = (1.0 + k).sqrt() / (1.0 + x_p);
    // 1 − μ = (k − 2x_p − x_p²)/(1 + k), with k = x_p(1 + ε)
    let one_minus_mu = x_p * (ecc - 1.0 - x_p) / (1.0 + k);
    let l = l2.sqrt();
    let integrals = OrbitIntegrals {
        energy_ratio,
        l,
        j_phi: l / energy_ratio,
        one_minus_mu,
    };
    Ok((perihelion_state(r_p, &integrals), integrals))
}

/// Exactly circular orbit of radius `r`: `J² = r_o(r + r_o)` and
/// `E_m/m = 1/√(1 + r_o/r)`.
pub fn circular_orbit(r_o: f64, r: f64) -> Result<(GeodesicState, OrbitIntegrals), GeodesicError> {
    check_positive("radius", r)?;
    if !(r_o >= 0.0) {
        return Err(GeodesicError::InvalidElements(format!("r_o must be non-negative, got {r_o}")));
    }
    let x = r_o / r;
    let j_phi = (r_o * (r + r_o)).sqrt();
    let energy_ratio = 1.0 / (1.0 + x).sqrt();
    let integrals = OrbitIntegrals {
        energy_ratio,
        l: j_phi * energy_ratio,
        j_phi,
        one_minus_mu: -x,
    };
    Ok((perihelion_state(r, &integrals), integrals))
}

/// Orbit with prescribed turning points `r1 ≤ r2`, starting at `r1`.
pub fn orbit_from_turning_points(
    r_o: f64,
    r1: f64,
    r2: f64,
) -> Result<(GeodesicState, OrbitIntegrals), GeodesicError> {
    check_positive("r_o", r_o)?;
    check_positive("inner turning point", r1)?;
    if !(r2 >= r1) {
        return Err(GeodesicError::InvalidElements(format!("need r1 <= r2, got {r1} > {r2}")));
    }
    let mu_minus_one = 2.0 * r_o / (r1 + r2);
    let j2 = r_o * r_o + mu_minus_one * r1 * r2;
    let energy_ratio = 1.0 / (1.0 + mu_minus_one).sqrt();
    let j_phi = j2.sqrt();
    let integrals = OrbitIntegrals {
        energy_ratio,
        l: j_phi * energy_ratio,
        j_phi,
        one_minus_mu: -mu_minus_one,
    };
    Ok((perihelion_state(r1, &integrals), integrals))
}

/// Roots `r_min ≤ r_max` of `(1 − μ) r² + 2 r_o r + r_o² − J² = 0`.
pub fn turning_points(r_o: f64, integrals: &OrbitIntegrals) -> Result<(f64, f64), GeodesicError> {
    let a = integrals.one_minus_mu;
    let c = r_o * r_o - integrals.j_phi * integrals.j_phi;
    if !(a < 0.0) {
        return Err(GeodesicError::TurningPointNotFound);
    }
    let disc = r_o * r_o - a * c;
    if !(disc >= 0.0) {
        return Err(GeodesicError::TurningPointNotFound);
    }
    let q = -(r_o + disc.sqrt());
    let (x1, x2) = (q / a, c / q);
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    if !(lo > 0.0) || !hi.is_finite() {
        return Err(GeodesicError::TurningPointNotFound);
    }
    Ok((lo, hi))
}

/// `(dr/dp)² + J²/r² − (1 + r_o/r)² + m²/E_m²`, relative to the sum of the
/// magnitudes of its terms.
pub fn constraint_residual(r_o: f64, integrals: &OrbitIntegrals, r: f64, drdp: f64) -> f64 {
    let x = r_o / r;
    let kinetic = drdp * drdp + integrals.j_phi * integrals.j_phi / (r * r);
    let potential = 2.0 * x + x * x + integrals.one_minus_mu;
    let scale = kinetic + 2.0 * x + x * x + integrals.one_minus_mu.abs();
    if scale == 0.0 {
        0.0
    } else {
        (kinetic - potential) / scale
    }
}

/// Integrated central-field orbit.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub r_o: f64,
    pub integrals: OrbitIntegrals,
    pub(crate) samples: Vec<Sample<4>>,
}

impl Trajectory {
    pub fn system(&self) -> OrbitSystem {
        OrbitSystem {
            r_o: self.r_o,
            j_phi: self.integrals.j_phi,
        }
    }

    pub fn samples(&self) -> &[Sample<4>] {
        &self.samples
    }

    fn to_state(&self, s: &Sample<4>) -> GeodesicState {
        GeodesicState {
            p: s.x,
            t: s.y[0],
            r: s.y[1],
            phi: s.y[2],
            drdp: s.y[3],
            dphidp: s.dy[2],
        }
    }

    pub fn states(&self) -> Vec<GeodesicState> {
        self.samples.iter().map(|s| self.to_state(s)).collect()
    }

    pub fn last_state(&self) -> GeodesicState {
        self.to_state(self.samples.last().expect("trajectory is never empty"))
    }

    /// State at any `p` inside the integrated span.
    pub fn state_at(&self, p: f64) -> GeodesicState {
        let sys = self.system();
        let forward = self.samples.len() < 2 || self.samples[1].x >= self.samples[0].x;
        let k = self
            .samples
            .partition_point(|s| if forward { s.x <= p } else { s.x >= p })
            .saturating_sub(1);
        let base = &self.samples[k];
        let y = Dopri5::advance(&sys, base, p - base.x);
        let mut dy = [0.0; 4];
        sys.rhs(p, &y, &mut dy);
        self.to_state(&Sample { x: p, y, dy })
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| constraint_residual(self.r_o, &self.integrals, s.y[1], s.y[3]))
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn solver_for(state: &GeodesicState, integrals: &OrbitIntegrals, tol: f64) -> Dopri5<4> {
    let rtol = (tol * 1e-2).clamp(1e-13, 1e-4);
    let speed = (integrals.j_phi / state.r).abs().max(state.drdp.abs()).max(1e-300);
    Dopri5::new(rtol, [rtol * state.r, rtol * state.r, rtol, rtol * speed])
}

fn initial_y(state: &GeodesicState) -> [f64; 4] {
    [state.t, state.r, state.phi, state.drdp]
}

/// Integrates from `state` to affine parameter `p_end` (either direction).
pub fn integrate_span(
    r_o: f64,
    state: &GeodesicState,
    integrals: &OrbitIntegrals,
    p_end: f64,
    tol: f64,
) -> Result<Trajectory, GeodesicError> {
    check_positive("radius", state.r)?;
    let solver = solver_for(state, integrals, tol);
    let sys = OrbitSystem {
        r_o,
        j_phi: integrals.j_phi,
    };
    let samples = solver.solve(&sys, state.p, initial_y(state), p_end, |_| true)?;
    Ok(Trajectory {
        r_o,
        integrals: *integrals,
        samples,
    })
}

/// Integrates through `n_orbits` perihelion passages, stopping just after
/// the last one, and checks that the constraint drift per orbit stays below
/// `tol`.
pub fn integrate_orbit(
    r_o: f64,
    state: &GeodesicState,
    integrals: &OrbitIntegrals,
    n_orbits: usize,
    tol: f64,
) -> Result<Trajectory, GeodesicError> {
    check_positive("radius", state.r)?;
    let (r_min, r_max) = turning_points(r_o, integrals)?;
    let slack = 1e-9 * r_max;
    if state.r < r_min - slack || state.r > r_max + slack {
        return Err(GeodesicError::TurningPointNotFound);
    }
    let solver = solver_for(state, integrals, tol);
    let sys = OrbitSystem {
        r_o,
        j_phi: integrals.j_phi,
    };
    let mut passages = 0usize;
    let mut prev = state.drdp;
    let samples = solver.solve(&sys, state.p, initial_y(state), f64::INFINITY, |s| {
        if prev < 0.0 && s.y[3] >= 0.0 {
            passages += 1;
        }
        prev = s.y[3];
        passages < n_orbits
    })?;
    let traj = Trajectory {
        r_o,
        integrals: *integrals,
        samples,
    };
    let drift = traj.max_residual() / n_orbits.max(1) as f64;
    if drift > tol {
        return Err(GeodesicError::ToleranceNotMet { drift, tol });
    }
    Ok(traj)
}

/// Angle swept between successive perihelia of the exact orbit.
pub(crate) fn exact_apsidal_angle(r_o: f64, integrals: &OrbitIntegrals) -> f64 {
    2.0 * PI / (1.0 - (r_o / integrals.j_phi).powi(2)).sqrt()
}
