use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::Matrix3;

use super::{MetricError, Vec3};

/// Relative finite-difference step used when a potential has no analytic
/// derivatives.
pub const DEFAULT_FD_SCALE: f64 = 1e-6;

fn fd_step(at: &Vec3) -> f64 {
    DEFAULT_FD_SCALE * at.norm().max(1e-300)
}

/// Static gravitational four-potential `G_µ = U_µ/P₀` (dimensionless).
pub trait FourPotential: Send + Sync {
    /// `G_0` at a spatial point.
    fn g0(&self, at: &Vec3) -> f64;

    /// Spatial components `G_i`.
    fn gi(&self, at: &Vec3) -> Vec3;

    /// `∂_i G_0`. Central differences unless overridden.
    fn grad_g0(&self, at: &Vec3) -> Vec3 {
        let h = fd_step(at);
        let mut out = Vec3::zeros();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            out[i] = (self.g0(&(at + e)) - self.g0(&(at - e))) / (2.0 * h);
        }
        out
    }

    /// `d[(i, j)] = ∂_i G_j`. Central differences unless overridden.
    fn grad_gi(&self, at: &Vec3) -> Matrix3<f64> {
        let h = fd_step(at);
        let mut out = Matrix3::zeros();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            let d = (self.gi(&(at + e)) - self.gi(&(at - e))) / (2.0 * h);
            for j in 0..3 {
                out[(i, j)] = d[j];
            }
        }
        out
    }
}

impl<P: FourPotential + ?Sized> FourPotential for &P {
    fn g0(&self, at: &Vec3) -> f64 {
        (**self).g0(at)
    }
    fn gi(&self, at: &Vec3) -> Vec3 {
        (**self).gi(at)
    }
    fn grad_g0(&self, at: &Vec3) -> Vec3 {
        (**self).grad_g0(at)
    }
    fn grad_gi(&self, at: &Vec3) -> Matrix3<f64> {
        (**self).grad_gi(at)
    }
}

/// Constant potential, mostly useful for sampling and tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformPotential {
    pub g0: f64,
    pub gi: Vec3,
}

impl UniformPotential {
    pub fn new(g0: f64, gi: Vec3) -> Self {
        Self { g0, gi }
    }

    pub fn zero() -> Self {
        Self::new(0.0, Vec3::zeros())
    }
}

impl FourPotential for UniformPotential {
    fn g0(&self, _: &Vec3) -> f64 {
        self.g0
    }
    fn gi(&self, _: &Vec3) -> Vec3 {
        self.gi
    }
    fn grad_g0(&self, _: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
    fn grad_gi(&self, _: &Vec3) -> Matrix3<f64> {
        Matrix3::zeros()
    }
}

/// Static central field `G_0 = −r_o/r`, `G_i = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralPotential {
    r_o: f64,
}

impl CentralPotential {
    pub fn new(r_o: f64) -> Result<Self, MetricError> {
        if !(r_o >= 0.0) || !r_o.is_finite() {
            return Err(MetricError::NonPositiveRadius(r_o));
        }
        Ok(Self { r_o })
    }

    pub fn r_o(&self) -> f64 {
        self.r_o
    }
}

impl FourPotential for CentralPotential {
    fn g0(&self, at: &Vec3) -> f64 {
        -self.r_o / at.norm()
    }
    fn gi(&self, _: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
    fn grad_g0(&self, at: &Vec3) -> Vec3 {
        let r = at.norm();
        at * (self.r_o / (r * r * r))
    }
    fn grad_gi(&self, _: &Vec3) -> Matrix3<f64> {
        Matrix3::zeros()
    }
}

/// Slowly rotating central body: `G_0 = −r_o/r` and
/// `G = 2·I·(ω × r)/r³`, with `I` the geometrized moment of inertia
/// `G·I_SI/c²` (m³) and `ω` in rad per metre of light travel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingCentralPotential {
    pub r_o: f64,
    pub inertia: f64,
    pub omega: Vec3,
}

impl RotatingCentralPotential {
    pub fn new(r_o: f64, inertia: f64, omega: Vec3) -> Result<Self, MetricError> {
        if !(r_o >= 0.0) {
            return Err(MetricError::NonPositiveRadius(r_o));
        }
        Ok(Self {
            r_o,
            inertia,
            omega,
        })
    }
}

impl FourPotential for RotatingCentralPotential {
    fn g0(&self, at: &Vec3) -> f64 {
        -self.r_o / at.norm()
    }
    fn gi(&self, at: &Vec3) -> Vec3 {
        let r = at.norm();
        self.omega.cross(at) * (2.0 * self.inertia / (r * r * r))
    }
    fn grad_g0(&self, at: &Vec3) -> Vec3 {
        let r = at.norm();
        at * (self.r_o / (r * r * r))
    }
    fn grad_gi(&self, at: &Vec3) -> Matrix3<f64> {
        let r = at.norm();
        let r3 = r * r * r;
        let wx = self.omega.cross(at);
        let mut out = Matrix3::zeros();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = 1.0;
            let d = self.omega.cross(&e) / r3 - wx * (3.0 * at[i] / (r3 * r * r));
            for j in 0..3 {
                out[(i, j)] = 2.0 * self.inertia * d[j];
            }
        }
        out
    }
}

/// Potential sampled on a regular grid, trilinearly interpolated. Points
/// outside the grid are clamped to its boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPotential {
    origin: Vec3,
    spacing: Vec3,
    dims: [usize; 3],
    /// `(G_0, G_x, G_y, G_z)` in x-fastest order.
    values: Vec<[f64; 4]>,
}

impl GridPotential {
    pub fn new(
        origin: Vec3,
        spacing: Vec3,
        dims: [usize; 3],
        values: Vec<[f64; 4]>,
    ) -> Result<Self, MetricError> {
        if dims.iter().any(|&n| n < 2) {
            return Err(MetricError::InvalidGrid("need at least 2 nodes per axis".into()));
        }
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(MetricError::InvalidGrid("spacing must be positive".into()));
        }
        if values.len() != dims[0] * dims[1] * dims[2] {
            return Err(MetricError::InvalidGrid(format!(
                "expected {} nodes, got {}",
                dims[0] * dims[1] * dims[2],
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v[0] < 1.0)) {
            return Err(MetricError::PotentialOutOfRange { g0: v[0] });
        }
        Ok(Self {
            origin,
            spacing,
            dims,
            values,
        })
    }

    /// Samples another potential on a grid.
    pub fn sample<P: FourPotential + ?Sized>(
        pot: &P,
        origin: Vec3,
        spacing: Vec3,
        dims: [usize; 3],
    ) -> Result<Self, MetricError> {
        let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    let x = origin
                        + Vec3::new(
                            i as f64 * spacing.x,
                            j as f64 * spacing.y,
                            k as f64 * spacing.z,
                        );
                    let gi = pot.gi(&x);
                    values.push([pot.g0(&x), gi.x, gi.y, gi.z]);
                }
            }
        }
        Self::new(origin, spacing, dims, values)
    }

    fn interpolate(&self, at: &Vec3) -> [f64; 4] {
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let s = ((at[a] - self.origin[a]) / self.spacing[a]).clamp(0.0, (self.dims[a] - 1) as f64);
            let i = (s.floor() as usize).min(self.dims[a] - 2);
            base[a] = i;
            frac[a] = s - i as f64;
        }
        let idx = |i: usize, j: usize, k: usize| i + self.dims[0] * (j + self.dims[1] * k);
        let mut out = [0.0; 4];
        for (dk, wk) in [(0, 1.0 - frac[2]), (1, frac[2])] {
            for (dj, wj) in [(0, 1.0 - frac[1]), (1, frac[1])] {
                for (di, wi) in [(0, 1.0 - frac[0]), (1, frac[0])] {
                    let w = wi * wj * wk;
                    let v = &self.values[idx(base[0] + di, base[1] + dj, base[2] + dk)];
                    for c in 0..4 {
                        out[c] += w * v[c];
                    }
                }
            }
        }
        out
    }
}

impl FourPotential for GridPotential {
    fn g0(&self, at: &Vec3) -> f64 {
        self.interpolate(at)[0]
    }
    fn gi(&self, at: &Vec3) -> Vec3 {
        let v = self.interpolate(at);
        Vec3::new(v[1], v[2], v[3])
    }
}

/// Gauge function `φ(t, x)`.
pub type GaugeFn = Arc<dyn Fn(f64, &Vec3) -> f64 + Send + Sync>;

/// `G_µ → G_µ + ∂_µφ`, derivatives by central differences of step `h`
/// (evaluated on the `t = 0` slice).
#[derive(Clone)]
pub struct GaugeShifted<P> {
    inner: P,
    gauge: GaugeFn,
    h: f64,
}

impl<P: fmt::Debug> fmt::Debug for GaugeShifted<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeShifted")
            .field("inner", &self.inner)
            .field("h", &self.h)
            .finish_non_exhaustive()
    }
}

/// Adds the gradient of `phi` to the potential.
pub fn gauge_shift<P: FourPotential>(pot: P, phi: GaugeFn, h: f64) -> GaugeShifted<P> {
    GaugeShifted {
        inner: pot,
        gauge: phi,
        h,
    }
}

impl<P: FourPotential> GaugeShifted<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }

    fn gauge_gradient(&self, at: &Vec3) -> (f64, Vec3) {
        let h = self.h;
        let dt = ((self.gauge)(h, at) - (self.gauge)(-h, at)) / (2.0 * h);
        let mut grad = Vec3::zeros();
        for i in 0..3 {
            let mut e = Vec3::zeros();
            e[i] = h;
            grad[i] = ((self.gauge)(0.0, &(at + e)) - (self.gauge)(0.0, &(at - e))) / (2.0 * h);
        }
        (dt, grad)
    }
}

impl<P: FourPotential> FourPotential for GaugeShifted<P> {
    fn g0(&self, at: &Vec3) -> f64 {
        self.inner.g0(at) + self.gauge_gradient(at).0
    }
    fn gi(&self, at: &Vec3) -> Vec3 {
        self.inner.gi(at) + self.gauge_gradient(at).1
    }
}

/// Named potential families accepted by scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialPreset {
    Central,
    RotatingCentral,
    CustomGrid,
}

impl PotentialPreset {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Central => "central",
            Self::RotatingCentral => "rotating-central",
            Self::CustomGrid => "custom-grid",
        }
    }
}

impl fmt::Display for PotentialPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialPreset {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "central" => Ok(Self::Central),
            "rotating-central" => Ok(Self::RotatingCentral),
            "custom-grid" => Ok(Self::CustomGrid),
            other => Err(MetricError::UnknownPreset(other.to_string())),
        }
    }
}
