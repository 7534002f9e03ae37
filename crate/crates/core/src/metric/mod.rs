//! Warped-time, flat-space metric built from a gravitational four-potential.
//!
//! A probe carrier sees the potential `G_µ = U_µ/P₀`. The time-label tetrad
//! row is `e^(0)_µ = δ^0_µ + G_µ/(1 − G_0)`, the spatial rows are the
//! Kronecker deltas, and
//!
//! ```text
//! g_00 = 1/(1 − G_0)²        g_0i = g_00 G_i         g_ij = g_00 G_i G_j − δ_ij
//! g^00 = (1 − G_0)² − |G|²   g^0i = G_i              g^ij = −δ_ij
//! ```
//!
//! so the spatial metric `γ_ij = g_0i g_0j / g_00 − g_ij` is the identity for
//! every potential and every gauge.

mod christoffel;
mod potential;
mod proper_time;

pub use christoffel::{
    christoffels_central, christoffels_central_at, christoffels_numeric, central_g00,
    central_g00_derivative, ChristoffelSet, Connection,
};
pub use potential::{
    gauge_shift, CentralPotential, FourPotential, GaugeFn, GaugeShifted, GridPotential,
    PotentialPreset, RotatingCentralPotential, UniformPotential,
};
pub use proper_time::{proper_time_rate, ProperTimeRate, FIXED_POINT_MAX_STEPS, FIXED_POINT_TOL};

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("potential G_0 = {g0} must be below 1")]
    PotentialOutOfRange { g0: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("coordinate speed must lie in [0, 1), got {0}")]
    InvalidSpeed(f64),
    #[error("fixed-point iteration did not converge in {iterations} steps (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },
    #[error("iterate {iterate} makes the physical speed superluminal")]
    SuperluminalIterate { iterate: f64 },
    #[error("unknown potential preset '{0}'")]
    UnknownPreset(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Metric seen by one probe carrier at one event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeMetric {
    /// `tetrad[(α, µ)] = e^(α)_µ`.
    pub tetrad: Matrix4<f64>,
    /// Covariant components `g_µν`.
    pub g: Matrix4<f64>,
    /// Contravariant components `g^µν`.
    pub ginv: Matrix4<f64>,
    /// `γ_ij = g_0i g_0j / g_00 − g_ij`, evaluated from `g`.
    pub spatial: Matrix3<f64>,
}

impl SpacetimeMetric {
    /// Metric for potential components `(G_0, G_i)`.
    pub fn from_potential(g0: f64, gi: &Vec3) -> Result<Self, MetricError> {
        if !(g0 < 1.0) {
            return Err(MetricError::PotentialOutOfRange { g0 });
        }
        let lapse = 1.0 - g0;
        let mut tetrad = Matrix4::identity();
        tetrad[(0, 0)] = 1.0 + g0 / lapse;
        for i in 0..3 {
            tetrad[(0, i + 1)] = gi[i] / lapse;
        }

        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        let g = tetrad.transpose() * eta * tetrad;

        let mut ginv = Matrix4::zeros();
        ginv[(0, 0)] = lapse * lapse - gi.norm_squared();
        for i in 0..3 {
            ginv[(0, i + 1)] = gi[i];
            ginv[(i + 1, 0)] = gi[i];
            ginv[(i + 1, i + 1)] = -1.0;
        }

        let mut spatial = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                spatial[(i, j)] = g[(0, i + 1)] * g[(0, j + 1)] / g[(0, 0)] - g[(i + 1, j + 1)];
            }
        }
        Ok(Self {
            tetrad,
            g,
            ginv,
            spatial,
        })
    }

    pub fn g00(&self) -> f64 {
        self.g[(0, 0)]
    }

    /// `max |γ_ij − δ_ij|`.
    pub fn flatness_residual(&self) -> f64 {
        (self.spatial - Matrix3::identity()).abs().max()
    }

    /// `max |g·g⁻¹ − I|`.
    pub fn inverse_residual(&self) -> f64 {
        (self.g * self.ginv - Matrix4::identity()).abs().max()
    }

    /// `max |η_αβ e^α_µ e^β_ν − g_µν|` with the tetrad product written out
    /// term by term.
    pub fn tetrad_residual(&self) -> f64 {
        let e = &self.tetrad;
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let mut s = e[(0, mu)] * e[(0, nu)];
                for b in 1..4 {
                    s -= e[(b, mu)] * e[(b, nu)];
                }
                worst = worst.max((s - self.g[(mu, nu)]).abs());
            }
        }
        worst
    }

    /// Contracts `g^µν a_µ b_ν`.
    pub fn inverse_contract(&self, a: &[f64; 4], b: &[f64; 4]) -> f64 {
        let mut s = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                s += self.ginv[(mu, nu)] * a[mu] * b[nu];
            }
        }
        s
    }
}

/// Evaluates `pot` at `at` and builds the metric there.
pub fn build_metric<P: FourPotential + ?Sized>(
    pot: &P,
    at: &Vec3,
) -> Result<SpacetimeMetric, MetricError> {
    SpacetimeMetric::from_potential(pot.g0(at), &pot.gi(at))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_is_minkowski() {
        let m = build_metric(&UniformPotential::zero(), &Vec3::new(1.0, 2.0, 3.0)).unwrap();
        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        assert_eq!(m.g, eta);
        assert_eq!(m.ginv, eta);
    }

    #[test]
    fn central_preset_at_energy_radius() {
        let pot = CentralPotential::new(2.0).unwrap();
        let m = build_metric(&pot, &Vec3::new(0.0, 2.0, 0.0)).unwrap();
        assert!((m.g00() - 0.25).abs() < 1e-15);
        assert!(m.flatness_residual() < 1e-15);
    }

    #[test]
    fn central_preset_is_flat_everywhere() {
        let pot = CentralPotential::new(1.0).unwrap();
        for &r in &[1e-3, 0.5, 1.0, 10.0, 1e6] {
            let m = build_metric(&pot, &Vec3::new(r, 0.0, 0.0)).unwrap();
            assert!(m.flatness_residual() < 1e-12);
            assert!(m.inverse_residual() < 1e-12);
        }
    }

    #[test]
    fn potential_at_or_above_one_is_rejected() {
        let pot = UniformPotential::new(1.0, Vec3::zeros());
        assert_eq!(
            build_metric(&pot, &Vec3::zeros()),
            Err(MetricError::PotentialOutOfRange { g0: 1.0 })
        );
        assert!(SpacetimeMetric::from_potential(f64::NAN, &Vec3::zeros()).is_err());
    }

    #[test]
    fn tetrad_row_matches_closed_form() {
        let gi = Vec3::new(0.1, -0.2, 0.3);
        let m = SpacetimeMetric::from_potential(-0.4, &gi).unwrap();
        assert!((m.tetrad[(0, 0)] - 1.0 / 1.4).abs() < 1e-15);
        assert!((m.tetrad[(0, 2)] + 0.2 / 1.4).abs() < 1e-15);
        assert!((m.g[(0, 1)] - m.g00() * 0.1).abs() < 1e-15);
        assert!(m.tetrad_residual() < 1e-15);
    }
}
