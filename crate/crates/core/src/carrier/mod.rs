//! Nonlocal energy-charge carrier: a radial `r⁻⁴` density filling all of
//! space, with no point source.
//!
//! ```text
//! ε(r) = E_M r_o / (4π r² (r + r_o)²)
//! w_r  = −r_o / (r (r + r_o)),   W = −ln((r + r_o)/r) = ln √g_00
//! ```

mod electric;

pub use electric::{
    electric_profile, superposed_density, ElectricCarrier, ElectricProfile, SelfEnergy,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesic::geodesic_force;
use crate::metric::central_g00;
use crate::numerics::{integrate, QuadError, QuadOptions};
use crate::Vec3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CarrierError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("invalid carrier parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Where improper radial integrals switch from quadrature to the exact tail,
/// in units of `r_o`.
pub const TAIL_SPLIT: f64 = 1e3;

fn check_radius(r: f64) -> Result<(), CarrierError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(CarrierError::NonPositiveRadius(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialCarrier {
    pub r_o: f64,
    /// Coupling `G` in the unit system of `E_M = r_o/G` (1 in geometric units).
    pub coupling: f64,
    pub center: Vec3,
}

impl RadialCarrier {
    pub fn new(r_o: f64, coupling: f64) -> Result<Self, CarrierError> {
        if !(r_o > 0.0 && r_o.is_finite()) {
            return Err(CarrierError::InvalidParameter(format!("r_o must be positive, got {r_o}")));
        }
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(CarrierError::InvalidParameter(format!("coupling must be positive, got {coupling}")));
        }
        Ok(Self {
            r_o,
            coupling,
            center: Vec3::zeros(),
        })
    }

    pub fn geometric(r_o: f64) -> Result<Self, CarrierError> {
        Self::new(r_o, 1.0)
    }

    /// `E_M = r_o/G`.
    pub fn energy(&self) -> f64 {
        self.r_o / self.coupling
    }
}

/// `ε(r) = E_M r_o / (4π r² (r + r_o)²)`.
pub fn energy_density(c: &RadialCarrier, r: f64) -> Result<f64, CarrierError> {
    check_radius(r)?;
    let s = r + c.r_o;
    Ok(c.energy() * c.r_o / (4.0 * PI * r * r * s * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldIntensity {
    /// Radial component of `w` (1/length, negative = inward).
    pub w_r: f64,
    /// `W = −ln((r + r_o)/r)`.
    pub potential: f64,
}

pub fn field_intensity(c: &RadialCarrier, r: f64) -> Result<FieldIntensity, CarrierError> {
    check_radius(r)?;
    Ok(FieldIntensity {
        w_r: -c.r_o / (r * (r + c.r_o)),
        potential: -(c.r_o / r).ln_1p(),
    })
}

/// `∇·w = −r_o² / (r² (r + r_o)²)`.
pub fn divergence_w(c: &RadialCarrier, r: f64) -> Result<f64, CarrierError> {
    check_radius(r)?;
    let s = r + c.r_o;
    Ok(-c.r_o * c.r_o / (r * r * s * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityIdentities {
    pub epsilon: f64,
    /// `−∇·w / 4πG`.
    pub active: f64,
    /// `w² / 4πG`.
    pub passive: f64,
    /// `|ε_a − ε|`.
    pub active_residual: f64,
    /// `|ε_p − ε|`.
    pub passive_residual: f64,
    /// `|ε_a − ε_p|`.
    pub equality_residual: f64,
    /// Central-difference divergence `r⁻² ∂_r(r² w_r)` with step `h`.
    pub divergence_fd: f64,
    pub divergence_analytic: f64,
    /// `R/8πG` from second differences of `√g_00`, to compare with `2ε`.
    pub ricci_over_8pi_g: f64,
}

/// Active/passive density identities and their finite-difference checks.
pub fn density_identities(c: &RadialCarrier, r: f64, h: f64) -> Result<DensityIdentities, CarrierError> {
    check_radius(r)?;
    if !(h > 0.0 && h < r) {
        return Err(CarrierError::InvalidParameter(format!("step must satisfy 0 < h < r, got {h}")));
    }
    let eps = energy_density(c, r)?;
    let w = field_intensity(c, r)?.w_r;
    let div = divergence_w(c, r)?;
    let four_pi_g = 4.0 * PI * c.coupling;
    let active = -div / four_pi_g;
    let passive = w * w / four_pi_g;

    let flux = |x: f64| x * x * (-c.r_o / (x * (x + c.r_o)));
    let divergence_fd = (flux(r + h) - flux(r - h)) / (2.0 * h * r * r);

    // static metric with lapse N = √g_00: R = 2∇²N/N
    let lapse = |x: f64| central_g00(c.r_o, x).sqrt();
    let (nm, n0, np) = (lapse(r - h), lapse(r), lapse(r + h));
    let laplacian = (np - 2.0 * n0 + nm) / (h * h) + (np - nm) / (h * r);
    let ricci = 2.0 * laplacian / n0;

    Ok(DensityIdentities {
        epsilon: eps,
        active,
        passive,
        active_residual: (active - eps).abs(),
        passive_residual: (passive - eps).abs(),
        equality_residual: (active - passive).abs(),
        divergence_fd,
        divergence_analytic: div,
        ricci_over_8pi_g: ricci / (2.0 * four_pi_g),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnclosedEnergy {
    /// `E_M R/(R + r_o)`.
    pub analytic: f64,
    /// Quadrature up to `min(R, split)` plus the exact tail beyond.
    pub quadrature: f64,
}

impl EnclosedEnergy {
    pub fn fraction(&self, c: &RadialCarrier) -> f64 {
        self.analytic / c.energy()
    }
}

/// Energy inside radius `big_r` (may be infinite).
pub fn enclosed_energy(c: &RadialCarrier, big_r: f64) -> Result<EnclosedEnergy, CarrierError> {
    enclosed_energy_split(c, big_r, TAIL_SPLIT * c.r_o)
}

/// As [`enclosed_energy`] with an explicit quadrature/tail split radius.
pub fn enclosed_energy_split(c: &RadialCarrier, big_r: f64, split: f64) -> Result<EnclosedEnergy, CarrierError> {
    if !(big_r >= 0.0) {
        return Err(CarrierError::NonPositiveRadius(big_r));
    }
    let e_m = c.energy();
    let r_o = c.r_o;
    let analytic = if big_r.is_infinite() {
        e_m
    } else {
        e_m * big_r / (big_r + r_o)
    };
    // 4πr²ε = E_M r_o/(r + r_o)², integrated in units of r_o
    let upper = big_r.min(split) / r_o;
    let body = integrate(
        |x: f64| 1.0 / ((1.0 + x) * (1.0 + x)),
        0.0,
        upper,
        QuadOptions::rel(1e-12),
    )?
    .value;
    let tail = if big_r > split {
        let outer = if big_r.is_infinite() { 0.0 } else { r_o / (big_r + r_o) };
        r_o / (split + r_o) - outer
    } else {
        0.0
    };
    Ok(EnclosedEnergy {
        analytic,
        quadrature: e_m * (body + tail),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractionCheck {
    /// `U_0 = −G E_M E_m / r`.
    pub u0: f64,
    /// `|1/√g_00 − (1 − U_0/E_m)|`.
    pub consistency_residual: f64,
}

pub fn attraction_law_check(c: &RadialCarrier, e_m: f64, r: f64) -> Result<AttractionCheck, CarrierError> {
    check_radius(r)?;
    let u0 = -c.coupling * c.energy() * e_m / r;
    let inv_sqrt_g00 = 1.0 / central_g00(c.r_o, r).sqrt();
    Ok(AttractionCheck {
        u0,
        consistency_residual: (inv_sqrt_g00 - (1.0 - u0 / e_m)).abs(),
    })
}

/// `∮ (f/E_m)·dS` over the sphere of radius `r` about the carrier, by
/// two-dimensional quadrature of the geodesic force. Equals `−4π r_o`.
pub fn gauss_flux(c: &RadialCarrier, r: f64) -> Result<f64, CarrierError> {
    check_radius(r)?;
    let opts = QuadOptions {
        abs_tol: 1e-15 * c.r_o,
        ..QuadOptions::rel(1e-12)
    };
    let mut failed = false;
    let outer = integrate(
        |th: f64| {
            let (st, ct) = th.sin_cos();
            let inner = integrate(
                |ph: f64| {
                    let n = Vec3::new(st * ph.cos(), st * ph.sin(), ct);
                    match geodesic_force(c.r_o, 1.0, &(n * r), &Vec3::zeros()) {
                        Ok(f) => f.force.dot(&n) * r * r * st,
                        Err(_) => {
                            failed = true;
                            0.0
                        }
                    }
                },
                0.0,
                2.0 * PI,
                opts,
            );
            match inner {
                Ok(q) => q.value,
                Err(_) => {
                    failed = true;
                    0.0
                }
            }
        },
        0.0,
        PI,
        opts,
    )?;
    if failed {
        return Err(CarrierError::InvalidParameter("flux quadrature failed".into()));
    }
    Ok(outer.value)
}

/// Radial profile row for tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    pub r_over_ro: f64,
    pub epsilon: f64,
    pub w_r: f64,
    pub potential: f64,
    pub enclosed_fraction: f64,
}

pub fn radial_profile(c: &RadialCarrier, radii: &[f64]) -> Result<Vec<ProfileRow>, CarrierError> {
    radii
        .iter()
        .map(|&r| {
            let f = field_intensity(c, r)?;
            Ok(ProfileRow {
                r,
                r_over_ro: r / c.r_o,
                epsilon: energy_density(c, r)?,
                w_r: f.w_r,
                potential: f.potential,
                enclosed_fraction: r / (r + c.r_o),
            })
        })
        .collect()
}
