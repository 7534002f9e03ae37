//! Electric charge carried with the same radial shape as the energy.
//!
//! Radial integrals are evaluated in `x = r/r_o` so electron-sized radii
//! never enter a cube or a square.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_radius, CarrierError, TAIL_SPLIT};
use crate::numerics::{integrate, QuadOptions};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectricCarrier {
    /// Total charge (Gaussian units).
    pub e: f64,
    /// Electromagnetic radius, `e²/r_e` is the self-energy.
    pub r_e: f64,
    /// Radius of half enclosed charge.
    pub r_o: f64,
}

impl ElectricCarrier {
    pub fn new(e: f64, r_e: f64, r_o: f64) -> Result<Self, CarrierError> {
        if !e.is_finite() {
            return Err(CarrierError::InvalidParameter(format!("charge must be finite, got {e}")));
        }
        for (name, v) in [("r_e", r_e), ("r_o", r_o)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CarrierError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { e, r_e, r_o })
    }

    /// Constant self-potential `e/r_e` felt by the carrier's own charge.
    pub fn self_potential(&self) -> f64 {
        self.e / self.r_e
    }

    /// Central-difference gradient of the constant self-potential. Exactly
    /// zero, so the carrier exerts no force on itself.
    pub fn self_potential_gradient(&self, at: &Vec3, h: f64) -> Vec3 {
        let phi = |_: &Vec3| self.self_potential();
        let mut g = Vec3::zeros();
        for i in 0..3 {
            let mut step = Vec3::zeros();
            step[i] = h;
            g[i] = (phi(&(at + step)) - phi(&(at - step))) / (2.0 * h);
        }
        g
    }

    /// Charge inside radius `big_r`: `e R/(R + r_o)`.
    pub fn charge_inside(&self, big_r: f64) -> f64 {
        if big_r.is_infinite() {
            self.e
        } else {
            self.e * big_r / (big_r + self.r_o)
        }
    }

    /// Total charge by quadrature of `4πr²ρ` with the exact tail.
    pub fn total_charge(&self) -> Result<f64, CarrierError> {
        let body = integrate(|x: f64| 1.0 / ((1.0 + x) * (1.0 + x)), 0.0, TAIL_SPLIT, QuadOptions::rel(1e-12))?.value;
        Ok(self.e * (body + 1.0 / (1.0 + TAIL_SPLIT)))
    }

    /// Self-energy by three independent routes.
    pub fn self_energy(&self) -> Result<SelfEnergy, CarrierError> {
        let scale = self.e * self.e / self.r_e;
        let opts = QuadOptions::rel(1e-12);
        let shape = |x: f64| 1.0 / ((1.0 + x) * (1.0 + x));

        // ∫ρ (e/r_e) d³x
        let charge = self.total_charge()?;
        let constant_potential = charge * self.self_potential();

        // ∫ρ W_e d³x, in y = r/(r + r_o) where it becomes ∫₀¹ −ln y dy
        let y0 = TAIL_SPLIT / (1.0 + TAIL_SPLIT);
        let body = integrate(|y: f64| -y.ln(), 0.0, y0, opts)?.value;
        let tail = 1.0 - y0 + y0 * y0.ln();
        let potential_overlap = scale * (body + tail);

        // ∫ E·D/4π d³x; E·D r² = (e² r_o/r_e)/(r + r_o)²
        let body = integrate(shape, 0.0, TAIL_SPLIT, opts)?.value;
        let field_energy = scale * (body + 1.0 / (1.0 + TAIL_SPLIT));

        Ok(SelfEnergy {
            expected: scale,
            constant_potential,
            potential_overlap,
            field_energy,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergy {
    /// `e²/r_e`.
    pub expected: f64,
    pub constant_potential: f64,
    pub potential_overlap: f64,
    pub field_energy: f64,
}

impl SelfEnergy {
    pub fn max_relative_error(&self) -> f64 {
        [self.constant_potential, self.potential_overlap, self.field_energy]
            .iter()
            .map(|v| (v / self.expected - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectricProfile {
    pub r: f64,
    /// Charge density `e r_o / (4π r² (r + r_o)²)`.
    pub rho: f64,
    /// `E_r = (r_o/r_e) D_r`.
    pub e_r: f64,
    /// `W_e = (e/r_e) ln((r + r_o)/r)`, with `E = −∇W_e`.
    pub w_e: f64,
    /// `D_r = e / (r (r + r_o))`.
    pub d_r: f64,
    /// `r⁻² ∂_r(r² D_r)` in closed form.
    pub div_d: f64,
}

pub fn electric_profile(c: &ElectricCarrier, r: f64) -> Result<ElectricProfile, CarrierError> {
    check_radius(r)?;
    let x = r / c.r_o;
    let s = 1.0 + x;
    // r² (r + r_o)² = r_o⁴ x² s², split to stay in range for tiny r_o
    let inv_r2s2 = 1.0 / (c.r_o * c.r_o * x * s) / (c.r_o * c.r_o * x * s);
    let d_r = c.e / (c.r_o * c.r_o * x * s);
    Ok(ElectricProfile {
        r,
        rho: c.e * c.r_o * inv_r2s2 / (4.0 * PI),
        e_r: c.r_o / c.r_e * d_r,
        w_e: c.self_potential() * (1.0 / x).ln_1p(),
        d_r,
        div_d: c.e * c.r_o * inv_r2s2,
    })
}

/// Charge density of several carriers sharing one `r_o`, each given as
/// `(charge, centre)`.
pub fn superposed_density(carriers: &[(f64, Vec3)], r_o: f64, at: &Vec3) -> Result<f64, CarrierError> {
    let mut total = 0.0;
    for (e, centre) in carriers {
        let c = ElectricCarrier::new(*e, r_o, r_o)?;
        total += electric_profile(&c, (at - centre).norm())?.rho;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn electron() -> ElectricCarrier {
        ElectricCarrier::new(-1.0, 7e-58, 7e-58).unwrap()
    }

    #[test]
    fn gauss_law_closed_form() {
        let c = electron();
        for x in [1e-3, 1.0, 1e4] {
            let p = electric_profile(&c, x * c.r_o).unwrap();
            assert!((p.div_d - 4.0 * PI * p.rho).abs() <= 1e-12 * p.div_d.abs());
        }
    }

    #[test]
    fn half_charge_at_r_o() {
        let c = electron();
        assert_eq!(c.charge_inside(c.r_o), -0.5);
        assert!((c.total_charge().unwrap() - c.e).abs() < 1e-10);
    }

    #[test]
    fn self_energy_routes_agree() {
        let c = ElectricCarrier::new(2.0, 3.0, 0.5).unwrap();
        let s = c.self_energy().unwrap();
        assert!((s.expected - 4.0 / 3.0).abs() < 1e-15);
        assert!(s.max_relative_error() < 1e-8, "{s:?}");
    }

    #[test]
    fn no_self_force() {
        let c = electron();
        assert_eq!(c.self_potential_gradient(&Vec3::new(1e-58, 0.0, 0.0), 1e-60), Vec3::zeros());
    }

    #[test]
    fn superposition_is_additive() {
        let r_o = 1.0;
        let a = (1.0, Vec3::zeros());
        let b = (-2.0, Vec3::new(3.0, 0.0, 0.0));
        let at = Vec3::new(1.0, 1.0, 0.0);
        let both = superposed_density(&[a, b], r_o, &at).unwrap();
        let sum = superposed_density(&[a], r_o, &at).unwrap() + superposed_density(&[b], r_o, &at).unwrap();
        assert_eq!(both, sum);
    }
}
