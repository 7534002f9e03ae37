use serde::{Deserialize, Serialize};

use super::{build_metric, FourPotential, MetricError, Vec3};

/// `g_00 = (1 + r_o/r)⁻²` of the central field.
pub fn central_g00(r_o: f64, r: f64) -> f64 {
    let s = 1.0 + r_o / r;
    1.0 / (s * s)
}

/// `d g_00 / dr = 2 r_o / r² · (1 + r_o/r)⁻³`.
pub fn central_g00_derivative(r_o: f64, r: f64) -> f64 {
    let s = 1.0 + r_o / r;
    2.0 * r_o / (r * r * s * s * s)
}

/// Nonzero connection components of the static central field in the chart
/// `(t, r, θ, φ)`. Angular terms are evaluated at `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChristoffelSet {
    pub r_o: f64,
    pub r: f64,
    pub theta: f64,
    pub r_theta_theta: f64,
    pub r_phi_phi: f64,
    pub r_t_t: f64,
    pub theta_r_theta: f64,
    pub phi_r_phi: f64,
    pub theta_phi_phi: f64,
    pub phi_phi_theta: f64,
    pub t_t_r: f64,
}

impl ChristoffelSet {
    /// `Γ^l_mn` with indices 0 = t, 1 = r, 2 = θ, 3 = φ.
    pub fn component(&self, l: usize, m: usize, n: usize) -> f64 {
        let (m, n) = if m <= n { (m, n) } else { (n, m) };
        match (l, m, n) {
            (0, 0, 1) => self.t_t_r,
            (1, 0, 0) => self.r_t_t,
            (1, 2, 2) => self.r_theta_theta,
            (1, 3, 3) => self.r_phi_phi,
            (2, 1, 2) => self.theta_r_theta,
            (2, 3, 3) => self.theta_phi_phi,
            (3, 1, 3) => self.phi_r_phi,
            (3, 2, 3) => self.phi_phi_theta,
            _ => 0.0,
        }
    }

    pub fn to_array(&self) -> [[[f64; 4]; 4]; 4] {
        let mut out = [[[0.0; 4]; 4]; 4];
        for (l, plane) in out.iter_mut().enumerate() {
            for (m, row) in plane.iter_mut().enumerate() {
                for (n, v) in row.iter_mut().enumerate() {
                    *v = self.component(l, m, n);
                }
            }
        }
        out
    }
}

/// Central-field connection in the orbital plane `θ = π/2`.
pub fn christoffels_central(r_o: f64, r: f64) -> Result<ChristoffelSet, MetricError> {
    christoffels_central_at(r_o, r, std::f64::consts::FRAC_PI_2)
}

pub fn christoffels_central_at(r_o: f64, r: f64, theta: f64) -> Result<ChristoffelSet, MetricError> {
    if !(r > 0.0) {
        return Err(MetricError::NonPositiveRadius(r));
    }
    let s = 1.0 + r_o / r;
    let (sin, cos) = theta.sin_cos();
    Ok(ChristoffelSet {
        r_o,
        r,
        theta,
        r_theta_theta: -r,
        r_phi_phi: -r * sin * sin,
        r_t_t: r_o / (r * r * s * s * s),
        theta_r_theta: 1.0 / r,
        phi_r_phi: 1.0 / r,
        theta_phi_phi: -sin * cos,
        phi_phi_theta: cos / sin,
        t_t_r: r_o / (r * (r + r_o)),
    })
}

/// Full Cartesian connection `Γ^λ_µν` of a static potential, from central
/// differences of the metric with step `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connection {
    pub gamma: [[[f64; 4]; 4]; 4],
}

impl Connection {
    pub fn get(&self, l: usize, m: usize, n: usize) -> f64 {
        self.gamma[l][m][n]
    }
}

pub fn christoffels_numeric<P: FourPotential + ?Sized>(
    pot: &P,
    at: &Vec3,
    h: f64,
) -> Result<Connection, MetricError> {
    let centre = build_metric(pot, at)?;
    // dg[k][µ][ν] = ∂_k g_µν, with ∂_0 = 0 for a static field
    let mut dg = [[[0.0; 4]; 4]; 4];
    for k in 0..3 {
        let mut e = Vec3::zeros();
        e[k] = h;
        let plus = build_metric(pot, &(at + e))?;
        let minus = build_metric(pot, &(at - e))?;
        for mu in 0..4 {
            for nu in 0..4 {
                dg[k + 1][mu][nu] = (plus.g[(mu, nu)] - minus.g[(mu, nu)]) / (2.0 * h);
            }
        }
    }
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for (l, plane) in gamma.iter_mut().enumerate() {
        for mu in 0..4 {
            for nu in 0..4 {
                let mut s = 0.0;
                for sigma in 0..4 {
                    s += centre.ginv[(l, sigma)]
                        * (dg[mu][sigma][nu] + dg[nu][sigma][mu] - dg[sigma][mu][nu]);
                }
                plane[mu][nu] = 0.5 * s;
            }
        }
    }
    Ok(Connection { gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::CentralPotential;

    #[test]
    fn flat_limit_keeps_only_spherical_terms() {
        let c = christoffels_central(0.0, 3.0).unwrap();
        assert_eq!(c.r_t_t, 0.0);
        assert_eq!(c.t_t_r, 0.0);
        assert_eq!(c.r_phi_phi, -3.0);
        assert!((c.theta_r_theta - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn energy_radius_value() {
        let r_o = 2.5;
        let c = christoffels_central(r_o, r_o).unwrap();
        assert!((c.r_t_t - 1.0 / (8.0 * r_o)).abs() < 1e-16);
    }

    #[test]
    fn newtonian_limit() {
        let r_o = 1.0;
        let r = 1e5;
        let c = christoffels_central(r_o, r).unwrap();
        // series: r_o/r² (1 − 3 r_o/r + …)
        let newton = r_o / (r * r);
        assert!(((c.r_t_t - newton) / newton + 3.0 * r_o / r).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_positive_radius() {
        assert_eq!(christoffels_central(1.0, 0.0), Err(MetricError::NonPositiveRadius(0.0)));
        assert!(christoffels_central(1.0, -1.0).is_err());
    }

    #[test]
    fn symmetric_in_lower_indices() {
        let c = christoffels_central_at(0.7, 2.0, 1.1).unwrap();
        let a = c.to_array();
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    assert_eq!(a[l][m][n], a[l][n][m]);
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_g00_derivative() {
        let r_o = 1.3;
        for r in [0.2, 1.0, 7.0] {
            let c = christoffels_central(r_o, r).unwrap();
            let d = central_g00_derivative(r_o, r);
            assert!((c.r_t_t - 0.5 * d).abs() < 1e-14 * c.r_t_t.abs().max(1.0));
            assert!((c.t_t_r - 0.5 * d / central_g00(r_o, r)).abs() < 1e-14);
        }
    }

    #[test]
    fn numeric_connection_matches_central_radial_terms() {
        let r_o = 1.0;
        let pot = CentralPotential::new(r_o).unwrap();
        let r = 4.0;
        let at = Vec3::new(r, 0.0, 0.0);
        let num = christoffels_numeric(&pot, &at, 1e-5).unwrap();
        let c = christoffels_central(r_o, r).unwrap();
        // along x̂ the radial direction is Cartesian index 1
        assert!((num.get(1, 0, 0) - c.r_t_t).abs() < 1e-9);
        assert!((num.get(0, 0, 1) - c.t_t_r).abs() < 1e-9);
        assert!(num.get(2, 2, 2).abs() < 1e-12);
    }
}
