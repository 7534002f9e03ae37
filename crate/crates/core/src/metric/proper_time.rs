use super::MetricError;

/// Stop once successive iterates differ by less than this.
pub const FIXED_POINT_TOL: f64 = 1e-14;
pub const FIXED_POINT_MAX_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProperTimeRate {
    /// `dτ/dt`.
    pub rate: f64,
    pub iterations: usize,
}

/// Solves `X = 1 − (r_o/r)(E_m/m)√(1 − ldot²/X²)` for `X = dτ/dt` by direct
/// iteration from `X₀ = 1`.
///
/// `ldot` is the coordinate speed `dl/dt` in units of c.
pub fn proper_time_rate(
    ldot: f64,
    r_o_over_r: f64,
    energy_ratio: f64,
) -> Result<ProperTimeRate, MetricError> {
    if !(0.0..1.0).contains(&ldot) {
        return Err(MetricError::InvalidSpeed(ldot));
    }
    let mut x = 1.0;
    let mut last_step = f64::INFINITY;
    for n in 1..=FIXED_POINT_MAX_STEPS {
        if !(x > ldot) || !x.is_finite() {
            return Err(MetricError::SuperluminalIterate { iterate: x });
        }
        let beta = ldot / x;
        let next = 1.0 - r_o_over_r * energy_ratio * (1.0 - beta * beta).sqrt();
        last_step = (next - x).abs();
        x = next;
        if last_step < FIXED_POINT_TOL {
            return Ok(ProperTimeRate {
                rate: x,
                iterations: n,
            });
        }
    }
    Err(MetricError::NoConvergence {
        iterations: FIXED_POINT_MAX_STEPS,
        last_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_field_gives_unity() {
        for ldot in [0.0, 0.3, 0.99] {
            let r = proper_time_rate(ldot, 0.0, 1.7).unwrap();
            assert_eq!(r.rate, 1.0);
            assert_eq!(r.iterations, 1);
        }
    }

    #[test]
    fn circular_orbit_closed_form() {
        let x: f64 = 1e-6;
        let e = 1.0 / (1.0 + x).sqrt();
        let ldot = x.sqrt() / (1.0 + x).powf(1.5);
        let r = proper_time_rate(ldot, x, e).unwrap();
        assert!((r.rate - 1.0 / (1.0 + x)).abs() < 1e-12);
    }

    #[test]
    fn motionless_observer() {
        let x = 0.2;
        let sqrt_g00 = 1.0 / (1.0 + x);
        let r = proper_time_rate(0.0, x, sqrt_g00).unwrap();
        assert!((r.rate - sqrt_g00).abs() < 1e-14);
    }

    #[test]
    fn bad_speed_rejected() {
        assert_eq!(proper_time_rate(1.0, 0.1, 1.0), Err(MetricError::InvalidSpeed(1.0)));
        assert!(proper_time_rate(-0.1, 0.1, 1.0).is_err());
        assert!(proper_time_rate(f64::NAN, 0.1, 1.0).is_err());
    }

    #[test]
    fn inconsistent_inputs_can_go_superluminal() {
        // A huge energy ratio drives the iterate below ldot.
        let e = proper_time_rate(0.5, 0.5, 10.0).unwrap_err();
        assert!(matches!(e, MetricError::SuperluminalIterate { .. }));
    }
}
