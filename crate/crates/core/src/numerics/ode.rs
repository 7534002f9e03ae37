//! Dormand–Prince 5(4) integrator with per-component error weights.
//!
//! Accepted steps are kept as [`Sample`]s. Any point inside an accepted step
//! can be recovered to integrator accuracy by re-taking a single step of the
//! same scheme from the left sample ([`Dopri5::advance`]), which is what the
//! event and perihelion refinement code relies on.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step limit of {0} exceeded")]
    MaxSteps(usize),
    #[error("step size underflow at x = {x} (h = {h})")]
    StepUnderflow { x: f64, h: f64 },
    #[error("non-finite state encountered at x = {0}")]
    NonFinite(f64),
}

/// First-order system `dy/dx = f(x, y)`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, x: f64, y: &[f64; N], dy: &mut [f64; N]);
}

impl<const N: usize, F> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N], &mut [f64; N]),
{
    fn rhs(&self, x: f64, y: &[f64; N], dy: &mut [f64; N]) {
        self(x, y, dy)
    }
}

/// One accepted integration point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
}

// Butcher tableau (Hairer & Wanner).
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b* (error coefficients)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive Dormand–Prince 5(4) settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Dopri5<const N: usize> {
    pub rtol: f64,
    pub atol: [f64; N],
    /// Initial step magnitude; chosen automatically when `None`.
    pub h_init: Option<f64>,
    /// Largest allowed step magnitude.
    pub h_max: f64,
    pub max_steps: usize,
}

impl<const N: usize> Dopri5<N> {
    pub fn new(rtol: f64, atol: [f64; N]) -> Self {
        Self {
            rtol,
            atol,
            h_init: None,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn with_h_init(mut self, h: f64) -> Self {
        self.h_init = Some(h);
        self
    }

    /// Single step of size `h` (may be negative). Returns the fifth-order
    /// solution and the embedded error vector.
    pub fn step<S: OdeSystem<N> + ?Sized>(
        sys: &S,
        x: f64,
        y: &[f64; N],
        k1: &[f64; N],
        h: f64,
    ) -> ([f64; N], [f64; N], [f64; N]) {
        let mut tmp = [0.0; N];
        let mut k2 = [0.0; N];
        let mut k3 = [0.0; N];
        let mut k4 = [0.0; N];
        let mut k5 = [0.0; N];
        let mut k6 = [0.0; N];
        let mut k7 = [0.0; N];

        for i in 0..N {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.rhs(x + C2 * h, &tmp, &mut k2);
        for i in 0..N {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(x + C3 * h, &tmp, &mut k3);
        for i in 0..N {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(x + C4 * h, &tmp, &mut k4);
        for i in 0..N {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(x + C5 * h, &tmp, &mut k5);
        for i in 0..N {
            tmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.rhs(x + h, &tmp, &mut k6);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] =
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        sys.rhs(x + h, &y_new, &mut k7);
        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        (y_new, k7, err)
    }

    /// State at `sample.x + h` from one step of the scheme. Intended for
    /// `|h|` no larger than the accepted step that started at `sample`.
    pub fn advance<S: OdeSystem<N> + ?Sized>(sys: &S, sample: &Sample<N>, h: f64) -> [f64; N] {
        if h == 0.0 {
            return sample.y;
        }
        Self::step(sys, sample.x, &sample.y, &sample.dy, h).0
    }

    fn error_norm(&self, y: &[f64; N], y_new: &[f64; N], err: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let sc = self.atol[i] + self.rtol * y[i].abs().max(y_new[i].abs());
            let q = err[i] / sc;
            acc += q * q;
        }
        (acc / N as f64).sqrt()
    }

    fn initial_step<S: OdeSystem<N> + ?Sized>(
        &self,
        sys: &S,
        x0: f64,
        y0: &[f64; N],
        f0: &[f64; N],
        dir: f64,
    ) -> f64 {
        let weight = |i: usize| self.atol[i] + self.rtol * y0[i].abs();
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            d0 += (y0[i] / weight(i)).powi(2);
            d1 += (f0[i] / weight(i)).powi(2);
        }
        d0 = (d0 / N as f64).sqrt();
        d1 = (d1 / N as f64).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let h0 = h0.min(self.h_max);
        let mut y1 = [0.0; N];
        for i in 0..N {
            y1[i] = y0[i] + dir * h0 * f0[i];
        }
        let mut f1 = [0.0; N];
        sys.rhs(x0 + dir * h0, &y1, &mut f1);
        let mut d2 = 0.0;
        for i in 0..N {
            d2 += ((f1[i] - f0[i]) / weight(i)).powi(2);
        }
        d2 = (d2 / N as f64).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.h_max)
    }

    /// Integrates from `x0` towards `x_end` (either direction). After each
    /// accepted step `keep_going` sees the new sample; returning `false`
    /// stops the integration with that sample included.
    pub fn solve<S, F>(
        &self,
        sys: &S,
        x0: f64,
        y0: [f64; N],
        x_end: f64,
        mut keep_going: F,
    ) -> Result<Vec<Sample<N>>, OdeError>
    where
        S: OdeSystem<N> + ?Sized,
        F: FnMut(&Sample<N>) -> bool,
    {
        let mut dy0 = [0.0; N];
        sys.rhs(x0, &y0, &mut dy0);
        let mut samples = vec![Sample { x: x0, y: y0, dy: dy0 }];
        if x_end == x0 {
            return Ok(samples);
        }
        let dir = (x_end - x0).signum();
        let mut h = self
            .h_init
            .unwrap_or_else(|| self.initial_step(sys, x0, &y0, &dy0, dir))
            .abs()
            .min(self.h_max);
        let mut x = x0;
        let mut y = y0;
        let mut k1 = dy0;
        let mut steps = 0usize;
        let mut last_rejected = false;

        loop {
            if steps >= self.max_steps {
                return Err(OdeError::MaxSteps(self.max_steps));
            }
            let remaining = (x_end - x).abs();
            let mut last = false;
            if h >= remaining {
                h = remaining;
                last = true;
            }
            if !last && (h == 0.0 || h < 4.0 * f64::EPSILON * x.abs()) {
                return Err(OdeError::StepUnderflow { x, h });
            }
            let (y_new, k_new, err) = Self::step(sys, x, &y, &k1, dir * h);
            steps += 1;
            let norm = self.error_norm(&y, &y_new, &err);
            if !norm.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                // treat as a hard rejection; shrink aggressively
                h *= 0.1;
                last_rejected = true;
                if h < 1e-300 {
                    return Err(OdeError::NonFinite(x));
                }
                continue;
            }
            if norm <= 1.0 {
                x = if last { x_end } else { x + dir * h };
                y = y_new;
                k1 = k_new;
                let sample = Sample { x, y, dy: k1 };
                samples.push(sample);
                if last || !keep_going(&sample) {
                    return Ok(samples);
                }
                let mut fac = if norm == 0.0 {
                    5.0
                } else {
                    (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                };
                if last_rejected {
                    fac = fac.min(1.0);
                }
                h = (h * fac).min(self.h_max);
                last_rejected = false;
            } else {
                h *= (0.9 * norm.powf(-0.2)).max(0.2);
                last_rejected = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let sys = |_x: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let solver = Dopri5::new(1e-12, [1e-14; 2]);
        let tau = 2.0 * std::f64::consts::PI;
        let s = solver.solve(&sys, 0.0, [1.0, 0.0], 10.0 * tau, |_| true).unwrap();
        let last = s.last().unwrap();
        assert_eq!(last.x, 10.0 * tau);
        assert!((last.y[0] - 1.0).abs() < 1e-9);
        assert!(last.y[1].abs() < 1e-9);
    }

    #[test]
    fn backward_integration_returns() {
        let sys = |x: f64, y: &[f64; 1], dy: &mut [f64; 1]| dy[0] = x.cos() * y[0];
        let solver = Dopri5::new(1e-12, [1e-14]);
        let fwd = solver.solve(&sys, 0.0, [1.0], 3.0, |_| true).unwrap();
        let end = fwd.last().unwrap();
        assert!((end.y[0] - 3.0f64.sin().exp()).abs() < 1e-10);
        let back = solver.solve(&sys, 3.0, end.y, 0.0, |_| true).unwrap();
        assert!((back.last().unwrap().y[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn advance_inside_step_matches_solution() {
        let sys = |_x: f64, y: &[f64; 1], dy: &mut [f64; 1]| dy[0] = -y[0];
        let solver = Dopri5::new(1e-10, [1e-12]);
        let s = solver.solve(&sys, 0.0, [1.0], 5.0, |_| true).unwrap();
        let k = s.len() / 2;
        let h = 0.5 * (s[k + 1].x - s[k].x);
        let y = Dopri5::<1>::advance(&sys, &s[k], h);
        assert!((y[0] - (-(s[k].x + h)).exp()).abs() < 1e-10);
    }

    #[test]
    fn observer_can_stop() {
        let sys = |_x: f64, _y: &[f64; 1], dy: &mut [f64; 1]| dy[0] = 1.0;
        let solver = Dopri5::new(1e-8, [1e-10]).with_h_max(0.1);
        let s = solver.solve(&sys, 0.0, [0.0], 10.0, |smp| smp.y[0] < 1.0).unwrap();
        let x = s.last().unwrap().x;
        assert!(x >= 1.0 && x < 1.2);
    }
}
