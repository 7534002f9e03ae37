//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

#![allow(clippy::excessive_precision)]

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("subdivision limit {limit} reached (estimate {value}, error {error})")]
    SubdivisionLimit { limit: usize, value: f64, error: f64 },
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Single 15-point Kronrod panel: (integral, error estimate).
pub fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(QuadError::NonFinite(center));
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() {
            return Err(QuadError::NonFinite(center - dx));
        }
        if !f2.is_finite() {
            return Err(QuadError::NonFinite(center + dx));
        }
        kronrod += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integrates `f` over `[a, b]` (a may exceed b) to
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadResult, QuadError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidInterval(a, b));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = kronrod15(&mut f, a, b)?;
    let mut panels = vec![Panel { a, b, value, error }];
    let mut evaluations = 15;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations,
            });
        }
        if panels.len() >= opts.max_subdivisions {
            return Err(QuadError::SubdivisionLimit {
                limit: opts.max_subdivisions,
                value: total,
                error: err,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid == p.a || mid == p.b {
            // cannot split further; accept
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations,
            });
        }
        let (v1, e1) = kronrod15(&mut f, p.a, mid)?;
        let (v2, e2) = kronrod15(&mut f, mid, p.b)?;
        evaluations += 30;
        panels.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
    }
}

/// Sum of `integrate` over consecutive breakpoints.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult, QuadError> {
    let mut out = QuadResult {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    for w in breakpoints.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts)?;
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_exact_for_high_degree_polynomials() {
        let (v, _) = kronrod15(&mut |x: f64| x.powi(22), 0.0, 1.0).unwrap();
        assert!((v - 1.0 / 23.0).abs() < 1e-15);
        // gauss part is exact to degree 13
        let (_, e) = kronrod15(&mut |x: f64| x.powi(13) + 1.0, -1.0, 1.0).unwrap();
        assert!(e < 1e-15);
    }

    #[test]
    fn adaptive_peaked_integrand() {
        let w = 1e-3;
        let r = integrate(|x| w / (x * x + w * w), -1.0, 1.0, QuadOptions::rel(1e-12)).unwrap();
        let exact = 2.0 * (1.0 / w).atan();
        assert!((r.value - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn log_endpoint_singularity() {
        let r = integrate(|x: f64| -x.ln(), 0.0, 1.0, QuadOptions::rel(1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let r = integrate(|x: f64| x.exp(), 1.0, 0.0, QuadOptions::default()).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-12);
    }
}
