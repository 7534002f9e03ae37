//! Bracketed root refinement: bisection to shrink the bracket, then
//! secant steps that fall back to bisection whenever they leave it.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no sign change on [{a}, {b}] (f = {fa}, {fb})")]
    NotBracketed { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("root refinement did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// Finds `x` in `[a, b]` with `f(x) = 0` to an absolute tolerance `xtol`.
pub fn refine_root<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
) -> Result<f64, RootError> {
    let (mut lo, mut hi) = (a, b);
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(RootError::NotBracketed { a, b, fa: flo, fb: fhi });
    }
    for _ in 0..6 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let (mut x0, mut f0) = (lo, flo);
    let (mut x1, mut f1) = (hi, fhi);
    for _ in 0..200 {
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > lo.min(hi) && x2 < lo.max(hi)) || !x2.is_finite() {
            x2 = 0.5 * (lo + hi);
        }
        let f2 = f(x2);
        if f2 == 0.0 {
            return Ok(x2);
        }
        if f2.signum() == flo.signum() {
            lo = x2;
            flo = f2;
        } else {
            hi = x2;
        }
        if (x2 - x1).abs() < xtol || (hi - lo).abs() < xtol {
            return Ok(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    Err(RootError::NoConvergence(200))
}
