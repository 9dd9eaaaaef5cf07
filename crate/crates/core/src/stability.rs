//! One-step behaviour of the collocation method on `y'' + y = 0`.
//!
//! A single step of length `nu` maps `(y, y')` at the start to `(y, y')` at
//! the end through a 2x2 matrix whose first row is `[C_m(nu), S_m(nu)]`.
//! `C_m` is a rational approximation to `cos nu` and the step is stable
//! while `|C_m(nu)| <= 1`.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ode::{OdeCoefficients, OdeProblem};

/// Largest grade accepted by [`stability_threshold`].
pub const MAX_THRESHOLD_GRADE: usize = 6;

fn sho_problem(m: usize, nu: f64) -> Result<OdeProblem<Complex64>> {
    if m < 1 {
        return Err(Error::InvalidArgument("grade must be at least 1".into()));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step {nu} must be positive and finite"
        )));
    }
    let coef = OdeCoefficients::constant(Complex64::zero(), Complex64::one(), Complex64::zero());
    let path = vec![Complex64::zero(), Complex64::new(nu, 0.0)];
    Ok(OdeProblem::new(
        coef,
        path,
        Complex64::one(),
        Complex64::zero(),
        m,
        1.0,
    ))
}

/// The matrix taking `(y, y')` at 0 to `(y, y')` at `nu` for one step of
/// grade `m`.
pub fn step_matrix(m: usize, nu: f64) -> Result<[[f64; 2]; 2]> {
    let mut p = sho_problem(m, nu)?;
    let mut cols = [[0.0; 2]; 2];
    for (k, (y0, y1)) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
        p.y0 = Complex64::new(y0, 0.0);
        p.y1 = Complex64::new(y1, 0.0);
        let step = p.step_to(&p.initial_series()?, p.path[1])?;
        cols[k] = [step.series.coeffs()[0].re, step.series.coeffs()[1].re];
    }
    Ok([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
}

/// `(C_m(nu), S_m(nu))`: the end values of one step started from `(1, 0)`
/// and from `(0, 1)`.
pub fn sho_amplification(m: usize, nu: f64) -> Result<(f64, f64)> {
    let a = step_matrix(m, nu)?;
    Ok((a[0][0], a[0][1]))
}

/// Largest eigenvalue modulus of [`step_matrix`].
pub fn spectral_radius(m: usize, nu: f64) -> Result<f64> {
    let a = step_matrix(m, nu)?;
    let half_trace = 0.5 * (a[0][0] + a[1][1]);
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = half_trace * half_trace - det;
    Ok(if disc >= 0.0 {
        half_trace.abs() + disc.sqrt()
    } else {
        det.sqrt()
    })
}

/// The first positive zero of `C_m(nu)^2 - 1`, found by scanning `(0, 4 pi)`
/// in steps of `pi / 1000` and bisecting the first sign change to `1e-8`.
pub fn stability_threshold(m: usize) -> Result<f64> {
    if !(1..=MAX_THRESHOLD_GRADE).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "grade {m} is outside 1..={MAX_THRESHOLD_GRADE}"
        )));
    }
    let f = |nu: f64| -> Result<f64> {
        let (c, _) = sho_amplification(m, nu)?;
        Ok(c * c - 1.0)
    };
    let pi = std::f64::consts::PI;
    let dx = pi / 1000.0;
    let mut lo = dx;
    let mut f_lo = f(lo)?;
    for k in 2..4000 {
        let hi = k as f64 * dx;
        let f_hi = f(hi)?;
        if f_lo.signum() != f_hi.signum() || f_hi == 0.0 {
            return bisect(f, lo, hi, f_lo);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::NoRootInBracket {
        lo: dx,
        hi: 4.0 * pi,
    })
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= 1e-8 {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NotConverged { iterations: 200 })
}
