//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use blendstring::scalar::C64;

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn reals(xs: &[f64]) -> Vec<C64> {
    xs.iter().map(|&x| c(x)).collect()
}

/// Least-squares slope of `log err` against `log h`.
pub fn loglog_slope(h: &[f64], err: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|y| y.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// Classical fourth-order Runge-Kutta for `y'' = F(z, y, y')` on a real
/// interval, returning `(y, y')` at the end.
pub fn rk4(
    f: impl Fn(f64, f64, f64) -> f64,
    (z0, z1): (f64, f64),
    (y0, y1): (f64, f64),
    steps: usize,
) -> (f64, f64) {
    let h = (z1 - z0) / steps as f64;
    let (mut y, mut v) = (y0, y1);
    for k in 0..steps {
        let z = z0 + k as f64 * h;
        let (k1y, k1v) = (v, f(z, y, v));
        let (k2y, k2v) = (
            v + 0.5 * h * k1v,
            f(z + 0.5 * h, y + 0.5 * h * k1y, v + 0.5 * h * k1v),
        );
        let (k3y, k3v) = (
            v + 0.5 * h * k2v,
            f(z + 0.5 * h, y + 0.5 * h * k2y, v + 0.5 * h * k2v),
        );
        let (k4y, k4v) = (v + h * k3v, f(z + h, y + h * k3y, v + h * k3v));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    (y, v)
}

/// Determinant of the truncated tridiagonal matrix whose eigenvalues are the
/// characteristic values of the even pi-periodic Mathieu functions, for a
/// real `q2 = q^2`, together with its derivative in `a`.
///
/// With `y = sum_r A_2r cos 2rz` the coefficients satisfy
/// `a A_0 = q A_2`, `(a-4) A_2 = q (2 A_0 + A_4)` and
/// `(a - 4r^2) A_2r = q (A_2r-2 + A_2r+2)`, so the determinant obeys
/// `D_r = (a - 4r^2) D_r-1 - e_r D_r-2` with `e_1 = 2 q^2`, `e_r = q^2`.
pub fn fourier_determinant(a: f64, q2: f64, size: usize) -> (f64, f64) {
    let (mut d_prev, mut d) = (1.0, a);
    let (mut da_prev, mut da) = (0.0, 1.0);
    for r in 1..size {
        let diag = a - 4.0 * (r * r) as f64;
        let e = if r == 1 { 2.0 * q2 } else { q2 };
        let next = diag * d - e * d_prev;
        let dnext = d + diag * da - e * da_prev;
        d_prev = d;
        d = next;
        da_prev = da;
        da = dnext;
    }
    (d, da)
}

/// Lowest even characteristic value `a_0(q)` for real `q`, by bisection of
/// the Fourier determinant on a bracket known to contain only it.
pub fn fourier_a0(q: f64, lo: f64, hi: f64) -> f64 {
    let f = |a: f64| fourier_determinant(a, q * q, 30).0;
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo);
    assert!(
        f_lo.signum() != f(hi).signum(),
        "bracket does not straddle a root"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The double point `(a*, kappa*)` where the two lowest even characteristic
/// values coalesce for `q = i kappa`: `D = dD/da = 0` solved by Newton's
/// method with a finite-difference Jacobian.
pub fn mathieu_double_point() -> (f64, f64) {
    let eqs = |a: f64, k: f64| {
        let (d, da) = fourier_determinant(a, -k * k, 30);
        [d, da]
    };
    let (mut a, mut k) = (2.09, 1.47);
    for _ in 0..50 {
        let f = eqs(a, k);
        let (ha, hk) = (1e-7 * a.abs(), 1e-7 * k.abs());
        let fa1 = eqs(a + ha, k);
        let fa0 = eqs(a - ha, k);
        let fk1 = eqs(a, k + hk);
        let fk0 = eqs(a, k - hk);
        let j = [
            [
                (fa1[0] - fa0[0]) / (2.0 * ha),
                (fk1[0] - fk0[0]) / (2.0 * hk),
            ],
            [
                (fa1[1] - fa0[1]) / (2.0 * ha),
                (fk1[1] - fk0[1]) / (2.0 * hk),
            ],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let da = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dk = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        a -= da;
        k -= dk;
        if da.abs() < 1e-15 * a.abs() && dk.abs() < 1e-15 * k.abs() {
            break;
        }
    }
    (a, k)
}

/// `ce_0(i xi)` normalised by `ce_0(0) = 1`, from the Fourier coefficients
/// of the null vector at a characteristic value `a` of `q = i kappa`.
/// Requires `a` to be (numerically) a characteristic value.
pub fn fourier_ce0_modified(a: f64, kappa: f64, xi: f64) -> C64 {
    // forward recurrence of the coefficients from A_0 = 1 is unstable, so run
    // it backwards from a deep start (Miller's algorithm)
    let q = C64::new(0.0, kappa);
    let size = 40;
    let mut coef = vec![C64::new(0.0, 0.0); size + 2];
    coef[size] = C64::new(1.0, 0.0);
    for r in (1..size).rev() {
        // (a - 4r^2) A_2r = q (A_2r-2 + A_2r+2) solved for A_2r-2
        let lhs = (a - 4.0 * (r * r) as f64) * coef[r] / q - coef[r + 1];
        coef[r - 1] = if r == 1 { lhs / 2.0 } else { lhs };
        let big = coef[r - 1].norm();
        if big > 1e100 {
            for c in coef.iter_mut() {
                *c /= big;
            }
        }
    }
    let total: C64 = coef[..size].iter().sum();
    let value: C64 = coef[..size]
        .iter()
        .enumerate()
        .map(|(r, &c)| c * (2.0 * r as f64 * xi).cosh())
        .sum();
    value / total
}
