//! Built-in series oracles for elementary functions and `1/Gamma`.

use num_traits::{Float, FromPrimitive, One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::taylor::{LocalTaylor, SeriesOracle};

fn inverse_factorials<S: Scalar>(grade: usize) -> Vec<S::Real> {
    let mut out = Vec::with_capacity(grade + 1);
    let mut f = S::Real::one();
    for j in 0..=grade {
        if j > 0 {
            f /= S::Real::of(j);
        }
        out.push(f);
    }
    out
}

pub fn exp<S: Scalar>(at: S, grade: usize) -> Result<Vec<S>> {
    let e = at.exp();
    Ok(inverse_factorials::<S>(grade)
        .into_iter()
        .map(|f| e.scale(f))
        .collect())
}

/// Derivatives of sine cycle through `sin, cos, -sin, -cos`.
pub fn sin<S: Scalar>(at: S, grade: usize) -> Result<Vec<S>> {
    let cycle = [at.sin(), at.cos(), -at.sin(), -at.cos()];
    Ok(inverse_factorials::<S>(grade)
        .into_iter()
        .enumerate()
        .map(|(j, f)| cycle[j % 4].scale(f))
        .collect())
}

pub fn cos<S: Scalar>(at: S, grade: usize) -> Result<Vec<S>> {
    let cycle = [at.cos(), -at.sin(), -at.cos(), at.sin()];
    Ok(inverse_factorials::<S>(grade)
        .into_iter()
        .enumerate()
        .map(|(j, f)| cycle[j % 4].scale(f))
        .collect())
}

pub fn identity<S: Scalar>(at: S, grade: usize) -> Result<Vec<S>> {
    Ok(LocalTaylor::identity(at, grade).into_coeffs())
}

/// A constant function.
#[derive(Clone, Debug)]
pub struct Constant<S>(pub S);

impl<S: Scalar> SeriesOracle<S> for Constant<S> {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        Ok(LocalTaylor::constant(at, grade, self.0).into_coeffs())
    }
}

/// A polynomial given by its coefficients in ascending powers of `z`.
#[derive(Clone, Debug)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty polynomial".into()));
        }
        Ok(Self { coeffs })
    }

    /// Taylor shift: coefficients of `p(at + t)` in powers of `t`.
    fn local(&self, at: S, grade: usize) -> LocalTaylor<S> {
        let z = LocalTaylor::identity(at, grade);
        let mut acc = LocalTaylor::zero(at, grade);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&z).expect("same knot and grade");
            acc = acc
                .add(&LocalTaylor::constant(at, grade, c))
                .expect("same knot and grade");
        }
        acc
    }
}

impl<S: Scalar> SeriesOracle<S> for Polynomial<S> {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        Ok(self.local(at, grade).into_coeffs())
    }
}

/// `1 / p(z)` for a polynomial `p`; fails where `p` vanishes.
#[derive(Clone, Debug)]
pub struct Reciprocal<S>(pub Polynomial<S>);

impl<S: Scalar> SeriesOracle<S> for Reciprocal<S> {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        let p = self.0.local(at, grade);
        Ok(LocalTaylor::one(at, grade).div(&p)?.into_coeffs())
    }
}

/// `1 / Gamma(z)`, an entire function.
///
/// The series of `R(x) = 1/Gamma(1+x)` about 0 follows from
/// `ln Gamma(1+x) = -gamma x + sum_{k>=2} (-1)^k zeta(k) x^k / k`. For other
/// points the functional equation `R(x) = (x+1) R(x+1)` moves the expansion
/// to within 1/2 of the origin, so only products (to the left) or divisions
/// by series with constant term at least 1/2 (to the right) are needed.
#[derive(Clone, Debug)]
pub struct RecipGamma<R> {
    at_zero: Vec<R>,
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EXTRA_TERMS: usize = 40;

impl<R: Real> RecipGamma<R> {
    pub fn new() -> Self {
        Self {
            at_zero: Self::series_at_zero(EXTRA_TERMS),
        }
    }

    fn series_at_zero(len: usize) -> Vec<R> {
        // exponent series G with 1/Gamma(1+x) = exp(G(x))
        let mut g = vec![R::zero(); len];
        if len > 1 {
            g[1] = R::lit(EULER_GAMMA);
        }
        for (k, gk) in g.iter_mut().enumerate().skip(2) {
            let sign = if k % 2 == 0 { -R::one() } else { R::one() };
            *gk = sign * zeta::<R>(k) / R::of(k);
        }
        // F = exp(G): n F_n = sum_{k=1..n} k G_k F_{n-k}
        let mut f = vec![R::zero(); len];
        f[0] = R::one();
        for n in 1..len {
            let mut acc = R::zero();
            for k in 1..=n {
                acc += R::of(k) * g[k] * f[n - k];
            }
            f[n] = acc / R::of(n);
        }
        f
    }

    fn series_near_zero<S: Scalar<Real = R>>(&self, w: S, grade: usize) -> Vec<S> {
        let len = self.at_zero.len().max(grade + EXTRA_TERMS);
        let coeffs = if len > self.at_zero.len() {
            Self::series_at_zero(len)
        } else {
            self.at_zero.clone()
        };
        // re-expansion: c_j(w) = sum_{k>=j} C(k, j) c_k w^(k-j)
        (0..=grade)
            .map(|j| {
                let mut acc = S::zero();
                for k in (j..coeffs.len()).rev() {
                    let binom = binomial::<R>(k, j);
                    acc = acc * w + S::from_real(coeffs[k] * binom);
                }
                acc
            })
            .collect()
    }
}

impl<R: Real> Default for RecipGamma<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> SeriesOracle<S> for RecipGamma<S::Real> {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        // 1/Gamma(at + t) = R(at - 1 + t); shift at - 1 = w + shift
        let x0 = at - S::one();
        let shift = x0.re().round();
        let w = x0 - S::from_real(shift);
        let shift = shift.to_i64().ok_or_else(|| Error::Oracle {
            point: at.to_string(),
            message: "argument too large for 1/Gamma".into(),
        })?;
        let base = LocalTaylor::new(at, self.series_near_zero(w, grade))?;
        let factor = |i: i64| {
            let mut c = LocalTaylor::identity(S::zero(), grade).into_coeffs();
            c[0] = w + S::from_real(S::Real::from_i64(i).expect("small integer"));
            LocalTaylor::new(at, c).expect("non-empty")
        };
        let mut out = base;
        if shift < 0 {
            // R(w + k) = prod_{i=k+1..0} (w + i + t) R(w + t)
            for i in (shift + 1)..=0 {
                out = out.mul(&factor(i))?;
            }
        } else {
            // R(w + k) = R(w + t) / prod_{i=1..k} (w + i + t)
            for i in 1..=shift {
                out = out.div(&factor(i))?;
            }
        }
        Ok(out.into_coeffs())
    }
}

fn binomial<R: Real>(n: usize, k: usize) -> R {
    let k = k.min(n - k);
    (0..k).fold(R::one(), |acc, i| acc * R::of(n - i) / R::of(i + 1))
}

/// Riemann zeta at an integer `s >= 2` by Euler-Maclaurin summation.
pub fn zeta<R: Real>(s: usize) -> R {
    const N: usize = 12;
    // B_2, B_4, ..., B_14
    const BERNOULLI: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let sr = R::of(s);
    let n = R::of(N);
    let mut sum = R::zero();
    for k in (1..N).rev() {
        sum += R::of(k).powi(-(s as i32));
    }
    sum += n.powi(1 - s as i32) / (sr - R::one());
    sum += n.powi(-(s as i32)) / R::lit(2.0);
    // rising product s (s+1) ... (s+2j-2) / (2j)!
    let mut rising = sr;
    let mut fact = R::lit(2.0);
    for (j, &b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        if j > 1 {
            rising = rising * (sr + R::of(2 * j - 3)) * (sr + R::of(2 * j - 2));
            fact = fact * R::of(2 * j - 1) * R::of(2 * j);
        }
        sum += R::lit(b) / fact * rising * n.powi(-(s as i32) - 2 * j as i32 + 1);
    }
    sum
}

/// Value of `1/Gamma(x)` for real `x`, for tests and diagnostics.
pub fn recip_gamma_value(x: f64) -> f64 {
    let oracle = RecipGamma::<f64>::new();
    let c: Vec<num_complex::Complex<f64>> = oracle
        .series(num_complex::Complex::new(x, 0.0), 0)
        .expect("1/Gamma is entire");
    c[0].re
}
