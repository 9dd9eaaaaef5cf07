//! Truncated Taylor polynomials attached to a knot.
//!
//! A [`LocalTaylor`] is the pair `(knot, [c_0, ..., c_m])` describing
//! `c_0 + c_1 (z - knot) + ... + c_m (z - knot)^m`. The grade `m` means
//! "degree at most": trailing zeros are meaningful data and are never
//! trimmed. Binary operations require identical knots and grades and never
//! re-expand silently.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A source of Taylor coefficients for a function at any point.
///
/// `series(at, grade)` must return exactly `grade + 1` finite coefficients
/// `f^(j)(at) / j!`. Closures `Fn(S, usize) -> Result<Vec<S>>` implement it.
pub trait SeriesOracle<S: Scalar>: Send + Sync {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>>;
}

impl<S, F> SeriesOracle<S> for F
where
    S: Scalar,
    F: Fn(S, usize) -> Result<Vec<S>> + Send + Sync,
{
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        self(at, grade)
    }
}

/// Queries an oracle and checks the length and finiteness of its answer.
pub fn local_series<S: Scalar, O: SeriesOracle<S> + ?Sized>(
    oracle: &O,
    at: S,
    grade: usize,
) -> Result<LocalTaylor<S>> {
    let coeffs = oracle.series(at, grade)?;
    if coeffs.len() != grade + 1 {
        return Err(Error::Oracle {
            point: at.to_string(),
            message: format!(
                "requested grade {grade}, received {} coefficients",
                coeffs.len()
            ),
        });
    }
    if let Some(j) = coeffs.iter().position(|c| !c.is_finite()) {
        return Err(Error::Oracle {
            point: at.to_string(),
            message: format!("coefficient {j} is not finite"),
        });
    }
    LocalTaylor::new(at, coeffs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalTaylor<S> {
    knot: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> LocalTaylor<S> {
    pub fn new(knot: S, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a local Taylor polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(Self { knot, coeffs })
    }

    pub fn zero(knot: S, grade: usize) -> Self {
        Self {
            knot,
            coeffs: vec![S::zero(); grade + 1],
        }
    }

    pub fn one(knot: S, grade: usize) -> Self {
        Self::constant(knot, grade, S::one())
    }

    pub fn constant(knot: S, grade: usize, value: S) -> Self {
        let mut t = Self::zero(knot, grade);
        t.coeffs[0] = value;
        t
    }

    /// The series of `z` itself: `[knot, 1, 0, ...]`.
    pub fn identity(knot: S, grade: usize) -> Self {
        let mut t = Self::constant(knot, grade, knot);
        if grade >= 1 {
            t.coeffs[1] = S::one();
        }
        t
    }

    pub fn knot(&self) -> S {
        self.knot
    }

    pub fn grade(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == S::zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.knot != other.knot {
            return Err(Error::Incompatible(format!(
                "knots differ ({} vs {})",
                self.knot, other.knot
            )));
        }
        if self.grade() != other.grade() {
            return Err(Error::Incompatible(format!(
                "grades differ ({} vs {})",
                self.grade(),
                other.grade()
            )));
        }
        Ok(())
    }

    /// `alpha * self + beta * other`, coefficientwise.
    pub fn linear_combination(&self, alpha: S, other: &Self, beta: S) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| alpha * x + beta * y)
            .collect();
        Ok(Self {
            knot: self.knot,
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.linear_combination(S::one(), other, S::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(S::one(), other, -S::one())
    }

    pub fn scale(&self, factor: S) -> Self {
        Self {
            knot: self.knot,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the shared grade.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            knot: self.knot,
            coeffs: cauchy_product(&self.coeffs, &other.coeffs),
        })
    }

    /// Power-series long division truncated at the shared grade.
    ///
    /// Refuses divisors whose constant term is zero; no Laurent data is
    /// produced.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        self.check_compatible(divisor)?;
        let d0 = divisor.coeffs[0];
        if d0 == S::zero() {
            return Err(Error::ZeroDivisor {
                knot: self.knot.to_string(),
            });
        }
        let inv = S::one() / d0;
        let mut q: Vec<S> = Vec::with_capacity(self.coeffs.len());
        for j in 0..self.coeffs.len() {
            let mut acc = self.coeffs[j];
            for l in 1..=j {
                acc -= divisor.coeffs[l] * q[j - l];
            }
            q.push(acc * inv);
        }
        Ok(Self {
            knot: self.knot,
            coeffs: q,
        })
    }

    /// The local series of `f(self(z))` about `self.knot`, to `self.grade()`.
    ///
    /// `outer` supplies the Taylor coefficients of `f` at `c_0 = self(knot)`;
    /// the tail `w = self - c_0` has zero constant term, so the truncated
    /// powers `w^k` vanish below degree `k` and the substitution is exact
    /// through the grade.
    pub fn compose<O: SeriesOracle<S> + ?Sized>(&self, outer: &O) -> Result<Self> {
        let m = self.grade();
        let f = local_series(outer, self.coeffs[0], m)?;
        let mut tail = self.coeffs.clone();
        tail[0] = S::zero();
        // Horner in w: acc = f_m; acc = acc * w + f_k.
        let mut acc = vec![S::zero(); m + 1];
        acc[0] = f.coeffs[m];
        for k in (0..m).rev() {
            acc = cauchy_product(&acc, &tail);
            acc[0] += f.coeffs[k];
        }
        Ok(Self {
            knot: self.knot,
            coeffs: acc,
        })
    }

    /// Formal derivative; the grade drops by one (a grade-0 series maps to
    /// the zero series of grade 0).
    pub fn derivative(&self) -> Self {
        if self.grade() == 0 {
            return Self::zero(self.knot, 0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(j, &c)| c * S::of(j + 1))
            .collect();
        Self {
            knot: self.knot,
            coeffs,
        }
    }

    /// Formal antiderivative with the given constant term; the grade rises
    /// by one.
    pub fn antiderivative(&self, constant: S) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| c / S::of(j + 1)),
        );
        Self {
            knot: self.knot,
            coeffs,
        }
    }

    /// Drops (or zero-pads) coefficients to reach `grade`.
    pub fn with_grade(&self, grade: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(grade + 1, S::zero());
        Self {
            knot: self.knot,
            coeffs,
        }
    }

    /// Value of the polynomial at `z`.
    pub fn eval(&self, z: S) -> S {
        let t = z - self.knot;
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, &c| acc * t + c)
    }

    /// Coefficients in the variable `s` with `z = knot + s * span`, i.e.
    /// `c_j * span^j`.
    pub fn scaled_coeffs(&self, span: S) -> Vec<S> {
        let mut power = S::one();
        self.coeffs
            .iter()
            .map(|&c| {
                let v = c * power;
                power *= span;
                v
            })
            .collect()
    }
}

pub(crate) fn cauchy_product<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    (0..x.len())
        .map(|j| (0..=j).map(|l| x[l] * y[j - l]).sum())
        .collect()
}

/// Taylor coefficients of the solution of `y'' + a y' + b y = g` at the
/// shared knot of the coefficient series, with `y = y0`, `y' = y1` there.
///
/// Uses the recurrence
/// `(j+2)(j+1) c_{j+2} = g_j - sum_{l<=j} [a_l (j-l+1) c_{j-l+1} + b_l c_{j-l}]`,
/// which costs O(grade^2) operations. The coefficient series must have
/// grade at least `grade - 2`.
pub fn ode_series<S: Scalar>(
    a: &LocalTaylor<S>,
    b: &LocalTaylor<S>,
    g: &LocalTaylor<S>,
    y0: S,
    y1: S,
    grade: usize,
) -> Result<LocalTaylor<S>> {
    let knot = a.knot();
    if b.knot() != knot || g.knot() != knot {
        return Err(Error::Incompatible(
            "coefficient series are expanded about different knots".into(),
        ));
    }
    let needed = grade.saturating_sub(2);
    for (name, s) in [("a", a), ("b", b), ("g", g)] {
        if grade >= 2 && s.grade() < needed {
            return Err(Error::InvalidArgument(format!(
                "coefficient series {name} has grade {}, need at least {needed}",
                s.grade()
            )));
        }
    }
    let mut c = Vec::with_capacity(grade + 1);
    c.push(y0);
    if grade >= 1 {
        c.push(y1);
    }
    for j in 0..grade.saturating_sub(1) {
        let mut acc = g.coeffs()[j];
        for l in 0..=j {
            acc -= a.coeffs()[l] * c[j - l + 1] * S::of(j - l + 1) + b.coeffs()[l] * c[j - l];
        }
        c.push(acc / S::of((j + 2) * (j + 1)));
    }
    LocalTaylor::new(knot, c)
}
