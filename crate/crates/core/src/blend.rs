//! A single two-point Hermite interpolant.
//!
//! With `p_j` the Taylor coefficients at `s = 0` and `q_j` those at `s = 1`
//! (both in the unit variable `s`), the blend is
//!
//! ```text
//! H(s) = (1-s)^(n+1) sum_{j<=m} p_j       sum_{k<=m-j} C(n+k, k) s^(k+j)
//!      +   s^(m+1)   sum_{j<=n} (-1)^j q_j sum_{k<=n-j} C(m+k, k) (1-s)^(k+j)
//! ```
//!
//! Both halves have the shape `sum_k C(other+k, k) t^k P_{deg-k}(t)`, with
//! `P_r` the r-th partial Taylor sum, and are evaluated by a nested Horner
//! loop whose binomials enter only as the running ratios `(other+k)/k`.
//! Evaluation is therefore O(m+n) and no standalone binomial is ever formed.
//!
//! The map `z = a + s (b - a)` between the unit variable and a path segment
//! lives in [`crate::blendstring`]; everything here is in `s`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::{HornerArith, Jet};
use crate::scalar::{Real, Scalar};
use crate::taylor::LocalTaylor;

#[derive(Clone, Debug, PartialEq)]
pub struct Blend<S> {
    p: Vec<S>,
    q: Vec<S>,
}

impl<S: Scalar> Blend<S> {
    /// A blend from Taylor coefficients already expressed in `s`.
    pub fn new(p: Vec<S>, q: Vec<S>) -> Result<Self> {
        if p.is_empty() || q.is_empty() {
            return Err(Error::InvalidArgument(
                "both ends of a blend need at least one coefficient".into(),
            ));
        }
        Ok(Self { p, q })
    }

    /// The blend over the segment `[left.knot, right.knot]`; coefficients are
    /// rescaled by powers of the segment vector.
    pub fn on_segment(left: &LocalTaylor<S>, right: &LocalTaylor<S>) -> Result<Self> {
        let span = right.knot() - left.knot();
        if span == S::zero() {
            return Err(Error::InvalidArgument(format!(
                "blend endpoints coincide at {}",
                left.knot()
            )));
        }
        Self::new(left.scaled_coeffs(span), right.scaled_coeffs(span))
    }

    pub fn left(&self) -> &[S] {
        &self.p
    }

    pub fn right(&self) -> &[S] {
        &self.q
    }

    /// `(m, n)`: the grades at the left and right ends.
    pub fn grades(&self) -> (usize, usize) {
        (self.p.len() - 1, self.q.len() - 1)
    }

    fn horner<T: HornerArith<S>>(&self, s: T) -> Result<T> {
        let (m, n) = self.grades();
        let mut t = s.lift(S::one());
        t.plus(&s.times_scalar(-S::one()));

        let signed_q: Vec<S> = self
            .q
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
            .collect();

        let mut left = half_sum(&self.p, n, &s);
        left = left.times(&power(&t, n + 1));
        let mut right = half_sum(&signed_q, m, &t);
        right = right.times(&power(&s, m + 1));
        left.plus(&right);

        // Non-finite values cannot become finite again under + and *, so
        // checking the result covers every intermediate.
        if !left.all_finite() {
            return Err(Error::Overflow { m, n });
        }
        Ok(left)
    }

    pub fn eval(&self, s: S) -> Result<S> {
        self.horner(s)
    }

    /// `[H(s), H'(s), ..., H^(nder)(s)]`, derivatives with respect to `s`.
    ///
    /// For a blend on the segment `[a, b]` the k-th derivative with respect
    /// to `z` is the k-th entry divided by `(b - a)^k`.
    pub fn eval_derivs(&self, s: S, nder: usize) -> Result<Vec<S>> {
        Ok(self.horner(Jet::variable(s, nder + 1))?.derivatives())
    }

    /// Taylor coefficients of the blend in `s` about the point `s`.
    pub fn taylor_at(&self, s: S, grade: usize) -> Result<Vec<S>> {
        Ok(self.horner(Jet::variable(s, grade + 1))?.c)
    }

    /// Exact integral of the blend over `0 <= s <= 1`.
    ///
    /// The weights `(m+1)! (m+n+1-j)! / ((m+n+2)! (j+1) (m-j)!)` are built as
    /// running products starting from `(m+1)/(m+n+2)` with ratio
    /// `(m-j)/(m+n+1-j)`. For a segment `[a, b]` multiply by `b - a`.
    pub fn integral(&self) -> S {
        let (m, n) = self.grades();
        let signed_q: Vec<S> = self
            .q
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
            .collect();
        integral_half(&self.p, n) + integral_half(&signed_q, m)
    }
}

/// `sum_{k=0}^{deg} C(other+k, k) t^k P_{deg-k}(t)` by nested Horner.
fn half_sum<S: Scalar, T: HornerArith<S>>(coeffs: &[S], other: usize, t: &T) -> T {
    let deg = coeffs.len() - 1;
    let mut power = t.lift(S::one());
    let mut partial = t.lift(coeffs[0]);
    let mut acc = partial.clone();
    for k in (1..=deg).rev() {
        let r = deg - k + 1;
        power = power.times(t);
        partial.plus(&power.times_scalar(coeffs[r]));
        let ratio = S::Real::of(other + k) / S::Real::of(k);
        acc = acc.times(t).times_scalar(S::from_real(ratio));
        acc.plus(&partial);
    }
    acc
}

fn power<S: Scalar, T: HornerArith<S>>(x: &T, e: usize) -> T {
    let mut out = x.lift(S::one());
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            out = out.times(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.times(&base);
        }
    }
    out
}

fn integral_half<S: Scalar>(coeffs: &[S], other: usize) -> S {
    let deg = coeffs.len() - 1;
    let mut ratio = S::Real::of(deg + 1) / S::Real::of(deg + other + 2);
    let mut sum = S::zero();
    for (j, &c) in coeffs.iter().enumerate() {
        sum += c.scale(ratio / S::Real::of(j + 1));
        if j < deg {
            ratio = ratio * S::Real::of(deg - j) / S::Real::of(deg + other + 1 - j);
        }
    }
    sum
}

/// `2 Psi(n+m+3) - Psi(m+3) - Psi(n+3) + (n+m+4)/((n+2)(m+2))`, the integral
/// of the blend with all-ones data on the left and `(-1)^k` on the right.
///
/// It bounds the error amplification of [`Blend::integral`] under
/// coefficient perturbations. Only differences of `Psi` at integers occur,
/// so it is computed from harmonic sums and Euler's constant cancels.
pub fn condition_integral<R: Real>(m: usize, n: usize) -> R {
    let harmonic_between = |lo: usize, hi: usize| -> R {
        // H_hi - H_lo for lo <= hi
        (lo + 1..=hi).fold(R::zero(), |acc, k| acc + R::one() / R::of(k))
    };
    let top = n + m + 2;
    harmonic_between(m + 2, top)
        + harmonic_between(n + 2, top)
        + R::of(n + m + 4) / (R::of(n + 2) * R::of(m + 2))
}

/// Lebesgue function `sum_j |phi_j(s)|` of the two-point Hermite basis at a
/// real `s`, by evaluating one blend per unit coefficient vector. O((m+n)^2).
pub fn lebesgue_function<R: Real>(m: usize, n: usize, s: R) -> Result<R> {
    let at = num_complex::Complex::new(s, R::zero());
    let zero = num_complex::Complex::<R>::zero();
    let one = num_complex::Complex::<R>::one();
    let mut total = R::zero();
    for side in 0..2 {
        let len = if side == 0 { m + 1 } else { n + 1 };
        for j in 0..len {
            let mut p = vec![zero; m + 1];
            let mut q = vec![zero; n + 1];
            if side == 0 {
                p[j] = one;
            } else {
                q[j] = one;
            }
            total += Blend::new(p, q)?.eval(at)?.norm();
        }
    }
    Ok(total)
}

/// `max_{0<=s<=1} s^(m+1) (1-s)^(n+1) = (m+1)^(m+1) (n+1)^(n+1) / (m+n+2)^(m+n+2)`,
/// the factor multiplying `f^(m+n+2)/(m+n+2)!` in the blend's truncation
/// error. Computed in logarithms so large grades do not overflow.
pub fn truncation_factor<R: Real>(m: usize, n: usize) -> R {
    let xlogx = |k: usize| R::of(k) * R::of(k).ln();
    (xlogx(m + 1) + xlogx(n + 1) - xlogx(m + n + 2)).exp()
}

/// Where the maximum in [`truncation_factor`] is attained: setting the
/// derivative of `s^(m+1)(1-s)^(n+1)` to zero gives `s = (m+1)/(m+n+2)`.
/// (The value `(m+1)/(m+n+1)` sometimes quoted is off by one in the
/// denominator; it does not reproduce the closed-form maximum.)
pub fn truncation_argmax<R: Real>(m: usize, n: usize) -> R {
    R::of(m + 1) / R::of(m + n + 2)
}
