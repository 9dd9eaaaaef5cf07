//! Mathieu's equation `y'' + (a - 2q cos 2z) y = 0` and the Jordan-chain
//! partner `u'' + (a - 2q cos 2z) u + f = 0` of a double eigenvalue.

use num_traits::{Float, FloatConst, One, ToPrimitive, Zero};

use crate::blendstring::Blendstring;
use crate::error::{Error, Result};
use crate::ode::{solve_ivp, solve_on_mesh, OdeCoefficients, OdeProblem, SolveResult, StepRecord};
use crate::oracles::Constant;
use crate::scalar::{Real, Scalar};
use crate::taylor::SeriesOracle;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MathieuParams<S> {
    pub a: S,
    pub q: S,
}

/// Taylor series of `a - 2q cos 2z`.
#[derive(Clone, Copy, Debug)]
pub struct MathieuPotential<S>(pub MathieuParams<S>);

impl<S: Scalar> SeriesOracle<S> for MathieuPotential<S> {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        let MathieuParams { a, q } = self.0;
        let two_z = at.scale(S::Real::of(2));
        let (c, s) = (two_z.cos(), two_z.sin());
        // derivatives of cos(2z) cycle through cos, -sin, -cos, sin
        let cycle = [c, -s, -c, s];
        let mut scale = S::one();
        let mut out = Vec::with_capacity(grade + 1);
        for j in 0..=grade {
            if j > 0 {
                scale = scale.scale(S::Real::of(2) / S::Real::of(j));
            }
            out.push(-(q + q) * scale * cycle[j % 4]);
        }
        out[0] += a;
        Ok(out)
    }
}

impl<S: Scalar + 'static> MathieuParams<S> {
    pub fn new(a: S, q: S) -> Self {
        Self { a, q }
    }

    /// Coefficients of the homogeneous equation.
    pub fn coefficients(&self) -> OdeCoefficients<S> {
        OdeCoefficients::new(
            Constant(S::zero()),
            MathieuPotential(*self),
            Constant(S::zero()),
        )
    }

    fn problem(&self, path: Vec<S>, y0: S, y1: S, grade: usize, tol: S::Real) -> OdeProblem<S> {
        OdeProblem::new(self.coefficients(), path, y0, y1, grade, tol)
    }
}

/// The solutions with `(y, y')(0) = (1, 0)` and `(0, 1)` on one knot
/// sequence.
#[derive(Clone, Debug)]
pub struct MathieuPair<S: Scalar> {
    pub w1: Blendstring<S>,
    pub w2: Blendstring<S>,
    pub steps1: Vec<StepRecord<S>>,
    /// Steps of the second solve, on the knots chosen for the first. These
    /// are flagged rather than retried when their residual exceeds `tol`.
    pub steps2: Vec<StepRecord<S>>,
}

/// Solves for `w_I` adaptively and then for `w_II` on the knots of `w_I`.
/// The path must start at 0.
pub fn mathieu_pair<S: Scalar + 'static>(
    params: &MathieuParams<S>,
    path: &[S],
    grade: usize,
    tol: S::Real,
) -> Result<MathieuPair<S>> {
    if path.first() != Some(&S::zero()) {
        return Err(Error::InvalidArgument("the path must start at 0".into()));
    }
    let first = params.problem(path.to_vec(), S::one(), S::zero(), grade, tol);
    let SolveResult {
        solution: w1,
        steps: steps1,
    } = solve_ivp(&first)?;
    let second = params.problem(path.to_vec(), S::zero(), S::one(), grade, tol);
    let SolveResult {
        solution: w2,
        steps: steps2,
    } = solve_on_mesh(&second, &w1.knots())?;
    Ok(MathieuPair {
        w1,
        w2,
        steps1,
        steps2,
    })
}

/// `u = -w2 * int_0^z w1 f + w1 * int_0^z w2 f`, the solution of
/// `u'' + b u + f = 0` with `u(0) = u'(0) = 0` when `w1`, `w2` solve
/// `w'' + b w = 0` with unit Wronskian.
///
/// The integrals come back one grade higher and are truncated to the common
/// grade before multiplying.
pub fn generalized_eigenfunction<S: Scalar>(
    w1: &Blendstring<S>,
    w2: &Blendstring<S>,
    f: &Blendstring<S>,
) -> Result<Blendstring<S>> {
    let m = w1.grade();
    let i1 = w1.mul(f)?.indefinite_integral()?.with_grade(m);
    let i2 = w2.mul(f)?.indefinite_integral()?.with_grade(m);
    w1.mul(&i2)?.sub(&w2.mul(&i1)?)
}

/// Residual `u'' + (a - 2q cos 2z) u + f` at every deval point.
pub fn forced_residual<S: Scalar>(
    params: &MathieuParams<S>,
    u: &Blendstring<S>,
    f: &Blendstring<S>,
    n_refine: usize,
) -> Result<Vec<(S, S)>> {
    let tu = u.deval(n_refine, 2)?;
    let tf = f.deval(n_refine, 0)?;
    let potential = MathieuPotential(*params);
    tu.rows
        .iter()
        .zip(&tf.rows)
        .map(|(ru, rf)| {
            let b = potential.series(ru.point, 0)?[0];
            Ok((ru.point, ru.derivs[2] + b * ru.derivs[0] + rf.derivs[0]))
        })
        .collect()
}

/// `y'(pi/2)` for the solution with `y(0) = 1`, `y'(0) = 0`. It vanishes
/// exactly when `a` is the characteristic value of an even pi-periodic
/// solution.
pub fn even_shooting<S: Scalar + 'static>(q: S, a: S, grade: usize, tol: S::Real) -> Result<S> {
    let half_pi = S::from_real(S::Real::FRAC_PI_2());
    let p =
        MathieuParams::new(a, q).problem(vec![S::zero(), half_pi], S::one(), S::zero(), grade, tol);
    let out = solve_ivp(&p)?;
    let end = out.solution.records().last().expect("non-empty solution");
    Ok(end.coeffs()[1])
}

/// A characteristic value `a` of an even pi-periodic solution inside the
/// real bracket `[lo, hi]`, by a secant step safeguarded with bisection on
/// the real part of [`even_shooting`].
///
/// Stops when `|y'(pi/2)| <= tol * max(1, |a|)` or the bracket is below
/// a few ulps; fails after 100 iterations.
pub fn even_eigenvalue_search<S: Scalar + 'static>(
    q: S,
    bracket: (S::Real, S::Real),
    grade: usize,
    tol: S::Real,
) -> Result<S> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let solve_tol = tol * S::Real::lit(1e-2);
    let f = |a: S::Real| -> Result<(S, S::Real)> {
        let v = even_shooting(q, S::from_real(a), grade, solve_tol)?;
        Ok((v, v.re()))
    };
    let accept = |v: S, a: S::Real| v.abs() <= tol * a.abs().max(S::Real::one());
    let (v_lo, mut f_lo) = f(lo)?;
    if accept(v_lo, lo) {
        return Ok(S::from_real(lo));
    }
    let (v_hi, mut f_hi) = f(hi)?;
    if accept(v_hi, hi) {
        return Ok(S::from_real(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRootInBracket {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = S::Real::lit(0.5);
    let mut last_width = S::Real::infinity();
    for _ in 0..100 {
        let width = hi - lo;
        let secant = hi - f_hi * width / (f_hi - f_lo);
        // fall back to bisection when the secant leaves the bracket or the
        // bracket did not halve on the previous step
        let inside = secant > lo && secant < hi;
        let x = if inside && width <= half * last_width {
            secant
        } else {
            lo + half * width
        };
        last_width = width;
        let (v, fx) = f(x)?;
        if accept(v, x)
            || width <= S::Real::epsilon() * S::Real::of(4) * x.abs().max(S::Real::one())
        {
            return Ok(S::from_real(x));
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    Err(Error::NotConverged { iterations: 100 })
}

/// `Ce_0(xi) = w_I(i xi)`, normalised by `w_I(0) = 1`, solved along the
/// segment `[0, i xi]`.
pub fn modified_even_value<S: Scalar + 'static>(
    params: &MathieuParams<S>,
    xi: S::Real,
    grade: usize,
    tol: S::Real,
) -> Result<SolveResult<S>> {
    let top = S::from_parts(S::Real::zero(), xi);
    solve_ivp(&params.problem(vec![S::zero(), top], S::one(), S::zero(), grade, tol))
}
