//! Collocation marching for `y'' + a(z) y' + b(z) y = g(z)` along a
//! polygonal path in the complex plane.
//!
//! Each step from `a_n` to `a_{n+1}` takes the known grade-m series at `a_n`,
//! generates solution series at `a_{n+1}` from the recurrence in
//! [`ode_series`], and joins them by blends. The two free constants are fixed
//! by requiring the residual to vanish at a quarter and three quarters of the
//! step; the residual at the midpoint decides acceptance.

use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{Float, ToPrimitive, Zero};

use crate::blend::Blend;
use crate::blendstring::{fmt_complex, Blendstring};
use crate::error::{Error, Result};
use crate::oracles::{Constant, Polynomial};
use crate::scalar::{Real, Scalar};
use crate::taylor::{local_series, ode_series, LocalTaylor, SeriesOracle};

/// Condition estimates above this make a collocation system singular.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone)]
pub struct OdeCoefficients<S: Scalar> {
    pub a: Arc<dyn SeriesOracle<S>>,
    pub b: Arc<dyn SeriesOracle<S>>,
    pub g: Arc<dyn SeriesOracle<S>>,
}

impl<S: Scalar + 'static> OdeCoefficients<S> {
    pub fn new(
        a: impl SeriesOracle<S> + 'static,
        b: impl SeriesOracle<S> + 'static,
        g: impl SeriesOracle<S> + 'static,
    ) -> Self {
        Self {
            a: Arc::new(a),
            b: Arc::new(b),
            g: Arc::new(g),
        }
    }

    /// `y'' + a y' + b y = 0`.
    pub fn homogeneous(
        a: impl SeriesOracle<S> + 'static,
        b: impl SeriesOracle<S> + 'static,
    ) -> Self {
        Self::new(a, b, Constant(S::zero()))
    }

    /// Constant coefficients `y'' + a y' + b y = g`.
    pub fn constant(a: S, b: S, g: S) -> Self {
        Self::new(Constant(a), Constant(b), Constant(g))
    }

    /// The same operator with a different right-hand side.
    pub fn with_forcing(&self, g: Arc<dyn SeriesOracle<S>>) -> Self {
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            g,
        }
    }
}

impl<S: Scalar> std::fmt::Debug for OdeCoefficients<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("OdeCoefficients { .. }")
    }
}

#[derive(Clone, Debug)]
pub struct OdeProblem<S: Scalar> {
    pub coefficients: OdeCoefficients<S>,
    /// Waypoints; the solution is marched segment by segment.
    pub path: Vec<S>,
    pub y0: S,
    pub y1: S,
    pub grade: usize,
    pub tol: S::Real,
    pub h_init: Option<S::Real>,
    pub h_min: S::Real,
    pub h_max: S::Real,
}

impl<S: Scalar> OdeProblem<S> {
    /// A problem with `h_min = 1e-10 * length`, `h_max = length` and no
    /// initial step, where `length` is the total path length.
    pub fn new(
        coefficients: OdeCoefficients<S>,
        path: Vec<S>,
        y0: S,
        y1: S,
        grade: usize,
        tol: S::Real,
    ) -> Self {
        let length = path
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(S::Real::zero(), |x, y| x + y);
        Self {
            coefficients,
            path,
            y0,
            y1,
            grade,
            tol,
            h_init: None,
            h_min: length * S::Real::lit(1e-10),
            h_max: length,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        let pos = |x: S::Real| x > S::Real::zero() && x.is_finite();
        if !pos(self.tol) {
            return bad("tol must be positive");
        }
        if !pos(self.h_min) || !pos(self.h_max) || self.h_min > self.h_max {
            return bad("step bounds must satisfy 0 < h_min <= h_max");
        }
        if let Some(h) = self.h_init {
            if !pos(h) {
                return bad("h_init must be positive");
            }
        }
        if self.grade < 1 {
            return bad("grade must be at least 1");
        }
        if self.path.len() < 2 {
            return bad("the path needs at least two waypoints");
        }
        if self.path.iter().any(|z| !z.is_finite()) {
            return bad("waypoints must be finite");
        }
        if self.path.windows(2).any(|w| w[0] == w[1]) {
            return bad("consecutive waypoints must differ");
        }
        if !self.y0.is_finite() || !self.y1.is_finite() {
            return bad("initial values must be finite");
        }
        Ok(())
    }

    /// The solution series at the first waypoint.
    pub fn initial_series(&self) -> Result<LocalTaylor<S>> {
        let (a, b, g) = self.coefficient_series(self.path[0], self.grade)?;
        ode_series(&a, &b, &g, self.y0, self.y1, self.grade)
    }

    fn coefficient_series(
        &self,
        at: S,
        grade: usize,
    ) -> Result<(LocalTaylor<S>, LocalTaylor<S>, LocalTaylor<S>)> {
        let c = &self.coefficients;
        Ok((
            local_series(c.a.as_ref(), at, grade)?,
            local_series(c.b.as_ref(), at, grade)?,
            local_series(c.g.as_ref(), at, grade)?,
        ))
    }

    fn coefficient_values(&self, at: S) -> Result<[S; 3]> {
        let (a, b, g) = self.coefficient_series(at, 0)?;
        Ok([a.coeffs()[0], b.coeffs()[0], g.coeffs()[0]])
    }

    /// One step from `a_n + h * direction`; see [`OdeProblem::step_to`].
    pub fn step(&self, known: &LocalTaylor<S>, direction: S, h: S::Real) -> Result<Step<S>> {
        self.step_to(known, known.knot() + direction.scale(h))
    }

    /// One collocation step from the knot of `known` to `to`.
    ///
    /// Fails with [`Error::SingularCollocation`] when the 2x2 system is
    /// singular or its condition estimate exceeds [`MAX_CONDITION`]. The step
    /// bounds of the problem are not consulted.
    pub fn step_to(&self, known: &LocalTaylor<S>, to: S) -> Result<Step<S>> {
        let m = self.grade;
        if known.grade() != m {
            return Err(Error::Incompatible(format!(
                "known series has grade {}, the problem grade is {m}",
                known.grade()
            )));
        }
        let from = known.knot();
        let span = to - from;
        if span == S::zero() || !span.is_finite() {
            return Err(Error::InvalidArgument("step endpoints coincide".into()));
        }

        let (a1, b1, g1) = self.coefficient_series(to, m)?;
        let zero_g = LocalTaylor::zero(to, m);
        let c_ser = ode_series(&a1, &b1, &zero_g, S::one(), S::zero(), m)?;
        let s_ser = ode_series(&a1, &b1, &zero_g, S::zero(), S::one(), m)?;

        // Written as y = T + blend(0, d), where T is the known polynomial and
        // d its misfit at the far end, every term of the residual is of the
        // size of the residual itself. Summing the three blends directly
        // cancels terms of size m^2/h^2 instead.
        let local = LocalPart::new(known, to)?;
        let shifted = local.shifted();
        let mut base = c_ser.linear_combination(shifted[0], &s_ser, shifted[1])?;
        if !g1.is_zero() {
            base = base.add(&ode_series(&a1, &b1, &g1, S::zero(), S::zero(), m)?)?;
        }
        let misfit = base.sub(&LocalTaylor::new(to, shifted.to_vec())?)?;

        let zeros = vec![S::zero(); m + 1];
        let right = |ser: &LocalTaylor<S>| Blend::new(zeros.clone(), ser.scaled_coeffs(span));
        let (c_blend, s_blend, misfit_blend) = (right(&c_ser)?, right(&s_ser)?, right(&misfit)?);

        let residuals = |t: S| -> Result<[S; 3]> {
            let coef = self.coefficient_values(from + span * t)?;
            Ok([
                local.residual(coef, t)? + hom(&misfit_blend, coef, span, t)?,
                hom(&c_blend, coef, span, t)?,
                hom(&s_blend, coef, span, t)?,
            ])
        };
        let r1 = residuals(S::lit(0.25))?;
        let r2 = residuals(S::lit(0.75))?;
        let (alpha, beta, condition) =
            solve_2x2([[r1[1], r1[2]], [r2[1], r2[2]]], [-r1[0], -r2[0]])?;
        let series = base.add(&c_ser.linear_combination(alpha, &s_ser, beta)?)?;

        let mid = residuals(S::lit(0.5))?;
        let residual = (mid[0] + alpha * mid[1] + beta * mid[2]).abs();
        let residual = if residual.is_finite() {
            residual
        } else {
            S::Real::infinity()
        };
        Ok(Step {
            accepted: residual <= self.tol,
            series,
            residual,
            condition,
        })
    }

    /// The combined residual `y'' + a y' + b y - g` of the step from `known`
    /// to `series`, at the unit parameters `s`.
    pub fn step_residual(
        &self,
        known: &LocalTaylor<S>,
        series: &LocalTaylor<S>,
        s: &[S],
    ) -> Result<Vec<S>> {
        let to = series.knot();
        let span = to - known.knot();
        let local = LocalPart::new(known, to)?;
        let misfit = series.sub(&LocalTaylor::new(to, local.shifted().to_vec())?)?;
        let zeros = vec![S::zero(); series.grade() + 1];
        let misfit_blend = Blend::new(zeros, misfit.scaled_coeffs(span))?;
        s.iter()
            .map(|&t| {
                let coef = self.coefficient_values(known.knot() + span * t)?;
                Ok(local.residual(coef, t)? + hom(&misfit_blend, coef, span, t)?)
            })
            .collect()
    }
}

/// `y'' + a y' + b y` for a blend over a segment of vector `span`.
fn hom<S: Scalar>(blend: &Blend<S>, [a, b, _]: [S; 3], span: S, t: S) -> Result<S> {
    let d = blend.eval_derivs(t, 2)?;
    Ok(d[2] / (span * span) + a * d[1] / span + b * d[0])
}

/// The known Taylor polynomial of a step, as an exact polynomial in
/// `z - a_n`.
struct LocalPart<S: Scalar> {
    poly: Polynomial<S>,
    span: S,
    shifted: Vec<S>,
}

impl<S: Scalar> LocalPart<S> {
    fn new(known: &LocalTaylor<S>, to: S) -> Result<Self> {
        let span = to - known.knot();
        let poly = Polynomial::new(known.coeffs().to_vec())?;
        let shifted = poly.series(span, known.grade())?;
        Ok(Self {
            poly,
            span,
            shifted,
        })
    }

    /// Its Taylor coefficients at the far end.
    fn shifted(&self) -> &[S] {
        &self.shifted
    }

    /// `T'' + a T' + b T - g` at the unit parameter `t`.
    fn residual(&self, [a, b, g]: [S; 3], t: S) -> Result<S> {
        let c = self.poly.series(self.span * t, 2)?;
        Ok(S::of(2) * c[2] + a * c[1] + b * c[0] - g)
    }
}

/// Outcome of one collocation step.
#[derive(Clone, Debug, PartialEq)]
pub struct Step<S: Scalar> {
    pub accepted: bool,
    /// The grade-m solution series at the end of the step.
    pub series: LocalTaylor<S>,
    /// Modulus of the residual at the middle of the step.
    pub residual: S::Real,
    /// Condition estimate of the column-equilibrated collocation matrix.
    pub condition: S::Real,
}

/// Gaussian elimination with partial pivoting. The condition estimate is the
/// 1-norm condition number after scaling each column to unit max-modulus.
fn solve_2x2<S: Scalar>(m: [[S; 2]; 2], rhs: [S; 2]) -> Result<(S, S, S::Real)> {
    let singular = |condition: f64| Err(Error::SingularCollocation { condition });
    let col_scale = [
        m[0][0].abs().max(m[1][0].abs()),
        m[0][1].abs().max(m[1][1].abs()),
    ];
    if col_scale
        .iter()
        .any(|&c| c == S::Real::zero() || !c.is_finite())
    {
        return singular(f64::INFINITY);
    }
    let e = |i: usize, j: usize| m[i][j].abs() / col_scale[j];
    let norm = (e(0, 0) + e(1, 0)).max(e(0, 1) + e(1, 1));
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let det_scaled = det.abs() / (col_scale[0] * col_scale[1]);
    let inv_norm = if det_scaled == S::Real::zero() {
        S::Real::infinity()
    } else {
        (e(1, 1) + e(1, 0)).max(e(0, 1) + e(0, 0)) / det_scaled
    };
    let condition = norm * inv_norm;
    let limit = S::Real::lit(MAX_CONDITION);
    if condition.is_nan() || condition > limit {
        return singular(condition.to_f64().unwrap_or(f64::INFINITY));
    }

    let (p, o) = if m[0][0].abs() >= m[1][0].abs() {
        (0, 1)
    } else {
        (1, 0)
    };
    let factor = m[o][0] / m[p][0];
    let u11 = m[o][1] - factor * m[p][1];
    let r1 = rhs[o] - factor * rhs[p];
    let y = r1 / u11;
    let x = (rhs[p] - m[p][1] * y) / m[p][0];
    Ok((x, y, condition))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord<S: Scalar> {
    pub from: S,
    pub to: S,
    pub h: S::Real,
    pub residual: S::Real,
    pub accepted: bool,
    /// Rejected attempts preceding this one for the same step.
    pub retries: usize,
}

#[derive(Clone, Debug)]
pub struct SolveResult<S: Scalar> {
    pub solution: Blendstring<S>,
    /// Every attempted step, accepted or not, in order.
    pub steps: Vec<StepRecord<S>>,
}

impl<S: Scalar> SolveResult<S> {
    pub fn accepted_steps(&self) -> impl Iterator<Item = &StepRecord<S>> {
        self.steps.iter().filter(|s| s.accepted)
    }

    pub fn all_accepted(&self) -> bool {
        self.steps.iter().all(|s| s.accepted)
    }

    /// The step log as CSV.
    pub fn step_log_csv(&self) -> String {
        let mut out =
            String::from("step,re_from,im_from,re_to,im_to,h,residual,accepted,retries\n");
        for (k, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{k},{},{},{:.16e},{:.16e},{},{}",
                fmt_complex(s.from),
                fmt_complex(s.to),
                s.h,
                s.residual,
                s.accepted,
                s.retries
            );
        }
        out
    }
}

fn controller_factor<R: Real>(tol: R, residual: R, grade: usize) -> R {
    if residual == R::zero() {
        return R::infinity();
    }
    if !residual.is_finite() {
        return R::zero();
    }
    R::lit(0.9) * (tol / residual).powf(R::one() / R::of(2 * grade))
}

/// Marches the problem along its path with adaptive steps.
///
/// Steps end exactly on every waypoint. After an accepted step
/// `h <- h * min(2, f)`, after a rejection `h <- h * max(0.1, f)`, with
/// `f = 0.9 (tol / residual)^(1/(2m))`, clamped to `[h_min, h_max]`. A step
/// is stretched to land on the next waypoint when that is within `1.1 h`.
/// A singular collocation system counts as a rejection.
pub fn solve_ivp<S: Scalar>(problem: &OdeProblem<S>) -> Result<SolveResult<S>> {
    problem.validate()?;
    let real = S::Real::lit;
    let clamp = |h: S::Real| h.max(problem.h_min).min(problem.h_max);
    let mut current = problem.initial_series()?;
    let mut records = vec![current.clone()];
    let mut steps = Vec::new();
    let mut h = problem.h_init.map(clamp);

    for w in problem.path.windows(2) {
        let (start, end) = (w[0], w[1]);
        let length = (end - start).abs();
        let direction = (end - start).scale(length.recip());
        let mut hh = clamp(h.unwrap_or_else(|| length / real(8.0)));
        let mut pos = S::Real::zero();
        let mut retries = 0;
        while pos < length {
            let remaining = length - pos;
            let landing = hh * real(1.1) >= remaining;
            let h_try = if landing { remaining } else { hh };
            let to = if landing {
                end
            } else {
                start + direction.scale(pos + h_try)
            };
            let attempt = match problem.step_to(&current, to) {
                Ok(step) => Some(step),
                Err(Error::SingularCollocation { .. }) => None,
                Err(e) => return Err(e),
            };
            let residual = attempt.as_ref().map_or(S::Real::infinity(), |s| s.residual);
            let accepted = attempt.as_ref().is_some_and(|s| s.accepted);
            steps.push(StepRecord {
                from: current.knot(),
                to,
                h: h_try,
                residual,
                accepted,
                retries,
            });
            let f = controller_factor(problem.tol, residual, problem.grade);
            if accepted {
                current = attempt.expect("accepted steps exist").series;
                records.push(current.clone());
                pos = if landing { length } else { pos + h_try };
                retries = 0;
                let next = clamp(h_try * f.min(real(2.0)));
                hh = if landing { hh.max(next) } else { next };
            } else {
                if h_try <= problem.h_min {
                    return Err(Error::StepSizeUnderflow {
                        at: current.knot().to_string(),
                        h_min: problem.h_min.to_f64().unwrap_or(f64::NAN),
                        residual: residual.to_f64().unwrap_or(f64::NAN),
                    });
                }
                retries += 1;
                hh = clamp(h_try * f.max(real(0.1)));
            }
        }
        h = Some(hh);
    }
    Ok(SolveResult {
        solution: Blendstring::new(records)?,
        steps,
    })
}

/// Marches through the given knots without step control. Steps whose
/// residual exceeds the tolerance are kept and flagged in the log.
pub fn solve_on_mesh<S: Scalar>(problem: &OdeProblem<S>, knots: &[S]) -> Result<SolveResult<S>> {
    problem.validate()?;
    if knots.first() != problem.path.first() {
        return Err(Error::InvalidArgument(
            "the mesh must start at the first waypoint".into(),
        ));
    }
    let mut current = problem.initial_series()?;
    let mut records = vec![current.clone()];
    let mut steps = Vec::with_capacity(knots.len().saturating_sub(1));
    for &to in &knots[1..] {
        let step = problem.step_to(&current, to)?;
        steps.push(StepRecord {
            from: current.knot(),
            to,
            h: (to - current.knot()).abs(),
            residual: step.residual,
            accepted: step.accepted,
            retries: 0,
        });
        current = step.series;
        records.push(current.clone());
    }
    Ok(SolveResult {
        solution: Blendstring::new(records)?,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;
    use num_traits::One;

    fn sho() -> OdeCoefficients<C64> {
        OdeCoefficients::constant(C64::zero(), C64::one(), C64::zero())
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn free_particle_is_exact() {
        let coef = OdeCoefficients::constant(C64::zero(), C64::zero(), C64::zero());
        let p = OdeProblem::new(coef, vec![r(0.0), r(3.0)], r(1.0), r(0.0), 4, 1e-12);
        let known = p.initial_series().unwrap();
        let step = p.step_to(&known, r(3.0)).unwrap();
        assert!(step.accepted);
        assert_eq!(step.residual, 0.0);
        assert!((step.series.coeffs()[0] - r(1.0)).norm() < 1e-15);
        assert!(step.series.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn first_rational_at_two() {
        let p = OdeProblem::new(sho(), vec![r(0.0), r(2.0)], r(1.0), r(0.0), 1, 1.0);
        let step = p.step_to(&p.initial_series().unwrap(), r(2.0)).unwrap();
        let expected = -1648.0 / 3728.0;
        assert!((step.series.coeffs()[0] - r(expected)).norm() < 1e-14);
    }

    #[test]
    fn damped_exponential_step() {
        let coef = OdeCoefficients::constant(C64::one(), C64::zero(), C64::zero());
        let p = OdeProblem::new(coef, vec![r(0.0), r(1.0)], r(1.0), r(-1.0), 3, 1e-8);
        let known = p.initial_series().unwrap();
        let step = p.step_to(&known, r(0.1)).unwrap();
        assert!(step.accepted);
        assert!((step.series.coeffs()[0] - r((-0.1f64).exp())).norm() < 1e-9);
    }

    #[test]
    fn forcing_is_carried_by_the_particular_series() {
        // y'' = 2 with y(0) = y'(0) = 0 is z^2
        let coef = OdeCoefficients::constant(C64::zero(), C64::zero(), r(2.0));
        let p = OdeProblem::new(coef, vec![r(0.0), r(2.0)], r(0.0), r(0.0), 3, 1e-12);
        let out = solve_ivp(&p).unwrap();
        let end = out.solution.records().last().unwrap();
        assert!((end.coeffs()[0] - r(4.0)).norm() < 1e-13);
        assert!((end.coeffs()[1] - r(4.0)).norm() < 1e-13);
    }

    #[test]
    fn sho_over_a_period() {
        let mut p = OdeProblem::new(
            sho(),
            vec![r(0.0), r(2.0 * std::f64::consts::PI)],
            r(1.0),
            r(0.0),
            15,
            1e-12,
        );
        p.h_init = Some(0.5);
        let out = solve_ivp(&p).unwrap();
        let end = out.solution.records().last().unwrap();
        assert!((end.coeffs()[0] - r(1.0)).norm() < 1e-10);
        assert!(end.coeffs()[1].norm() < 1e-10);
        assert!(out.accepted_steps().all(|s| s.residual <= 1e-12));
    }

    #[test]
    fn waypoints_are_knots() {
        let path = vec![r(0.0), C64::new(1.0, 1.0), r(2.0)];
        let p = OdeProblem::new(sho(), path.clone(), r(1.0), r(0.0), 8, 1e-10);
        let out = solve_ivp(&p).unwrap();
        let knots = out.solution.knots();
        for w in &path {
            assert!(knots.contains(w));
        }
        let y = out.solution.eval(r(2.0)).unwrap();
        assert!((y - r(2.0f64.cos())).norm() < 1e-8);
    }

    #[test]
    fn invalid_problems_are_rejected() {
        let mut p = OdeProblem::new(sho(), vec![r(0.0), r(1.0)], r(1.0), r(0.0), 3, 1e-8);
        p.tol = 0.0;
        assert!(p.validate().is_err());
        let mut p = OdeProblem::new(sho(), vec![r(0.0), r(0.0)], r(1.0), r(0.0), 3, 1e-8);
        assert!(p.validate().is_err());
        p.path = vec![r(0.0), r(1.0)];
        p.grade = 0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn step_log_has_one_line_per_attempt() {
        let p = OdeProblem::new(sho(), vec![r(0.0), r(3.0)], r(1.0), r(0.0), 4, 1e-9);
        let out = solve_ivp(&p).unwrap();
        assert_eq!(out.step_log_csv().lines().count(), out.steps.len() + 1);
    }
}
