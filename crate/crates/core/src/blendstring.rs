//! Piecewise blends along a polygonal path.
//!
//! A [`Blendstring`] is an ordered list of [`LocalTaylor`] records sharing
//! one grade. Consecutive knots must differ; a path may otherwise cross or
//! revisit earlier knots. Segment `k` is the blend of records `k` and `k+1`
//! under `z = a_k + s (a_{k+1} - a_k)`.

use num_traits::{Float, One, Zero};
use rayon::prelude::*;

use crate::blend::Blend;
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::taylor::{local_series, LocalTaylor, SeriesOracle};

#[derive(Clone, Debug, PartialEq)]
pub struct Blendstring<S> {
    records: Vec<LocalTaylor<S>>,
    grade: usize,
}

impl<S: Scalar> Blendstring<S> {
    pub fn new(records: Vec<LocalTaylor<S>>) -> Result<Self> {
        let first = records.first().ok_or_else(|| {
            Error::InvalidArgument("a blendstring needs at least one knot".into())
        })?;
        let grade = first.grade();
        for (k, r) in records.iter().enumerate() {
            if r.grade() != grade {
                return Err(Error::InvalidArgument(format!(
                    "record {k} has grade {}, expected {grade}",
                    r.grade()
                )));
            }
        }
        check_adjacent_distinct(records.iter().map(|r| r.knot()))?;
        Ok(Self { records, grade })
    }

    /// Fills one record per knot from `oracle`.
    pub fn build<O: SeriesOracle<S> + ?Sized>(
        knots: &[S],
        grade: usize,
        oracle: &O,
    ) -> Result<Self> {
        check_adjacent_distinct(knots.iter().copied())?;
        let records = knots
            .iter()
            .map(|&k| local_series(oracle, k, grade))
            .collect::<Result<Vec<_>>>()?;
        Self::new(records)
    }

    /// The function `z` on the given knots.
    pub fn identity(knots: &[S], grade: usize) -> Result<Self> {
        Self::new(
            knots
                .iter()
                .map(|&k| LocalTaylor::identity(k, grade))
                .collect(),
        )
    }

    pub fn constant(knots: &[S], grade: usize, value: S) -> Result<Self> {
        Self::new(
            knots
                .iter()
                .map(|&k| LocalTaylor::constant(k, grade, value))
                .collect(),
        )
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn records(&self) -> &[LocalTaylor<S>] {
        &self.records
    }

    pub fn knots(&self) -> Vec<S> {
        self.records.iter().map(|r| r.knot()).collect()
    }

    pub fn segment_count(&self) -> usize {
        self.records.len() - 1
    }

    /// The blend on segment `k` together with its span `a_{k+1} - a_k`.
    pub fn segment(&self, k: usize) -> Result<(Blend<S>, S)> {
        if k + 1 >= self.records.len() {
            return Err(Error::InvalidArgument(format!(
                "segment {k} does not exist ({} segments)",
                self.segment_count()
            )));
        }
        let (left, right) = (&self.records[k], &self.records[k + 1]);
        Ok((Blend::on_segment(left, right)?, right.knot() - left.knot()))
    }

    /// Same length, same knots, same grade.
    pub fn compatible(&self, other: &Self) -> bool {
        self.grade == other.grade
            && self.records.len() == other.records.len()
            && self
                .records
                .iter()
                .zip(&other.records)
                .all(|(x, y)| x.knot() == y.knot())
    }

    /// Applies a binary series operation knot by knot.
    pub fn zip<F>(&self, other: &Self, op: F) -> Result<Self>
    where
        F: Fn(&LocalTaylor<S>, &LocalTaylor<S>) -> Result<LocalTaylor<S>>,
    {
        if !self.compatible(other) {
            return Err(Error::Incompatible(
                "blendstrings differ in knots or grade".into(),
            ));
        }
        let records = self
            .records
            .iter()
            .zip(&other.records)
            .map(|(x, y)| op(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(records)
    }

    pub fn linear_combination(&self, alpha: S, other: &Self, beta: S) -> Result<Self> {
        self.zip(other, |x, y| x.linear_combination(alpha, y, beta))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, LocalTaylor::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, LocalTaylor::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, LocalTaylor::mul)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.zip(other, LocalTaylor::div)
    }

    pub fn scale(&self, factor: S) -> Self {
        Self {
            records: self.records.iter().map(|r| r.scale(factor)).collect(),
            grade: self.grade,
        }
    }

    /// `f(self)` knot by knot, from a series oracle for `f`.
    pub fn map<O: SeriesOracle<S> + ?Sized>(&self, f: &O) -> Result<Self> {
        let records = self
            .records
            .iter()
            .map(|r| r.compose(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(records)
    }

    /// Truncates or zero-pads every record to `grade`.
    pub fn with_grade(&self, grade: usize) -> Self {
        Self {
            records: self.records.iter().map(|r| r.with_grade(grade)).collect(),
            grade,
        }
    }

    /// Default dispatch tolerance, relative to segment length.
    pub fn default_path_tolerance() -> S::Real {
        S::Real::lit(1e-10)
    }

    /// First segment whose affine parameter `s = (z - a_k)/(a_{k+1} - a_k)`
    /// lies within `tol` of the real interval `[0, 1]`.
    pub fn locate(&self, z: S, tol: S::Real) -> Option<(usize, S)> {
        let zero = S::Real::zero();
        let one = S::Real::one();
        (0..self.segment_count()).find_map(|k| {
            let a = self.records[k].knot();
            let span = self.records[k + 1].knot() - a;
            let s = (z - a) / span;
            let on = s.im().abs() <= tol && s.re() >= zero - tol && s.re() <= one + tol;
            on.then_some((k, s))
        })
    }

    pub fn eval(&self, z: S) -> Result<S> {
        self.eval_with_tolerance(z, Self::default_path_tolerance())
    }

    pub fn eval_with_tolerance(&self, z: S, tol: S::Real) -> Result<S> {
        if let Some(r) = self.records.iter().find(|r| r.knot() == z) {
            return Ok(r.coeffs()[0]);
        }
        let (k, s) = self.locate(z, tol).ok_or_else(|| Error::OffPath {
            point: z.to_string(),
        })?;
        self.segment(k)?.0.eval(s)
    }

    /// Values and z-derivatives `[f, f', ..., f^(nder)]` at `z`.
    pub fn eval_derivs(&self, z: S, nder: usize) -> Result<Vec<S>> {
        let (k, s) = self
            .locate(z, Self::default_path_tolerance())
            .ok_or_else(|| Error::OffPath {
                point: z.to_string(),
            })?;
        let (blend, span) = self.segment(k)?;
        Ok(to_z_derivatives(blend.eval_derivs(s, nder)?, span))
    }

    /// Default interior refinement: `2 (grade + 1)` points per segment.
    pub fn default_refinement(&self) -> usize {
        2 * (self.grade + 1)
    }

    /// Evaluates at every knot and at `n_refine` equally spaced interior
    /// points of each segment, returning z-derivatives up to `nder`.
    ///
    /// Segments are evaluated in parallel; rows come back in path order with
    /// each knot listed once.
    pub fn deval(&self, n_refine: usize, nder: usize) -> Result<EvalTable<S>> {
        if self.segment_count() == 0 {
            let r = &self.records[0];
            let mut fact = S::one();
            let derivs = (0..=nder)
                .map(|j| {
                    if j > 0 {
                        fact *= S::of(j);
                    }
                    r.coeffs().get(j).map_or(S::zero(), |&c| c * fact)
                })
                .collect();
            return Ok(EvalTable {
                rows: vec![EvalRow {
                    point: r.knot(),
                    derivs,
                }],
                nder,
            });
        }
        let last = self.segment_count() - 1;
        let per_segment = (0..self.segment_count())
            .into_par_iter()
            .map(|k| {
                let (blend, span) = self.segment(k)?;
                let a = self.records[k].knot();
                let stop = if k == last {
                    n_refine + 2
                } else {
                    n_refine + 1
                };
                (0..stop)
                    .map(|i| {
                        let (s, point) = if i == n_refine + 1 {
                            (S::one(), self.records[k + 1].knot())
                        } else if i == 0 {
                            (S::zero(), a)
                        } else {
                            let s = S::of(i) / S::of(n_refine + 1);
                            (s, a + s * span)
                        };
                        let derivs = to_z_derivatives(blend.eval_derivs(s, nder)?, span);
                        Ok(EvalRow { point, derivs })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalTable {
            rows: per_segment.into_iter().flatten().collect(),
            nder,
        })
    }

    /// The exact antiderivative, vanishing at the first knot.
    ///
    /// The result has grade `grade + 1`: record `k` is
    /// `[F_k, c_0, c_1/2, ..., c_m/(m+1)]` with `F_0 = 0` and
    /// `F_{k+1} = F_k + (a_{k+1} - a_k) * integral(segment k)`. Because the
    /// antiderivative of a segment's blend is a polynomial of degree
    /// `2m + 2`, the grade-`(m+1)` blend of these records reproduces it.
    pub fn indefinite_integral(&self) -> Result<Self> {
        if self.segment_count() == 0 {
            return Err(Error::InvalidArgument(
                "an antiderivative needs at least one segment".into(),
            ));
        }
        let constants = self.cumulative_integrals()?;
        let records = self
            .records
            .iter()
            .zip(constants)
            .map(|(r, f)| r.antiderivative(f))
            .collect();
        Self::new(records)
    }

    /// Sum of the exact segment integrals along the whole path.
    pub fn definite_integral(&self) -> Result<S> {
        Ok(*self
            .cumulative_integrals()?
            .last()
            .expect("at least one knot"))
    }

    fn cumulative_integrals(&self) -> Result<Vec<S>> {
        let mut acc = S::zero();
        let mut out = vec![acc];
        for k in 0..self.segment_count() {
            let (blend, span) = self.segment(k)?;
            acc += span * blend.integral();
            out.push(acc);
        }
        Ok(out)
    }
}

/// A blendstring answers series queries anywhere on its path by expanding
/// the covering segment's blend.
impl<S: Scalar> SeriesOracle<S> for Blendstring<S> {
    fn series(&self, at: S, grade: usize) -> Result<Vec<S>> {
        let (k, s) = self
            .locate(at, Self::default_path_tolerance())
            .ok_or_else(|| Error::OffPath {
                point: at.to_string(),
            })?;
        let (blend, span) = self.segment(k)?;
        let mut inv = S::one();
        let step = S::one() / span;
        Ok(blend
            .taylor_at(s, grade)?
            .into_iter()
            .map(|c| {
                let v = c * inv;
                inv *= step;
                v
            })
            .collect())
    }
}

fn to_z_derivatives<S: Scalar>(mut derivs: Vec<S>, span: S) -> Vec<S> {
    let inv = S::one() / span;
    let mut factor = S::one();
    for d in derivs.iter_mut() {
        *d *= factor;
        factor *= inv;
    }
    derivs
}

fn check_adjacent_distinct<S: Scalar>(knots: impl Iterator<Item = S>) -> Result<()> {
    let mut prev: Option<S> = None;
    for (k, z) in knots.enumerate() {
        if prev == Some(z) {
            return Err(Error::InvalidArgument(format!(
                "knots {} and {k} coincide at {z}",
                k - 1
            )));
        }
        prev = Some(z);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRow<S> {
    pub point: S,
    /// `[f, f', ..., f^(nder)]` with respect to `z`.
    pub derivs: Vec<S>,
}

/// Batch evaluation output of [`Blendstring::deval`].
#[derive(Clone, Debug, PartialEq)]
pub struct EvalTable<S> {
    pub rows: Vec<EvalRow<S>>,
    pub nder: usize,
}

impl<S: Scalar> EvalTable<S> {
    /// Delimiter-separated text: a header `re_z,im_z,re_d0,im_d0,...` and one
    /// line per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_z,im_z");
        for k in 0..=self.nder {
            out.push_str(&format!(",re_d{k},im_d{k}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&fmt_complex(row.point));
            for d in &row.derivs {
                out.push(',');
                out.push_str(&fmt_complex(*d));
            }
            out.push('\n');
        }
        out
    }

    pub fn max_abs_error<F>(&self, order: usize, exact: F) -> S::Real
    where
        F: Fn(S) -> S,
    {
        self.rows
            .iter()
            .map(|r| (r.derivs[order] - exact(r.point)).abs())
            .fold(S::Real::zero(), |a, b| a.max(b))
    }
}

pub(crate) fn fmt_complex<S: Scalar>(z: S) -> String {
    format!("{:.16e},{:.16e}", z.re(), z.im())
}
