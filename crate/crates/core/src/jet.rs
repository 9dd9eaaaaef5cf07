//! Truncated Taylor jets used to push derivatives through the Horner loops.

use crate::scalar::Scalar;

/// Arithmetic needed by the double-Horner blend evaluation. Implemented for
/// plain scalars and for [`Jet`]s so the same loop yields values or
/// derivatives.
pub(crate) trait HornerArith<S: Scalar>: Clone {
    /// A constant with the same shape as `self`.
    fn lift(&self, c: S) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn times_scalar(&self, c: S) -> Self;
    fn plus(&mut self, other: &Self);
    fn all_finite(&self) -> bool;
}

impl<S: Scalar> HornerArith<S> for S {
    fn lift(&self, c: S) -> Self {
        c
    }
    fn times(&self, other: &Self) -> Self {
        *self * *other
    }
    fn times_scalar(&self, c: S) -> Self {
        *self * c
    }
    fn plus(&mut self, other: &Self) {
        *self += *other;
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Taylor coefficients `[f, f', f''/2!, ...]` of a quantity with respect to
/// one independent variable, truncated at a fixed length.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Jet<S> {
    pub(crate) c: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    pub(crate) fn constant(value: S, len: usize) -> Self {
        let mut c = vec![S::zero(); len];
        c[0] = value;
        Self { c }
    }

    /// The independent variable itself at `value`.
    pub(crate) fn variable(value: S, len: usize) -> Self {
        let mut j = Self::constant(value, len);
        if len > 1 {
            j.c[1] = S::one();
        }
        j
    }

    /// Derivatives `f^(k) = k! c_k`.
    pub(crate) fn derivatives(&self) -> Vec<S> {
        let mut fact = S::one();
        self.c
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if k > 0 {
                    fact *= S::of(k);
                }
                c * fact
            })
            .collect()
    }
}

impl<S: Scalar> HornerArith<S> for Jet<S> {
    fn lift(&self, c: S) -> Self {
        Self::constant(c, self.c.len())
    }

    fn times(&self, other: &Self) -> Self {
        Self {
            c: crate::taylor::cauchy_product(&self.c, &other.c),
        }
    }

    fn times_scalar(&self, k: S) -> Self {
        Self {
            c: self.c.iter().map(|&x| x * k).collect(),
        }
    }

    fn plus(&mut self, other: &Self) {
        for (x, &y) in self.c.iter_mut().zip(&other.c) {
            *x += y;
        }
    }

    fn all_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }
}
