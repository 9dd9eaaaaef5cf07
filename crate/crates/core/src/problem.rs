//! The problem document: a TOML description of an initial value problem.
//!
//! ```toml
//! equation = "mathieu(2.0887, 1.4688i)"
//! path = [0, 6.283185307179586]   # or [[re, im], ...] or ["1+2i", ...]
//! y0 = 1
//! y1 = 0
//! grade = 15
//! tol = 1e-10
//! h_init = 0.5                     # optional
//! h_min = 1e-8                     # optional
//! h_max = 2.0                      # optional
//! ```
//!
//! Equations come from a fixed registry:
//!
//! | name                             | equation                  |
//! |----------------------------------|---------------------------|
//! | `sho`, `sho(w)`                  | `y'' + w^2 y = 0`         |
//! | `airy`                           | `y'' - z y = 0`           |
//! | `mathieu(a, q)`                  | `y'' + (a - 2q cos 2z) y = 0` |
//! | `constant-coefficient(a, b, g)`  | `y'' + a y' + b y = g`    |
//! | `free`                           | `y'' = 0`                 |

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::mathieu::MathieuParams;
use crate::ode::{OdeCoefficients, OdeProblem};
use crate::oracles::Polynomial;
use crate::parse::parse_complex;

#[derive(Debug, Clone, PartialEq)]
pub enum Equation {
    Sho {
        omega: Complex64,
    },
    Airy,
    Mathieu {
        a: Complex64,
        q: Complex64,
    },
    ConstantCoefficient {
        a: Complex64,
        b: Complex64,
        g: Complex64,
    },
    Free,
}

impl Equation {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        let (name, args) = match text.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| format!("missing `)` in `{text}`"))?;
                let args = inner
                    .split(',')
                    .map(|a| parse_complex::<Complex64>(a).map_err(|e| e.message))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                (name.trim(), args)
            }
            None => (text, Vec::new()),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`{name}` takes {n} arguments, got {}", args.len()))
            }
        };
        match name {
            "sho" if args.is_empty() => Ok(Self::Sho {
                omega: Complex64::new(1.0, 0.0),
            }),
            "sho" => arity(1).map(|_| Self::Sho { omega: args[0] }),
            "airy" => arity(0).map(|_| Self::Airy),
            "free" => arity(0).map(|_| Self::Free),
            "mathieu" => arity(2).map(|_| Self::Mathieu {
                a: args[0],
                q: args[1],
            }),
            "constant-coefficient" => arity(3).map(|_| Self::ConstantCoefficient {
                a: args[0],
                b: args[1],
                g: args[2],
            }),
            other => Err(format!("unknown equation `{other}`")),
        }
    }

    pub fn coefficients(&self) -> OdeCoefficients<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Self::Sho { omega } => OdeCoefficients::constant(zero, omega * omega, zero),
            Self::Airy => {
                let minus_z = Polynomial::new(vec![zero, Complex64::new(-1.0, 0.0)])
                    .expect("non-empty polynomial");
                OdeCoefficients::homogeneous(crate::oracles::Constant(zero), minus_z)
            }
            Self::Mathieu { a, q } => MathieuParams::new(a, q).coefficients(),
            Self::ConstantCoefficient { a, b, g } => OdeCoefficients::constant(a, b, g),
            Self::Free => OdeCoefficients::constant(zero, zero, zero),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ComplexField {
    Real(f64),
    Pair([f64; 2]),
    Literal(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    equation: Spanned<String>,
    path: Spanned<Vec<ComplexField>>,
    y0: Spanned<ComplexField>,
    y1: Spanned<ComplexField>,
    grade: Spanned<usize>,
    tol: Spanned<f64>,
    h_init: Option<Spanned<f64>>,
    h_min: Option<Spanned<f64>>,
    h_max: Option<Spanned<f64>>,
}

/// A problem read from a document.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub equation: Equation,
    pub problem: OdeProblem<Complex64>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl ProblemSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let doc: ProblemDoc = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        let at = |span: std::ops::Range<usize>, message: String| {
            let (line, column) = line_col(text, span.start);
            Error::Parse {
                line,
                column,
                message,
            }
        };
        let complex = |field: &ComplexField, span: std::ops::Range<usize>| match field {
            ComplexField::Real(x) => Ok(Complex64::new(*x, 0.0)),
            ComplexField::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            ComplexField::Literal(s) => {
                parse_complex::<Complex64>(s).map_err(|e| at(span, e.to_string()))
            }
        };

        let equation =
            Equation::parse(doc.equation.get_ref()).map_err(|m| at(doc.equation.span(), m))?;
        let path = doc
            .path
            .get_ref()
            .iter()
            .map(|z| complex(z, doc.path.span()))
            .collect::<Result<Vec<_>>>()?;
        let y0 = complex(doc.y0.get_ref(), doc.y0.span())?;
        let y1 = complex(doc.y1.get_ref(), doc.y1.span())?;

        let mut problem = OdeProblem::new(
            equation.coefficients(),
            path,
            y0,
            y1,
            *doc.grade.get_ref(),
            *doc.tol.get_ref(),
        );
        problem.h_init = doc.h_init.as_ref().map(|h| *h.get_ref());
        if let Some(h) = &doc.h_min {
            problem.h_min = *h.get_ref();
        }
        if let Some(h) = &doc.h_max {
            problem.h_max = *h.get_ref();
        }
        problem.validate().map_err(|e| {
            let message = e.to_string();
            let span = if message.contains("tol") {
                doc.tol.span()
            } else if message.contains("grade") {
                doc.grade.span()
            } else if message.contains("waypoint") || message.contains("path") {
                doc.path.span()
            } else if message.contains("h_init") {
                doc.h_init.as_ref().map_or(0..0, |h| h.span())
            } else if message.contains("step bounds") {
                doc.h_min
                    .as_ref()
                    .or(doc.h_max.as_ref())
                    .map_or(doc.path.span(), |h| h.span())
            } else {
                doc.y0.span()
            };
            at(span, message)
        })?;
        Ok(Self { equation, problem })
    }
}
