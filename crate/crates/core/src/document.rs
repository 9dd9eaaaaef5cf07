//! The blendstring document: a human-readable JSON file.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "grade": 1,
//!   "knots": [{"re": 0.0e0, "im": 0.0e0}, ...],
//!   "coefficients": [[{"re": ..., "im": ...}, ...], ...]
//! }
//! ```
//!
//! `coefficients` has one row per knot and `grade + 1` entries per row.
//! Numbers are written with 17 significant digits, which round-trips every
//! double exactly.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::blendstring::Blendstring;
use crate::error::{Error, Result};
use crate::taylor::LocalTaylor;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexRepr {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexRepr> for Complex64 {
    fn from(z: ComplexRepr) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlendstringDoc {
    format_version: u32,
    grade: usize,
    knots: Vec<ComplexRepr>,
    coefficients: Vec<Vec<ComplexRepr>>,
}

/// Pretty JSON with every float printed as `{:.16e}`.
struct SignificantDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

impl Blendstring<Complex64> {
    pub fn to_document(&self) -> Result<String> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        for (k, r) in self.records().iter().enumerate() {
            if !finite(&r.knot()) || !r.coeffs().iter().all(finite) {
                return Err(Error::InvalidArgument(format!(
                    "record {k} holds a non-finite value"
                )));
            }
        }
        let doc = BlendstringDoc {
            format_version: FORMAT_VERSION,
            grade: self.grade(),
            knots: self.records().iter().map(|r| r.knot().into()).collect(),
            coefficients: self
                .records()
                .iter()
                .map(|r| r.coeffs().iter().map(|&c| c.into()).collect())
                .collect(),
        };
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(
            &mut out,
            SignificantDigits(PrettyFormatter::with_indent(b"  ")),
        );
        doc.serialize(&mut ser)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        out.push(b'\n');
        Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc: BlendstringDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let bad = |path: String, message: String| Error::Document { path, message };
        if doc.format_version != FORMAT_VERSION {
            return Err(bad(
                "format_version".into(),
                format!("unsupported version {}", doc.format_version),
            ));
        }
        if doc.knots.is_empty() {
            return Err(bad("knots".into(), "at least one knot is required".into()));
        }
        if doc.coefficients.len() != doc.knots.len() {
            return Err(bad(
                "coefficients".into(),
                format!(
                    "{} rows for {} knots",
                    doc.coefficients.len(),
                    doc.knots.len()
                ),
            ));
        }
        let mut records = Vec::with_capacity(doc.knots.len());
        for (k, (knot, row)) in doc.knots.iter().zip(&doc.coefficients).enumerate() {
            if row.len() != doc.grade + 1 {
                return Err(bad(
                    format!("coefficients[{k}]"),
                    format!(
                        "{} entries, grade {} needs {}",
                        row.len(),
                        doc.grade,
                        doc.grade + 1
                    ),
                ));
            }
            if k > 0 && doc.knots[k - 1] == *knot {
                return Err(bad(
                    format!("knots[{k}]"),
                    "repeats the previous knot".into(),
                ));
            }
            let coeffs = row.iter().map(|&c| c.into()).collect();
            records.push(LocalTaylor::new((*knot).into(), coeffs)?);
        }
        Blendstring::new(records)
    }
}
