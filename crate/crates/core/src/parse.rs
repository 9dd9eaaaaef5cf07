//! Complex literals as written on the command line and in problem files.
//!
//! Accepted forms: `re`, `imi`, `re+imi`, `re-imi`, `i`, `-i`, where each
//! real part is a decimal literal (`-1.5e3`) or an exact integer fraction
//! (`-1/3`). A fraction is divided once, so it is correctly rounded.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError {
    /// Byte offset of the offending text within the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for LiteralError {}

fn err(offset: usize, message: impl Into<String>) -> LiteralError {
    LiteralError {
        offset,
        message: message.into(),
    }
}

/// A real decimal literal or integer fraction `p/q`.
pub fn parse_real<S: Scalar>(text: &str, offset: usize) -> Result<S::Real, LiteralError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(err(offset, "empty number"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let is_int = |s: &str| {
            let s = s.strip_prefix(['+', '-']).unwrap_or(s);
            !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
        };
        if !is_int(num.trim()) || !is_int(den.trim()) {
            return Err(err(
                offset,
                format!("fraction `{t}` must be integer/integer"),
            ));
        }
        let n = S::parse_real(num.trim()).ok_or_else(|| err(offset, "bad numerator"))?;
        let d = S::parse_real(den.trim()).ok_or_else(|| err(offset, "bad denominator"))?;
        if d == num_traits::Zero::zero() {
            return Err(err(offset, "zero denominator"));
        }
        return Ok(n / d);
    }
    // Rust's float parser also accepts "inf" and "NaN"; reject them.
    let plain = t.strip_prefix(['+', '-']).unwrap_or(t);
    if !plain.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return Err(err(offset, format!("`{t}` is not a number")));
    }
    let v = S::parse_real(t).ok_or_else(|| err(offset, format!("`{t}` is not a number")))?;
    if !num_traits::Float::is_finite(v) {
        return Err(err(offset, format!("`{t}` is not finite")));
    }
    Ok(v)
}

pub fn parse_complex<S: Scalar>(text: &str) -> Result<S, LiteralError> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    if t.is_empty() {
        return Err(err(0, "empty complex literal"));
    }
    let zero = <S::Real as num_traits::Zero>::zero();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(S::from_parts(parse_real::<S>(t, lead)?, zero));
    };
    // split before the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_text, im_text, im_offset) = match split {
        Some(k) => (&body[..k], &body[k..], lead + k),
        None => ("", body, lead),
    };
    let im = match im_text {
        "" | "+" => num_traits::One::one(),
        "-" => -<S::Real as num_traits::One>::one(),
        other => parse_real::<S>(other, im_offset)?,
    };
    let re = if re_text.is_empty() {
        zero
    } else {
        parse_real::<S>(re_text, lead)?
    };
    Ok(S::from_parts(re, im))
}

/// A comma-separated list of complex literals.
pub fn parse_list<S: Scalar>(text: &str) -> Result<Vec<S>, LiteralError> {
    let mut offset = 0;
    let mut out = Vec::new();
    for piece in text.split(',') {
        let v = parse_complex::<S>(piece).map_err(|e| err(offset + e.offset, e.message))?;
        out.push(v);
        offset += piece.len() + 1;
    }
    Ok(out)
}
