//! Number types shared by every predicate.
//!
//! Two modes exist: exact arbitrary-precision rationals and `f64`. All
//! geometry is generic over [`Scalar`], so a single computation is always in
//! one mode. Mixing modes does not type-check:
//!
//! ```compile_fail
//! use monge::geom::{orient, HPoint, Rational};
//! let p = HPoint::<f64>::affine(0.0, 0.0);
//! let q = HPoint::<Rational>::affine_int(1, 0);
//! let r = HPoint::<f64>::affine(0.0, 1.0);
//! orient(&p, &q, &r);
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Relative tolerance used by every float-mode predicate.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for ScalarMode {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "exact" => Ok(ScalarMode::Exact),
            "float" => Ok(ScalarMode::Float),
            other => Err(ParseScalarError(format!("unknown scalar mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number: {0}")]
pub struct ParseScalarError(pub String);

/// Field element used for coordinates, radii and metric parameters.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const MODE: ScalarMode;

    /// Converts a float. Exact mode keeps the binary value exactly; `None`
    /// for non-finite input.
    fn from_float(x: f64) -> Option<Self>;

    fn to_float(&self) -> f64;

    fn from_int(n: i64) -> Self;

    /// Parses integers, decimals (`-1.25`, `3e-2`) and fractions (`7/3`).
    /// Decimals are read exactly in exact mode.
    fn parse_text(text: &str) -> Result<Self, ParseScalarError>;

    /// JSON form: rationals as strings, floats as numbers.
    fn to_json(&self) -> serde_json::Value;

    /// Positive factor used to bring line coefficients to canonical form.
    /// Float: `hypot(a, b)` (or `|c|` for the line at infinity). Exact: the
    /// magnitude of the first nonzero coefficient.
    fn line_scale(a: &Self, b: &Self, c: &Self) -> Self;

    fn is_exact() -> bool {
        Self::MODE == ScalarMode::Exact
    }

    fn tolerance() -> f64 {
        match Self::MODE {
            ScalarMode::Exact => 0.0,
            ScalarMode::Float => FLOAT_TOL,
        }
    }

    /// Sign of `self`, treating values within `tolerance * (1 + scale)` of
    /// zero as zero in float mode.
    fn sign_tol(&self, scale: f64) -> Ordering {
        let band = Self::tolerance() * (1.0 + scale.abs());
        if Self::is_exact() {
            return self.partial_cmp(&Self::zero()).unwrap_or(Ordering::Equal);
        }
        let v = self.to_float();
        if v.abs() <= band {
            Ordering::Equal
        } else if v > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Comparison with the same tolerance policy as [`Scalar::sign_tol`].
    fn cmp_tol(&self, other: &Self, scale: f64) -> Ordering {
        (self.clone() - other.clone()).sign_tol(scale)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_float(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_float(&self) -> f64 {
        *self
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn parse_text(text: &str) -> Result<Self, ParseScalarError> {
        let t = text.trim();
        let value = if let Some((n, d)) = t.split_once('/') {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|_| ParseScalarError(t.to_string()))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|_| ParseScalarError(t.to_string()))?;
            if d == 0.0 {
                return Err(ParseScalarError(format!("zero denominator in `{t}`")));
            }
            n / d
        } else {
            t.parse().map_err(|_| ParseScalarError(t.to_string()))?
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ParseScalarError(format!("non-finite value `{t}`")))
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn line_scale(a: &Self, b: &Self, c: &Self) -> Self {
        let h = a.hypot(*b);
        if h > 0.0 {
            h
        } else {
            c.abs()
        }
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn from_float(x: f64) -> Option<Self> {
        Rational::from_f64(x)
    }

    fn to_float(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn parse_text(text: &str) -> Result<Self, ParseScalarError> {
        parse_rational(text)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn line_scale(a: &Self, b: &Self, c: &Self) -> Self {
        [a, b, c]
            .into_iter()
            .find(|v| !v.is_zero())
            .map(|v| v.abs())
            .unwrap_or_else(Rational::one)
    }
}

/// Exact parse of `p/q`, integers and decimal literals with an optional
/// exponent.
pub fn parse_rational(text: &str) -> Result<Rational, ParseScalarError> {
    let t = text.trim();
    let err = || ParseScalarError(t.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(ParseScalarError(format!("zero denominator in `{t}`")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(&all_digits, 10).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Formats a float with at most `digits` significant digits and no trailing
/// zeros (`5`, `1.25992104989487`).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0".to_string()
        } else {
            x.to_string()
        };
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x);
    format!("{rounded}")
}
