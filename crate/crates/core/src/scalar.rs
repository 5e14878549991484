//! Numeric abstraction shared by every algorithm in the crate.
//!
//! Probabilities, values, factors and expected values are all carried in a
//! [`Scalar`]. Binary floats (`f32`, `f64`) are the working types; the exact
//! rational [`BigRational`] lets the exact pipeline (transform, elimination,
//! enumeration, expected-value recursion) run without rounding at all.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// A real-number type usable as probability and value.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Default tolerance for "row sums to one" checks.
    fn row_tolerance() -> Self;

    /// Two candidates closer than this (on the `[0, 1]` scale) are a tie.
    fn tie_epsilon() -> Self;

    /// Parses a decimal literal such as `-0.25` or `1e-3`.
    fn parse_decimal(text: &str) -> Option<Self>;

    fn is_finite_value(&self) -> bool;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts an `f64`; for rationals the conversion is exact.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(Self::zero)
    }

    fn from_count(count: usize) -> Self {
        Self::from_usize(count).expect("count representable")
    }
}

impl Scalar for f64 {
    fn row_tolerance() -> Self {
        1e-9
    }

    fn tie_epsilon() -> Self {
        1e-12
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        text.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn row_tolerance() -> Self {
        1e-5
    }

    fn tie_epsilon() -> Self {
        1e-6
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        text.parse::<f32>().ok().filter(|v| v.is_finite())
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for BigRational {
    fn row_tolerance() -> Self {
        BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
    }

    fn tie_epsilon() -> Self {
        BigRational::zero()
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(at) => (&text[..at], text[at + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, fraction) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fraction.is_empty() {
        return None;
    }
    if !whole.bytes().chain(fraction.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{whole}{fraction}");
    let numerator = BigInt::from_str_radix(if joined.is_empty() { "0" } else { &joined }, 10).ok()?;
    let scale = exponent - fraction.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numerator * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numerator, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Maximum and minimum of a nonempty slice under `PartialOrd`.
pub(crate) fn min_max<T: Scalar>(values: &[T]) -> Option<(T, T)> {
    let first = values.first()?;
    let (mut lo, mut hi) = (first, first);
    for v in &values[1..] {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    Some((lo.clone(), hi.clone()))
}

/// Index of the largest value; earlier indices win ties within `epsilon`.
pub(crate) fn argmax_with_ties<T: Scalar>(values: &[T], epsilon: &T) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            None => best = Some(i),
            Some(b) => {
                if v.clone() > values[b].clone() + epsilon.clone() {
                    best = Some(i);
                }
            }
        }
    }
    best
}

/// Formats with at most six significant digits, trailing zeros trimmed.
pub fn format_significant(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let sci = format!("{:.5e}", value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, value)).to_string()
}

fn trim_zeros(text: &str) -> &str {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.')
    } else {
        text
    }
}

/// Fixed six-decimal rendering used for reported probabilities and values.
pub fn format_fixed(value: f64) -> String {
    let text = format!("{:.6}", value);
    if text.starts_with('-') && text[1..].bytes().all(|b| b == b'0' || b == b'.') {
        text[1..].to_string()
    } else {
        text
    }
}
