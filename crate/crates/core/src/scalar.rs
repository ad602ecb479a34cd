//! Exact scalars.
//!
//! Everything in the solver is generic over [`Field`], an ordered field with
//! exact arithmetic. The production instantiation is [`Rational`]
//! (arbitrary-precision `BigRational`); fixed-width `Ratio<i64>` and
//! `Ratio<i128>` also implement the trait and are handy for small problems,
//! but overflow panics there, so anything whose coefficients grow (Klee-Minty
//! and friends) must use `Rational`.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision exact fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Ordered field with exact arithmetic.
///
/// Floats are deliberately excluded: pivot selection depends on exact sign
/// tests and exact lexicographic ties.
pub trait Field:
    Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// Converts from the canonical big rational, `None` if it does not fit.
    fn from_rational(q: &Rational) -> Option<Self>;

    fn to_rational(&self) -> Rational;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
            .expect("every field holds small integers")
    }
}

impl Field for Rational {
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

macro_rules! fixed_ratio_field {
    ($int:ty, $to:ident) => {
        impl Field for Ratio<$int> {
            fn from_rational(q: &Rational) -> Option<Self> {
                let numer = q.numer().$to()?;
                let denom = q.denom().$to()?;
                Some(Ratio::new(numer, denom))
            }

            fn to_rational(&self) -> Rational {
                Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(v as $int)
            }
        }
    };
}

fixed_ratio_field!(i64, to_i64);
fixed_ratio_field!(i128, to_i128);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed number `{input}`")]
pub struct ParseRationalError {
    pub input: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("vector length mismatch: {left} vs {right}")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// Builds `p/q` in canonical form.
pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Rational, ArithError> {
    let q = q.into();
    if q.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    Ok(Rational::new(p.into(), q))
}

/// Integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `a / b`, refusing a zero divisor instead of panicking.
pub fn checked_div<T: Field>(a: &T, b: &T) -> Result<T, ArithError> {
    if b.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(a.clone() / b.clone())
}

/// Parses an integer, a fraction `p/q`, or a finite decimal.
///
/// Decimals accept either `.` or `,` as the separator and are converted
/// exactly: `3,125` is `25/8`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        input: text.to_string(),
    };
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let digits = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());

    let value = if let Some((p, q)) = body.split_once('/') {
        if !digits(p) || !digits(q) {
            return Err(err());
        }
        let q = BigInt::from_str(q).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        Rational::new(BigInt::from_str(p).map_err(|_| err())?, q)
    } else if let Some((whole, frac)) = body.split_once(['.', ',']) {
        if !digits(whole) || !digits(frac) {
            return Err(err());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let numer = BigInt::from_str(&format!("{whole}{frac}")).map_err(|_| err())?;
        Rational::new(numer, scale)
    } else {
        if !digits(body) {
            return Err(err());
        }
        Rational::from_integer(BigInt::from_str(body).map_err(|_| err())?)
    };
    Ok(if negative { -value } else { value })
}

/// Lexicographic comparison: the first differing coordinate decides.
pub fn lex_compare<T: Field>(u: &[T], v: &[T]) -> Result<Ordering, LengthMismatch> {
    if u.len() != v.len() {
        return Err(LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter()
        .zip(v)
        .map(|(a, b)| a.cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}

/// Inner product of two equal-length slices.
pub fn dot<T: Field>(u: &[T], v: &[T]) -> T {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Decimal rendering, rounding half away from zero, trailing zeros trimmed.
pub fn to_decimal_string(value: &Rational, places: usize, comma: bool) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = (scaled + half).floor().to_integer();
    if rounded.is_zero() {
        return "0".to_string();
    }
    let whole = &rounded / &scale;
    let frac = &rounded % &scale;
    let mut out = String::new();
    if value.is_negative() {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if places > 0 && !frac.is_zero() {
        let frac = format!("{:0>width$}", frac.to_string(), width = places);
        out.push(if comma { ',' } else { '.' });
        out.push_str(frac.trim_end_matches('0'));
    }
    out
}
