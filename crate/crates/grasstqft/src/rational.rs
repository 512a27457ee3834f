//! Arbitrary-precision rational scalars.
//!
//! `Rational` is [`num_rational::BigRational`], which keeps exactly the invariant
//! the engine needs: the fraction is always reduced and the denominator positive.
//! The wire format is the decimal string `p/q`, with `/q` omitted when `q = 1`;
//! this is what `Display` already produces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Rational `num / den`; panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse the `p/q` wire format (sign on the numerator, `/q` optional).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::parse(0, format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| Error::parse(0, format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(0, format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// The `p/q` wire format.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Extract an exact integer, failing on a proper fraction.
pub fn to_bigint_exact(q: &Rational) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::NotAnInteger(q.to_string()))
    }
}

/// `base^exp` for signed exponents; `exp < 0` inverts (error on zero base).
pub fn rat_pow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp < 0 && base.is_zero() {
        return Err(Error::DivisionByZero(1));
    }
    let exp = i32::try_from(exp).map_err(|_| Error::Overflow("rational exponent"))?;
    Ok(base.pow(exp))
}

/// (-1)^e as a rational.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// |q| as a rational.
pub fn rat_abs(q: &Rational) -> Rational {
    q.abs()
}
