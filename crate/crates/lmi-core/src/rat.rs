//! Exact rational scalars.
//!
//! Thin helpers around [`num::BigRational`]: construction from machine
//! integers, parsing of the `"p/q"` text form used by all file formats, and
//! canonical printing. `BigRational` already guarantees the invariants we
//! need (fully reduced, positive denominator, canonical zero).

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer used everywhere in the crate.
pub type Int = BigInt;

/// Arbitrary-precision rational used everywhere in the crate.
pub type Rat = BigRational;

/// Error raised when a rational literal cannot be parsed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer part in rational literal `{0}`")]
    BadInteger(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// Builds a rational from a machine integer.
pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational with zero denominator");
    Rat::new(Int::from(num), Int::from(den))
}

/// Parses `"p"` or `"p/q"` with optional sign and surrounding whitespace.
pub fn parse_rat(text: &str) -> Result<Rat, ParseRatError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num: Int = num_text
        .parse()
        .map_err(|_| ParseRatError::BadInteger(text.to_owned()))?;
    let den: Int = match den_text {
        Some(d) => d
            .parse()
            .map_err(|_| ParseRatError::BadInteger(text.to_owned()))?,
        None => Int::one(),
    };
    if den.is_zero() {
        return Err(ParseRatError::ZeroDenominator(text.to_owned()));
    }
    Ok(Rat::new(num, den))
}

/// Prints a rational as `"p"` when integral, `"p/q"` otherwise.
pub fn rat_to_string(value: &Rat) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Sign of a rational as `-1`, `0`, or `1`.
pub fn rat_sign(value: &Rat) -> i8 {
    match value.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Greatest common divisor of two integers, always non-negative.
pub fn int_gcd(a: &Int, b: &Int) -> Int {
    num::Integer::gcd(a, b)
}

/// Least common multiple of the denominators of an iterator of rationals.
/// Returns 1 for an empty iterator.
pub fn denominator_lcm<'a>(values: impl Iterator<Item = &'a Rat>) -> Int {
    let mut acc = Int::one();
    for v in values {
        acc = num::Integer::lcm(&acc, v.denom());
    }
    acc
}

/// Greatest common divisor of the absolute values of an iterator of
/// integers, ignoring zeros. Returns 0 for all-zero (or empty) input.
pub fn content<'a>(values: impl Iterator<Item = &'a Int>) -> Int {
    let mut acc = Int::zero();
    for v in values {
        if !v.is_zero() {
            acc = int_gcd(&acc, v);
            if acc.is_one() {
                return acc;
            }
        }
    }
    acc.abs()
}

/// Rounds a positive-width dyadic-style rational down to a decimal string
/// with `digits` fractional digits (round half away from zero).
pub fn rat_to_decimal(value: &Rat, digits: u32) -> String {
    let scale = Int::from(10u32).pow(digits);
    let scaled = value * Rat::from_integer(scale.clone());
    let two = Int::from(2);
    // round half away from zero: round(|x|) = floor(|x| + 1/2)
    let abs = scaled.abs();
    let rounded_abs = (abs.numer() * &two + abs.denom()) / (abs.denom() * &two);
    let rounded = if scaled.is_negative() {
        -rounded_abs
    } else {
        rounded_abs
    };
    let sign = if rounded.is_negative() { "-" } else { "" };
    let mag = rounded.abs();
    let int_part = &mag / &scale;
    let frac_part = &mag % &scale;
    let mut frac_str = frac_part.to_string();
    while (frac_str.len() as u32) < digits {
        frac_str.insert(0, '0');
    }
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_str}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_fraction() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat(" 4 / -8 ").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_bad_literals() {
        assert_eq!(parse_rat(""), Err(ParseRatError::Empty));
        assert!(matches!(parse_rat("x"), Err(ParseRatError::BadInteger(_))));
        assert!(matches!(
            parse_rat("1/0"),
            Err(ParseRatError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(rat_to_string(&rat(-4, 6)), "-2/3");
        assert_eq!(rat_to_string(&rat_int(7)), "7");
        assert_eq!(rat_to_string(&Rat::zero()), "0");
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(rat_to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(rat_to_decimal(&rat(-1, 2), 1), "-0.5");
        assert_eq!(rat_to_decimal(&rat(2, 3), 3), "0.667");
        assert_eq!(rat_to_decimal(&rat_int(5), 2), "5.00");
    }

    #[test]
    fn content_and_lcm() {
        let vals = [rat(1, 6), rat(3, 4)];
        assert_eq!(denominator_lcm(vals.iter()), Int::from(12));
        let ints = [Int::from(6), Int::from(-9), Int::from(15)];
        assert_eq!(content(ints.iter()), Int::from(3));
    }
}
