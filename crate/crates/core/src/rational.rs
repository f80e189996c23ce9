//! Exact rational time values.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Every time quantity in the crate. Always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational number: {:?}", self.0)
    }
}

impl core::error::Error for ParseRationalError {}

/// Parses `"a"` or `"a/b"` (optional leading `-`). No decimals, no whitespace.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let ok_digits = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((a, b)) => {
            if !ok_digits(a) || b.is_empty() || !b.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let den = BigInt::from_str(b).map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(BigInt::from_str(a).map_err(|_| err())?, den))
        }
        None => {
            if !ok_digits(s) {
                return Err(err());
            }
            Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| err())?))
        }
    }
}

/// Canonical text: `"a"` for integers, `"a/b"` otherwise.
pub fn format(q: &Rational) -> String {
    q.to_string()
}

pub(crate) fn sum<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub(crate) fn is_pos(q: &Rational) -> bool {
    q.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-5/4", "2/3"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(format(&parse("4/2").unwrap()), "2");
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1.5", "1/0", "a", "1/", "/2", " 1", "1/-2", "--1"] {
            assert!(parse(s).is_err(), "{s}");
        }
    }
}
