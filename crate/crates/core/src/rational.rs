//! Exact rational scalars and their canonical text form.
//!
//! Every scalar in the engine is a `BigRational`; nothing downstream ever
//! rounds, so separability and minimal-set decisions are tolerance-free.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p/q"` or a plain integer string. The denominator must be nonzero;
/// the result is reduced and sign-normalized.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |reason: &str| Error::BadRational { literal: text.to_string(), reason: reason.to_string() };
    let mut parts = text.trim().splitn(2, '/');
    let numer = parts.next().ok_or_else(|| bad("empty literal"))?;
    let numer: BigInt = numer.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
    match parts.next() {
        None => Ok(Rational::from_integer(numer)),
        Some(denom) => {
            let denom: BigInt = denom.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
            if denom.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Canonical text form: reduced, `-p/q` with positive `q`, bare integer when
/// the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn sq_norm(a: &[Rational]) -> Rational {
    dot(a, a)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -4/8 ").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("5/-10").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(matches!(parse_rational("1/0"), Err(Error::BadRational { .. })));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
        assert_eq!(format_rational(&ratio(2, -4)), "-1/2");
        assert_eq!(format_rational(&int(6)), "6");
        assert_eq!(format_rational(&ratio(6, 3)), "2");
    }
}
