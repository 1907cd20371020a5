//! Exact rational numbers and their textual forms.
//!
//! Accepted inputs are integers (`3`, `-2`), fractions (`3/10`) and plain
//! decimals (`0.3`, `-.25`, `1e-2`). Decimals are converted exactly, so
//! `0.1` is `1/10` and never a binary float.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(bad)?;
        let d = parse_decimal(d.trim()).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (whole, frac) = match mantissa.split_once('.') {
        Some((w, f)) => (w, f),
        None => (mantissa, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Exact `a/b` form (`a` alone for integers).
pub fn format_exact(q: &Rational) -> String {
    q.to_string()
}

/// Rounded decimal for human-facing output; callers mark it as approximate.
pub fn format_approx(q: &Rational) -> String {
    match q.to_f64() {
        Some(v) => {
            let s = format!("{v:.6}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            if s == "-0" {
                "0".to_string()
            } else {
                s.to_string()
            }
        }
        None => format_exact(q),
    }
}

pub fn is_probability(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/10").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("-.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("1e-2").unwrap(), ratio(1, 100));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(parse_rational("0.5/2").unwrap(), ratio(1, 4));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a", "1.2.3", ".", "--1", "1/"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_exact(&ratio(2, 8)), "1/4");
        assert_eq!(format_exact(&int(1)), "1");
        assert_eq!(format_approx(&ratio(1, 3)), "0.333333");
        assert_eq!(format_approx(&ratio(1, 4)), "0.25");
        assert_eq!(format_approx(&int(0)), "0");
    }
}
