//! Rational scalars and the handful of integer helpers the rest of the
//! crate leans on.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"3.52006"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Rounds to the nearest integer, ties away from zero.
pub fn round_nearest(q: &Rational) -> BigInt {
    q.round().to_integer()
}

/// Floor of the square root of a non-negative rational.
pub fn floor_sqrt(q: &Rational) -> BigInt {
    assert!(!q.is_negative(), "floor_sqrt of a negative rational");
    let floor = q.floor().to_integer();
    floor.sqrt()
}

/// Floor of the `n`-th root of a non-negative rational.
pub fn floor_nth_root(q: &Rational, n: u32) -> BigUint {
    assert!(!q.is_negative());
    let floor = q.floor().to_integer();
    floor.to_biguint().unwrap_or_default().nth_root(n)
}

pub fn rational_pow(q: &Rational, e: i64) -> Rational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down until they fit
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Trial-division factorisation of a positive integer into (prime, exponent).
pub fn factorize(n: &BigUint) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    let mut p: u64 = 2;
    while BigUint::from(p) * BigUint::from(p) <= rest {
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let last = rest
            .to_u64()
            .expect("prime factor larger than 64 bits is outside the supported range");
        out.push((last, 1));
    }
    out
}

pub fn sign_of(q: &Rational) -> Sign {
    if q.is_zero() {
        Sign::NoSign
    } else if q.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("3.52006").unwrap(), rat(352006, 100000));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(6, -4)), "-3/2");
    }

    #[test]
    fn factorizes_small_numbers() {
        assert_eq!(factorize(&BigUint::from(720u32)), vec![(2, 4), (3, 2), (5, 1)]);
        assert_eq!(factorize(&BigUint::from(97u32)), vec![(97, 1)]);
        assert!(factorize(&BigUint::from(1u32)).is_empty());
    }

    #[test]
    fn roots_floor() {
        assert_eq!(floor_sqrt(&rat(17, 1)), BigInt::from(4));
        assert_eq!(floor_sqrt(&rat(1, 4)), BigInt::from(0));
        assert_eq!(floor_nth_root(&int(1000), 3), BigUint::from(10u32));
    }
}
