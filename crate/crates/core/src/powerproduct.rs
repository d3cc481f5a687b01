//! Positive reals of the form `prod p^(e_p)` with rational exponents,
//! optionally times a decimal literal for values without a closed form.
//!
//! Exact values compare exactly: the ratio of two power products is raised
//! to the least common denominator of its exponents, which leaves a rational
//! number. Anything involving a literal is compared through decimal
//! evaluation with guard digits.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::num::{factorize, floor_nth_root, fmt_rational, parse_rational, Rational};

/// Significant precision kept for literals raised to fractional powers.
const LITERAL_DIGITS: u32 = 40;
/// Decimal places used by guarded comparisons (20 shown + 20 guard).
const GUARD_DIGITS: u32 = 40;
/// Internal evaluation precision.
const EVAL_DIGITS: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerProduct {
    factors: BTreeMap<u64, Rational>,
    literal: Option<Rational>,
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

impl PowerProduct {
    pub fn one() -> Self {
        Self {
            factors: BTreeMap::new(),
            literal: None,
        }
    }

    pub fn prime_power(p: u64, e: Rational) -> Self {
        let mut out = Self::one();
        out.insert(p, e);
        out
    }

    fn insert(&mut self, p: u64, e: Rational) {
        let entry = self.factors.entry(p).or_insert_with(Rational::zero);
        *entry += e;
        if entry.is_zero() {
            self.factors.remove(&p);
        }
    }

    /// Exact form of a positive rational.
    pub fn from_rational(q: &Rational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Precondition(format!("{} is not positive", fmt_rational(q))));
        }
        let mut out = Self::one();
        let num = q.numer().to_biguint().expect("positive");
        let den = q.denom().to_biguint().expect("positive");
        for (p, e) in factorize(&num) {
            out.insert(p, Rational::from_integer(e.into()));
        }
        for (p, e) in factorize(&den) {
            out.insert(p, -Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn from_integer(n: u64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into())).expect("positive")
    }

    /// Inexact value given by a positive decimal (stored as the rational it denotes).
    pub fn literal(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::Precondition("literal must be positive".into()));
        }
        if value.is_one() {
            return Ok(Self::one());
        }
        Ok(Self {
            factors: BTreeMap::new(),
            literal: Some(value),
        })
    }

    pub fn is_exact(&self) -> bool {
        self.literal.is_none()
    }

    pub fn factors(&self) -> &BTreeMap<u64, Rational> {
        &self.factors
    }

    pub fn literal_value(&self) -> Option<&Rational> {
        self.literal.as_ref()
    }

    /// The exact value as a rational, when every exponent is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        if !self.is_exact() || self.factors.values().any(|e| !e.is_integer()) {
            return None;
        }
        let mut q = Rational::one();
        for (p, e) in &self.factors {
            let b = Rational::from_integer((*p).into());
            let k = e.to_integer().to_i64().expect("small exponent");
            q *= crate::num::rational_pow(&b, k);
        }
        Some(q)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &other.factors {
            out.insert(*p, e.clone());
        }
        out.literal = match (&self.literal, &other.literal) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a * b),
        };
        out
    }

    pub fn recip(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|(p, e)| (*p, -e.clone())).collect(),
            literal: self.literal.as_ref().map(|l| l.recip()),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// `self^e`. A literal raised to a non-integer power is rounded to
    /// 40 decimal places.
    pub fn pow(&self, e: &Rational) -> Self {
        let factors = self
            .factors
            .iter()
            .map(|(p, x)| (*p, x * e))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        let literal = self.literal.as_ref().map(|l| literal_pow(l, e));
        Self { factors, literal }
    }

    pub fn pow_int(&self, n: i64) -> Self {
        self.pow(&Rational::from_integer(n.into()))
    }

    /// `(V, L)` with `self = V^(1/L)` for the exact part.
    fn radical(&self) -> (Rational, u64) {
        let l = self
            .factors
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let l64 = l.to_u64().expect("small exponent denominators");
        let lq = Rational::from_integer(l);
        let mut v = Rational::one();
        for (p, e) in &self.factors {
            let k = (e * &lq).to_integer().to_i64().expect("small exponent");
            v *= crate::num::rational_pow(&Rational::from_integer((*p).into()), k);
        }
        (v, l64)
    }

    /// `floor(value * 10^k)` (exact for exact values; for literals the
    /// literal is multiplied in after truncating the exact part).
    fn scaled_floor(&self, k: u32) -> BigInt {
        let (v, l) = self.radical();
        let l32 = u32::try_from(l).expect("exponent denominator fits");
        let exact = floor_nth_root(&(v * Rational::from_integer(pow10(k * l32))), l32);
        let exact = BigInt::from(exact);
        match &self.literal {
            None => exact,
            Some(lit) => (Rational::from_integer(exact) * lit).floor().to_integer(),
        }
    }

    /// Decimal string rounded to `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let extra = 10;
        let f = self.scaled_floor(digits + extra);
        let (q, r) = f.div_mod_floor(&pow10(extra));
        let rounded = if r * BigInt::from(2) >= pow10(extra) { q + 1 } else { q };
        let s = rounded.to_string();
        let d = digits as usize;
        if d == 0 {
            return s;
        }
        let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (whole, frac) = s.split_at(s.len() - d);
        format!("{whole}.{frac}")
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17).parse().unwrap_or(f64::NAN)
    }

    /// Exact comparison; `None` when either side carries a literal.
    pub fn cmp_exact(&self, other: &Self) -> Option<Ordering> {
        if !self.is_exact() || !other.is_exact() {
            return None;
        }
        let (v, _) = self.div(other).radical();
        Some(v.cmp(&Rational::one()))
    }

    /// Exact comparison when possible, otherwise decimal comparison with
    /// 20 guard digits. Values that cannot be separated at that precision
    /// give [`Error::Ambiguous`].
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if let Some(o) = self.cmp_exact(other) {
            return Ok(o);
        }
        let a = self.scaled_floor(GUARD_DIGITS);
        let b = other.scaled_floor(GUARD_DIGITS);
        // each side is within a couple of units of the last place
        let gap = (&a - &b).abs();
        if gap <= BigInt::from(4) {
            return Err(Error::Ambiguous(self.to_string(), other.to_string()));
        }
        Ok(a.cmp(&b))
    }

    pub fn min_of(&self, other: &Self) -> Result<Self> {
        Ok(if self.compare(other)? == Ordering::Greater { other.clone() } else { self.clone() })
    }

    /// Decimal at `EVAL_DIGITS` places, used by tests as an independent check.
    pub fn eval_floor(&self) -> BigInt {
        self.scaled_floor(EVAL_DIGITS)
    }

    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::PowerProduct(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut out = Self::one();
        let mut rest = t.as_str();
        let mut divide = false;
        loop {
            let (term, tail) = split_term(rest).ok_or_else(bad)?;
            let mut v = parse_term(term).ok_or_else(bad)?;
            if divide {
                v = v.recip();
            }
            out = out.mul(&v);
            if tail.is_empty() {
                break;
            }
            divide = tail.starts_with('/');
            rest = &tail[1..];
        }
        Ok(out)
    }
}

fn literal_pow(l: &Rational, e: &Rational) -> Rational {
    if e.is_integer() {
        let k = e.to_integer().to_i64().expect("small exponent");
        return crate::num::rational_pow(l, k);
    }
    let num = e.numer().to_i64().expect("small exponent");
    let den = e.denom().to_u32().expect("small exponent");
    let base = crate::num::rational_pow(l, num);
    let scale = pow10(LITERAL_DIGITS * den);
    let root: BigUint = floor_nth_root(&(base * Rational::from_integer(scale)), den);
    Rational::new(BigInt::from(root), pow10(LITERAL_DIGITS))
}

/// Splits off the first factor, respecting parentheses in exponents.
fn split_term(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' | '/' if depth == 0 => {
                if i == 0 {
                    return None;
                }
                return Some((&s[..i], &s[i..]));
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    (depth == 0).then_some((s, ""))
}

fn parse_term(t: &str) -> Option<PowerProduct> {
    let (base, exp) = match t.split_once('^') {
        Some((b, e)) => (b, Some(e)),
        None => (t, None),
    };
    let e = match exp {
        None => Rational::one(),
        Some(e) => {
            let inner = e.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(e);
            if inner.contains('.') {
                return None;
            }
            parse_rational(inner).ok()?
        }
    };
    let b = if base.contains('.') {
        PowerProduct::literal(parse_rational(base).ok()?).ok()?
    } else {
        let n: BigInt = base.parse().ok()?;
        PowerProduct::from_rational(&Rational::from_integer(n)).ok()?
    };
    Some(b.pow(&e))
}

fn fmt_exp(p: u64, e: &Rational) -> String {
    if e.is_one() {
        p.to_string()
    } else if e.is_integer() {
        format!("{p}^{e}")
    } else {
        format!("{p}^({})", fmt_rational(e))
    }
}

fn fmt_literal(l: &Rational) -> String {
    // terminating decimals print as decimals
    let mut d = l.denom().clone();
    let mut k = 0u32;
    for p in [2u32, 5] {
        while (&d % p).is_zero() {
            d /= p;
        }
    }
    if d.is_one() {
        while !(pow10(k) % l.denom()).is_zero() {
            k += 1;
        }
        let scaled = (l * Rational::from_integer(pow10(k))).to_integer();
        let s = scaled.to_string();
        if k == 0 {
            return s;
        }
        let ku = k as usize;
        let s = if s.len() <= ku { format!("{}{}", "0".repeat(ku + 1 - s.len()), s) } else { s };
        let (w, f) = s.split_at(s.len() - ku);
        format!("{w}.{f}")
    } else {
        fmt_rational(l)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", fmt_rational(&q));
        }
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        if let Some(l) = &self.literal {
            num.push(fmt_literal(l));
        }
        for (p, e) in &self.factors {
            if e.is_positive() {
                num.push(fmt_exp(*p, e));
            } else {
                den.push(fmt_exp(*p, &-e.clone()));
            }
        }
        let top = if num.is_empty() { "1".to_string() } else { num.join("*") };
        if den.is_empty() {
            write!(f, "{top}")
        } else {
            write!(f, "{top}/{}", den.join("/"))
        }
    }
}

impl std::str::FromStr for PowerProduct {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        Self::parse(s)
    }
}

impl Serialize for PowerProduct {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let factors: BTreeMap<String, String> = self
            .factors
            .iter()
            .map(|(p, e)| (p.to_string(), fmt_rational(e)))
            .collect();
        let mut st = s.serialize_struct("PowerProduct", 2)?;
        st.serialize_field("factors", &factors)?;
        st.serialize_field("literal", &self.literal.as_ref().map(fmt_literal))?;
        st.end()
    }
}

#[derive(Deserialize)]
struct RawPowerProduct {
    #[serde(default)]
    factors: BTreeMap<String, String>,
    #[serde(default)]
    literal: Option<String>,
}

impl<'de> Deserialize<'de> for PowerProduct {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawPowerProduct::deserialize(d)?;
        let mut out = PowerProduct::one();
        for (p, e) in raw.factors {
            let p: u64 = p.parse().map_err(de::Error::custom)?;
            let prime = factorize(&BigUint::from(p));
            if prime.len() != 1 || prime[0].1 != 1 {
                return Err(de::Error::custom(format!("{p} is not a prime")));
            }
            let e = parse_rational(&e).map_err(de::Error::custom)?;
            out.insert(p, e);
        }
        if let Some(l) = raw.literal {
            let l = parse_rational(&l).map_err(de::Error::custom)?;
            let lit = PowerProduct::literal(l).map_err(de::Error::custom)?;
            out = out.mul(&lit);
        }
        Ok(out)
    }
}
