//! Exact rationals and their text forms.
//!
//! Every scalar in the crate is a [`Rational`]. The wire form is the
//! canonical lowest-terms string `p/q`, or `p` when the denominator is 1.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `p/q`, or a finite decimal such as `-0.125`.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
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
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mantissa: BigInt =
            format!("{}{}", if digits.is_empty() { "0" } else { digits }, frac).parse().map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), frac.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Parses a comma-separated list of rationals. An empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse).collect()
}

pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn is_integer_valued(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Truncated decimal expansion of `r^(1/n)` with `digits` places, computed by
/// integer root extraction on `floor(r * 10^(n*digits))`.
pub fn decimal_root(r: &Rational, n: u32, digits: u32) -> String {
    assert!(n >= 1, "root index must be positive");
    assert!(!r.is_negative(), "root of a negative rational");
    let scale = num::pow(BigInt::from(10), (n * digits) as usize);
    let scaled = (r * Rational::from_integer(scale)).floor().to_integer();
    let root = scaled.nth_root(n);
    render_fixed(&root, digits)
}

/// Truncated decimal rendering of a rational with `digits` places.
pub fn decimal(r: &Rational, digits: u32) -> String {
    let scale = num::pow(BigInt::from(10), digits as usize);
    let scaled = (r.abs() * Rational::from_integer(scale)).floor().to_integer();
    let body = render_fixed(&scaled, digits);
    if r.is_negative() && !scaled.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

fn render_fixed(scaled: &BigInt, digits: u32) -> String {
    debug_assert!(scaled.sign() != Sign::Minus);
    let s = scaled.to_string();
    let d = digits as usize;
    if d == 0 {
        return s;
    }
    let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (whole, frac) = padded.split_at(padded.len() - d);
    format!("{whole}.{frac}")
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Largest integer `<= r`.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
pub(crate) fn gcd_is_one(r: &Rational) -> bool {
    num::Integer::gcd(r.numer(), r.denom()).is_one()
}

/// `serde` adapters that encode rationals as canonical strings.
pub mod serde_str {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::super::Rational;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&super::super::format(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| super::super::parse(s).map_err(D::Error::custom)).collect()
        }
    }
}
