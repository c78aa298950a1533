//! Serde helpers for exact numbers.
//!
//! Integers of any size travel as JSON number tokens (serde_json is built with
//! `arbitrary_precision`); rationals travel as canonical `"p/q"` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, Deserialize, Deserializer};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde_json::Number;

pub(crate) fn number_from_bigint(n: &BigInt) -> Number {
    Number::from_str(&n.to_string()).expect("decimal integer is a valid JSON number")
}

pub(crate) fn bigint_from_number(n: &Number) -> Result<BigInt, String> {
    let text = n.to_string();
    BigInt::from_str(&text).map_err(|_| format!("expected an integer, found {text}"))
}

/// Canonical `p/q` form with `q > 0` and `gcd(p, q) = 1`; integers keep the `/1`.
pub fn format_rational(q: &BigRational) -> String {
    // BigRational is always stored reduced with a positive denominator.
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| format!("bad rational numerator in {text:?}"))?;
    let q = BigInt::from_str(q).map_err(|_| format!("bad rational denominator in {text:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(BigRational::new(p, q))
}

pub(crate) fn half(twice: &BigInt) -> BigRational {
    BigRational::new(twice.clone(), BigInt::from(2))
}

pub(crate) fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        number_from_bigint(value).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let n = Number::deserialize(de)?;
        bigint_from_number(&n).map_err(de::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&number_from_bigint(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<Number>::deserialize(de)?;
        raw.iter()
            .map(|n| bigint_from_number(n).map_err(de::Error::custom))
            .collect()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(de)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}
