//! Serde adapters: big numbers travel as decimal strings ("3", "-2/5").

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactalg::{format_rational, parse_rational};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumText {
    Int(i64),
    Text(String),
}

fn rational_from(t: NumText) -> Result<BigRational, String> {
    match t {
        NumText::Int(v) => Ok(BigRational::from_integer(BigInt::from(v))),
        NumText::Text(s) => parse_rational(&s).ok_or_else(|| format!("bad rational {s:?}")),
    }
}

fn bigint_from(t: NumText) -> Result<BigInt, String> {
    match t {
        NumText::Int(v) => Ok(BigInt::from(v)),
        NumText::Text(s) => s.trim().parse().map_err(|_| format!("bad integer {s:?}")),
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        rational_from(NumText::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<String> = v.iter().map(format_rational).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<NumText>::deserialize(d)?
            .into_iter()
            .map(|t| rational_from(t).map_err(D::Error::custom))
            .collect()
    }
}

pub mod rational_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        Vec::<Vec<NumText>>::deserialize(d)?
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|t| rational_from(t).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<NumText>::deserialize(d)?
            .into_iter()
            .map(|t| bigint_from(t).map_err(D::Error::custom))
            .collect()
    }
}

pub mod bigint_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<NumText>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|t| bigint_from(t).map_err(D::Error::custom)).collect())
            .collect()
    }
}
