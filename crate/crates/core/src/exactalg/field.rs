use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Coefficient field for exact linear algebra.
///
/// `Prime(p)` elements are stored as rationals with denominator one and
/// numerator in `0..p`. `Rational` values are kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Default for Field {
    fn default() -> Self {
        Field::F2
    }
}

impl Field {
    pub const F2: Field = Field::Prime(2);

    pub fn is_prime(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Brings an arbitrary rational into canonical form for this field.
    pub fn reduce(&self, value: &BigRational) -> Result<BigRational, AlgebraError> {
        match *self {
            Field::Rational => Ok(value.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(p);
                let num = value.numer().mod_floor(&p);
                let den = value.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(AlgebraError::NotInField {
                        value: value.to_string(),
                        field: *self,
                    });
                }
                let inv = mod_inverse(&den, &p);
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> BigRational {
        self.reduce(&BigRational::from_integer(BigInt::from(v)))
            .expect("integers always reduce")
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.normalize(-a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match *self {
            Field::Rational => Some(a.recip()),
            Field::Prime(p) => {
                let p = BigInt::from(p);
                Some(BigRational::from_integer(mod_inverse(a.numer(), &p)))
            }
        }
    }

    // Inputs are already canonical, so only integer reduction is needed for F_p.
    fn normalize(&self, v: BigRational) -> BigRational {
        match *self {
            Field::Rational => v,
            Field::Prime(p) => {
                debug_assert!(v.is_integer());
                BigRational::from_integer(v.to_integer().mod_floor(&BigInt::from(p)))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "q".to_string(),
            Field::Prime(p) => format!("f{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(p)
}

fn is_small_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Field {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rational" || t == "qq" {
            return Ok(Field::Rational);
        }
        let digits = t.strip_prefix("fp:").or_else(|| t.strip_prefix('f'));
        match digits.and_then(|d| d.parse::<u32>().ok()) {
            Some(p) if is_small_prime(p) => Ok(Field::Prime(p)),
            _ => Err(AlgebraError::UnknownField(s.to_string())),
        }
    }
}

impl From<Field> for String {
    fn from(f: Field) -> String {
        f.name()
    }
}

impl TryFrom<String> for Field {
    type Error = AlgebraError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A single field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScalar {
    field: Field,
    value: BigRational,
}

impl ExactScalar {
    pub fn new(field: Field, value: BigRational) -> Result<Self, AlgebraError> {
        let value = field.reduce(&value)?;
        Ok(Self { field, value })
    }

    pub fn from_i64(field: Field, v: i64) -> Self {
        Self {
            field,
            value: field.from_i64(v),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        self.field.inv(&self.value).map(|value| Self {
            field: self.field,
            value,
        })
    }
}

impl std::ops::Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> ExactScalar {
        assert_eq!(self.field, rhs.field, "field mismatch");
        ExactScalar {
            field: self.field,
            value: self.field.add(&self.value, &rhs.value),
        }
    }
}

impl std::ops::Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> ExactScalar {
        assert_eq!(self.field, rhs.field, "field mismatch");
        ExactScalar {
            field: self.field,
            value: self.field.mul(&self.value, &rhs.value),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Parses "3", "-2/5" into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
