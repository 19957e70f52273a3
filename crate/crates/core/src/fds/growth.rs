use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ConcreteFds, FdsError};
use crate::exactalg::{format_rational, parse_rational};

/// Extended real in `{-inf} ∪ [0, inf]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GrowthRate {
    MinusInfinity,
    Finite(BigRational),
    Infinity,
}

impl GrowthRate {
    pub fn finite(value: BigRational) -> Result<Self, FdsError> {
        if value.is_negative() {
            return Err(FdsError::InvalidProfile(format!("negative growth rate {value}")));
        }
        Ok(GrowthRate::Finite(value))
    }

    pub fn integer(n: i64) -> Self {
        assert!(n >= 0, "growth rates are never negative");
        GrowthRate::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    /// Extended-real sum; `-inf` absorbs everything.
    pub fn add(&self, other: &Self) -> Self {
        use GrowthRate::*;
        match (self, other) {
            (MinusInfinity, _) | (_, MinusInfinity) => MinusInfinity,
            (Infinity, _) | (_, Infinity) => Infinity,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            GrowthRate::MinusInfinity => f64::NEG_INFINITY,
            GrowthRate::Infinity => f64::INFINITY,
            GrowthRate::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialOrd for GrowthRate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GrowthRate {
    fn cmp(&self, other: &Self) -> Ordering {
        use GrowthRate::*;
        match (self, other) {
            (MinusInfinity, MinusInfinity) | (Infinity, Infinity) => Ordering::Equal,
            (MinusInfinity, _) | (_, Infinity) => Ordering::Less,
            (_, MinusInfinity) | (Infinity, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for GrowthRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthRate::MinusInfinity => f.write_str("-inf"),
            GrowthRate::Infinity => f.write_str("inf"),
            GrowthRate::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl FromStr for GrowthRate {
    type Err = FdsError;

    fn from_str(s: &str) -> Result<Self, FdsError> {
        match s.trim() {
            "-inf" | "-∞" => Ok(GrowthRate::MinusInfinity),
            "inf" | "∞" | "+inf" => Ok(GrowthRate::Infinity),
            t => parse_rational(t)
                .ok_or_else(|| FdsError::InvalidProfile(format!("bad growth rate {t:?}")))
                .and_then(GrowthRate::finite),
        }
    }
}

impl From<GrowthRate> for String {
    fn from(g: GrowthRate) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for GrowthRate {
    type Error = FdsError;
    fn try_from(s: String) -> Result<Self, FdsError> {
        s.parse()
    }
}

/// Asymptotic class of a colimit rank function `a(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ProfileWire", try_from = "ProfileWire")]
pub enum RankProfile {
    Zero,
    /// Eventually constant and positive.
    Bounded(u64),
    /// Comparable to `x^degree`.
    Polynomial(u32),
    /// Comparable to `base^x`.
    Exponential(BigRational),
}

impl RankProfile {
    pub fn validate(self) -> Result<Self, FdsError> {
        match &self {
            RankProfile::Bounded(0) => Err(FdsError::InvalidProfile("bounded profile needs c > 0".into())),
            RankProfile::Polynomial(0) => Err(FdsError::InvalidProfile("polynomial degree must be >= 1".into())),
            RankProfile::Exponential(b) if b <= &BigRational::one() => {
                Err(FdsError::InvalidProfile(format!("exponential base {b} must exceed 1")))
            }
            _ => Ok(self),
        }
    }

    /// Profile of the tensor product of two systems.
    pub fn tensor(&self, other: &Self) -> Self {
        use RankProfile::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (Exponential(a), Exponential(b)) => Exponential(a * b),
            (Exponential(a), _) | (_, Exponential(a)) => Exponential(a.clone()),
            (Polynomial(a), Polynomial(b)) => Polynomial(a + b),
            (Polynomial(a), Bounded(_)) | (Bounded(_), Polynomial(a)) => Polynomial(*a),
            (Bounded(a), Bounded(b)) => Bounded(a.saturating_mul(*b)),
        }
    }

    /// Profile of the direct sum of two systems.
    pub fn direct_sum(&self, other: &Self) -> Self {
        use RankProfile::*;
        match (self, other) {
            (Zero, p) | (p, Zero) => p.clone(),
            (Exponential(a), Exponential(b)) => Exponential(a.max(b).clone()),
            (Exponential(a), _) | (_, Exponential(a)) => Exponential(a.clone()),
            (Polynomial(a), Polynomial(b)) => Polynomial(*a.max(b)),
            (Polynomial(a), Bounded(_)) | (Bounded(_), Polynomial(a)) => Polynomial(*a),
            (Bounded(a), Bounded(b)) => Bounded(a.saturating_add(*b)),
        }
    }

    /// Representative value of `a(x)` at integer `x >= 1`: `0`, `c`, `x^d`,
    /// or `floor(base^x)`.
    pub fn sample(&self, x: u32) -> BigInt {
        match self {
            RankProfile::Zero => BigInt::zero(),
            RankProfile::Bounded(c) => BigInt::from(*c),
            RankProfile::Polynomial(d) => num_traits::pow(BigInt::from(x), *d as usize),
            RankProfile::Exponential(b) => num_traits::pow(b.clone(), x as usize).floor().to_integer(),
        }
    }
}

impl fmt::Display for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankProfile::Zero => f.write_str("zero"),
            RankProfile::Bounded(c) => write!(f, "bounded:{c}"),
            RankProfile::Polynomial(d) => write!(f, "poly:{d}"),
            RankProfile::Exponential(b) => write!(f, "exp:{}", format_rational(b)),
        }
    }
}

impl FromStr for RankProfile {
    type Err = FdsError;

    /// `zero`, `bounded:c`, `poly:n`, `exp:b`.
    fn from_str(s: &str) -> Result<Self, FdsError> {
        let bad = || FdsError::InvalidProfile(format!("bad profile {s:?}"));
        let (class, param) = match s.trim().split_once(':') {
            Some((c, p)) => (c, Some(p)),
            None => (s.trim(), None),
        };
        let p = match (class, param) {
            ("zero", None) => RankProfile::Zero,
            ("bounded", Some(c)) => RankProfile::Bounded(c.parse().map_err(|_| bad())?),
            ("bounded", None) => RankProfile::Bounded(1),
            ("poly", Some(d)) | ("polynomial", Some(d)) => RankProfile::Polynomial(d.parse().map_err(|_| bad())?),
            ("exp", Some(b)) | ("exponential", Some(b)) => RankProfile::Exponential(parse_rational(b).ok_or_else(bad)?),
            ("exp", None) | ("exponential", None) => RankProfile::Exponential(BigRational::from_integer(2.into())),
            _ => return Err(bad()),
        };
        p.validate()
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileWire {
    class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<String>,
}

impl From<RankProfile> for ProfileWire {
    fn from(p: RankProfile) -> Self {
        let text = p.to_string();
        match text.split_once(':') {
            Some((c, v)) => ProfileWire {
                class: c.to_string(),
                param: Some(v.to_string()),
            },
            None => ProfileWire { class: text, param: None },
        }
    }
}

impl TryFrom<ProfileWire> for RankProfile {
    type Error = FdsError;
    fn try_from(w: ProfileWire) -> Result<Self, FdsError> {
        match w.param {
            Some(p) => format!("{}:{}", w.class, p).parse(),
            None => w.class.parse(),
        }
    }
}

/// Growth rate determined by a symbolic class.
pub fn growth_rate(p: &RankProfile) -> GrowthRate {
    match p {
        RankProfile::Zero => GrowthRate::MinusInfinity,
        RankProfile::Bounded(_) => GrowthRate::zero(),
        RankProfile::Polynomial(d) => GrowthRate::integer(i64::from(*d)),
        RankProfile::Exponential(_) => GrowthRate::Infinity,
    }
}

/// Empirical growth on a finite window. Never a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    /// `None` when `a` vanishes on the whole window (growth `-inf`).
    pub slope: Option<f64>,
    pub points_used: usize,
    pub kind: String,
}

impl GrowthEstimate {
    pub fn is_minus_infinity(&self) -> bool {
        self.slope.is_none()
    }
}

impl fmt::Display for GrowthEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slope {
            None => write!(f, "-inf (estimate)"),
            Some(s) => write!(f, "{s:.4} (estimate, {} points)", self.points_used),
        }
    }
}

/// Least-squares slope of `log a(x)` against `log x` over points with
/// `a(x) > 0`.
pub fn estimate_growth_rate(v: &ConcreteFds) -> Result<GrowthEstimate, FdsError> {
    let a = v.a_table()?;
    let pts: Vec<(f64, f64)> = v
        .grid()
        .iter()
        .zip(&a)
        .filter(|(_, &ai)| ai > 0)
        .map(|(x, &ai)| (x.to_f64().unwrap_or(f64::NAN).ln(), (ai as f64).ln()))
        .collect();
    Ok(GrowthEstimate {
        slope: if pts.is_empty() { None } else { Some(log_slope(&pts)) },
        points_used: pts.len(),
        kind: "estimate".into(),
    })
}

/// Ordinary least-squares slope; zero for fewer than two distinct abscissae.
pub fn log_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}
