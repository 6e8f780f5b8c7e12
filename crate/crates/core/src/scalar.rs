//! The ground field: exact rationals, doubles and complex doubles behind one
//! trait. Algebra structure constants are always exact; elements, points and
//! morphisms are generic over [`Scalar`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Rational,
    Float,
    Complex,
}

/// A structure constant of an algebra. Almost all of them are `±1` for the
/// algebras used in practice, which keeps element multiplication cheap.
#[derive(Debug, Clone, PartialEq)]
pub enum Coef {
    One,
    MinusOne,
    Other(Rational, f64),
}

impl Coef {
    pub fn from_rational(r: Rational) -> Coef {
        if r.is_one() {
            Coef::One
        } else if (-r.clone()).is_one() {
            Coef::MinusOne
        } else {
            let f = r.to_f64().unwrap_or(f64::NAN);
            Coef::Other(r, f)
        }
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Coef::One => <Rational as One>::one(),
            Coef::MinusOne => -<Rational as One>::one(),
            Coef::Other(r, _) => r.clone(),
        }
    }

    pub fn negated(&self) -> Coef {
        match self {
            Coef::One => Coef::MinusOne,
            Coef::MinusOne => Coef::One,
            Coef::Other(r, f) => Coef::Other(-r.clone(), -f),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn recip(&self) -> Option<Self>;
    /// Absolute value (modulus) as a double, used for tolerances.
    fn magnitude(&self) -> f64;
    /// The real coordinate used for region membership: the value itself for
    /// real fields, the modulus for complex scalars.
    fn region_coord(&self) -> f64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_coef(c: &Coef) -> Self {
        match c {
            Coef::One => Self::one(),
            Coef::MinusOne => -Self::one(),
            Coef::Other(r, _) => Self::from_rational(r),
        }
    }

    fn exp(&self) -> Result<Self> {
        Err(Error::NeedsFloat("exp".into()))
    }
    fn ln(&self) -> Result<Self> {
        Err(Error::NeedsFloat("log".into()))
    }
    fn sin(&self) -> Result<Self> {
        Err(Error::NeedsFloat("sin".into()))
    }
    fn cos(&self) -> Result<Self> {
        Err(Error::NeedsFloat("cos".into()))
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Equality up to `rel_tol` relative to the larger magnitude (floor 1).
    /// Exact fields ignore the tolerance.
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        if Self::KIND == ScalarKind::Rational {
            return self == other;
        }
        let scale = self.magnitude().max(other.magnitude()).max(1.0);
        (self.clone() - other.clone()).magnitude() <= rel_tol * scale
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"n"`, `"n/d"` or a finite decimal literal (`"1.25"`, `"2e-3"`)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Malformed(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(t).ok_or_else(bad)
}

pub(crate) fn parse_decimal(t: &str) -> Option<Rational> {
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| num_traits::Inv::inv(self.clone()))
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn region_coord(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Malformed(format!("expected rational, got {other}"))),
        }
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn from_coef(c: &Coef) -> Self {
        match c {
            Coef::One => 1.0,
            Coef::MinusOne => -1.0,
            Coef::Other(_, f) => *f,
        }
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn recip(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn region_coord(&self) -> f64 {
        *self
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.to_string()))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Malformed(format!("bad float {n}"))),
            Value::String(s) => {
                if let Ok(r) = parse_rational(s) {
                    return Ok(r.to_f64().unwrap_or(f64::NAN));
                }
                s.trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad float {s:?}")))
            }
            other => Err(Error::Malformed(format!("expected float, got {other}"))),
        }
    }
    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }
    fn ln(&self) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::FunctionDomain {
                func: "log".into(),
                at: self.to_string(),
            });
        }
        Ok(f64::ln(*self))
    }
    fn sin(&self) -> Result<Self> {
        Ok(f64::sin(*self))
    }
    fn cos(&self) -> Result<Self> {
        Ok(f64::cos(*self))
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_coef(c: &Coef) -> Self {
        Complex64::new(f64::from_coef(c), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn recip(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| self.inv())
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn region_coord(&self) -> f64 {
        self.norm()
    }
    fn to_json(&self) -> Value {
        serde_json::json!({ "re": self.re.to_json(), "im": self.im.to_json() })
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(m) => {
                let re = m.get("re").map(f64::from_json).transpose()?.unwrap_or(0.0);
                let im = m.get("im").map(f64::from_json).transpose()?.unwrap_or(0.0);
                Ok(Complex64::new(re, im))
            }
            other => Ok(Complex64::new(f64::from_json(other)?, 0.0)),
        }
    }
    fn exp(&self) -> Result<Self> {
        Ok(Complex64::exp(*self))
    }
    fn ln(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::FunctionDomain {
                func: "log".into(),
                at: "0".into(),
            });
        }
        Ok(Complex64::ln(*self))
    }
    fn sin(&self) -> Result<Self> {
        Ok(Complex64::sin(*self))
    }
    fn cos(&self) -> Result<Self> {
        Ok(Complex64::cos(*self))
    }
}
