//! JSON forms of algebras, elements and `A`-points. Elements are sparse maps
//! from basis names (`"1"`, `"t1"`, `"z1z2"`, ...) to coefficients in basis
//! order; algebras record their presentation `(k, l, s)` and the ideal
//! generators as coefficient maps.

use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraElement, Monomial, SuperWeilAlgebra};
use crate::apoints::APoint;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rational_to_string, Rational, Scalar};
use crate::superfunc::SuperDomain;

fn bad(what: impl Into<String>) -> Error {
    Error::Malformed(what.into())
}

fn monomial_key(alg: &SuperWeilAlgebra, key: &str) -> Result<Monomial> {
    Monomial::parse_with(key, alg.even_generators(), alg.odd_generators(), "t", "z")
        .ok_or_else(|| bad(format!("{key:?} is not a monomial of K[{}|{}]", alg.even_generators(), alg.odd_generators())))
}

impl SuperWeilAlgebra {
    pub fn to_json(&self) -> Value {
        let ideal: Vec<Value> = self
            .generators()
            .iter()
            .map(|g| {
                let obj: Map<String, Value> = g
                    .iter()
                    .map(|(m, c)| (m.display_with("t", "z"), json!(rational_to_string(c))))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "k": self.even_generators(),
            "l": self.odd_generators(),
            "s": self.truncation(),
            "ideal": ideal,
            "dim": self.dim(),
            "basis": self.basis_names(),
        })
    }

    /// Inverse of [`SuperWeilAlgebra::to_json`]; `dim` and `basis` are
    /// derived and ignored on input.
    pub fn from_json(v: &Value) -> Result<SuperWeilAlgebra> {
        let num = |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| bad(format!("algebra JSON: missing {k}")));
        let (k, l, s) = (num("k")? as usize, num("l")? as usize, num("s")?);
        if s == 0 {
            return Err(Error::InvalidTruncation(0));
        }
        let gens = match v.get("ideal") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|g| {
                    g.as_object()
                        .ok_or_else(|| bad("ideal generators are coefficient maps"))?
                        .iter()
                        .map(|(key, c)| {
                            let m = Monomial::parse_with(key, k, l, "t", "z")
                                .ok_or_else(|| bad(format!("bad monomial {key:?}")))?;
                            Ok((m, Rational::from_json(c)?))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(bad("algebra JSON: ideal must be a list")),
        };
        let ambient = SuperWeilAlgebra::truncated(k, l, s as i64)?;
        let elems: Vec<AlgebraElement<Rational>> =
            gens.iter().map(|g| AlgebraElement::from_terms(&ambient, g)).collect();
        ambient.quotient(&elems)
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn to_json(&self) -> Value {
        let obj: Map<String, Value> = self.terms().into_iter().map(|(n, c)| (n, c.to_json())).collect();
        Value::Object(obj)
    }

    /// Keys may be any monomial of the ambient; non-basis ones are reduced.
    pub fn from_json(algebra: &SuperWeilAlgebra, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| bad("element JSON must be an object"))?;
        let terms = obj
            .iter()
            .map(|(key, c)| Ok((monomial_key(algebra, key)?, S::from_json(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraElement::from_terms(algebra, &terms))
    }
}

impl<S: Scalar> APoint<S> {
    pub fn to_json(&self) -> Value {
        let list = |v: &[AlgebraElement<S>]| v.iter().map(AlgebraElement::to_json).collect::<Vec<_>>();
        json!({
            "domain": self.domain().to_json(),
            "algebra": self.algebra().to_json(),
            "even": list(self.even_values()),
            "odd": list(self.odd_values()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let domain = SuperDomain::from_json(v.get("domain").ok_or_else(|| bad("point JSON: missing domain"))?)?;
        let algebra = SuperWeilAlgebra::from_json(v.get("algebra").ok_or_else(|| bad("point JSON: missing algebra"))?)?;
        let list = |k: &str| -> Result<Vec<AlgebraElement<S>>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("point JSON: missing {k}")))?
                .iter()
                .map(|e| AlgebraElement::from_json(&algebra, e))
                .collect()
        };
        APoint::new(&domain, &algebra, list("even")?, list("odd")?)
    }
}

/// Scalars given as JSON strings or numbers; rationals also accept
/// decimal literals.
pub fn scalar_list<S: Scalar>(text: &str) -> Result<Vec<S>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            let x = x.trim();
            match parse_rational(x) {
                Ok(r) => Ok(S::from_rational(&r)),
                Err(_) => S::from_json(&Value::String(x.to_string())),
            }
        })
        .collect()
}
