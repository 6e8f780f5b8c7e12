use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::expr::{Expr, Var};
use super::normalize::Components;
use super::parse::{check_range, parse_expr};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type RegionPredicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// An open piece of `K^{p|q}`: an open box in the even coordinates,
/// optionally cut down by a predicate. Complex coordinates are tested by
/// modulus.
#[derive(Clone)]
pub struct SuperDomain {
    p: usize,
    q: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    predicate: Option<(String, RegionPredicate)>,
}

impl SuperDomain {
    /// All of `K^{p|q}`.
    pub fn full(p: usize, q: usize) -> SuperDomain {
        SuperDomain {
            p,
            q,
            lower: vec![f64::NEG_INFINITY; p],
            upper: vec![f64::INFINITY; p],
            predicate: None,
        }
    }

    /// Open box `lower < x < upper`.
    pub fn boxed(q: usize, lower: Vec<f64>, upper: Vec<f64>) -> Result<SuperDomain> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidRegion("bounds of different lengths".into()));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::InvalidRegion(format!("empty interval for x{}: ({lo}, {hi})", i + 1)));
            }
        }
        Ok(SuperDomain {
            p: lower.len(),
            q,
            lower,
            upper,
            predicate: None,
        })
    }

    /// Refines the region by a named predicate.
    pub fn with_predicate(mut self, name: impl Into<String>, pred: RegionPredicate) -> SuperDomain {
        self.predicate = Some((name.into(), pred));
        self
    }

    pub fn even_dim(&self) -> usize {
        self.p
    }

    pub fn odd_dim(&self) -> usize {
        self.q
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_full(&self) -> bool {
        self.predicate.is_none()
            && self.lower.iter().all(|x| *x == f64::NEG_INFINITY)
            && self.upper.iter().all(|x| *x == f64::INFINITY)
    }

    pub fn contains_coords(&self, x: &[f64]) -> bool {
        x.len() == self.p
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo < v && v < hi)
            && self.predicate.as_ref().is_none_or(|(_, f)| f(x))
    }

    pub fn contains<S: Scalar>(&self, x: &[S]) -> bool {
        let coords: Vec<f64> = x.iter().map(Scalar::region_coord).collect();
        self.contains_coords(&coords)
    }

    pub fn check_contains<S: Scalar>(&self, x: &[S]) -> Result<()> {
        if x.len() != self.p {
            return Err(Error::Dimension(format!("expected {} coordinates, got {}", self.p, x.len())));
        }
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideRegion(format!(
                "({}) is not in {self}",
                x.iter().map(|v| v.to_json().to_string()).collect::<Vec<_>>().join(", ")
            )))
        }
    }

    /// `U × V`: even coordinates of `U` then `V`, odd likewise.
    pub fn product(&self, other: &SuperDomain) -> SuperDomain {
        let mut lower = self.lower.clone();
        lower.extend_from_slice(&other.lower);
        let mut upper = self.upper.clone();
        upper.extend_from_slice(&other.upper);
        let predicate = match (&self.predicate, &other.predicate) {
            (None, None) => None,
            (a, b) => {
                let (a, b) = (a.clone(), b.clone());
                let p = self.p;
                let name = format!(
                    "{} × {}",
                    a.as_ref().map_or("·", |x| x.0.as_str()),
                    b.as_ref().map_or("·", |x| x.0.as_str())
                );
                let f: RegionPredicate = Arc::new(move |x: &[f64]| {
                    a.as_ref().is_none_or(|(_, f)| f(&x[..p])) && b.as_ref().is_none_or(|(_, f)| f(&x[p..]))
                });
                Some((name, f))
            }
        };
        SuperDomain {
            p: self.p + other.p,
            q: self.q + other.q,
            lower,
            upper,
            predicate,
        }
    }

    /// Same dimensions and box; predicates compare by name.
    pub fn same_as(&self, other: &SuperDomain) -> bool {
        self.p == other.p
            && self.q == other.q
            && self.lower == other.lower
            && self.upper == other.upper
            && self.predicate.as_ref().map(|x| &x.0) == other.predicate.as_ref().map(|x| &x.0)
    }

    /// Bounds as JSON, infinite ends as `null`. Predicates cannot be
    /// serialized and are reported by name only.
    pub fn to_json(&self) -> Value {
        let bound = |v: &f64| if v.is_finite() { json!(v) } else { Value::Null };
        let mut out = json!({
            "p": self.p,
            "q": self.q,
            "lower": self.lower.iter().map(bound).collect::<Vec<_>>(),
            "upper": self.upper.iter().map(bound).collect::<Vec<_>>(),
        });
        if let Some((name, _)) = &self.predicate {
            out["predicate"] = json!(name);
        }
        out
    }

    pub fn from_json(v: &Value) -> Result<SuperDomain> {
        let bad = |w: &str| Error::Malformed(format!("domain JSON: {w}"));
        let dim = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(k));
        let (p, q) = (dim("p")?, dim("q")?);
        if v.get("predicate").is_some() {
            return Err(bad("predicate regions cannot be loaded from JSON"));
        }
        let bounds = |k: &str, inf: f64| -> Result<Vec<f64>> {
            match v.get(k) {
                None => Ok(vec![inf; p]),
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|x| match x {
                        Value::Null => Ok(inf),
                        x => x.as_f64().ok_or_else(|| bad(k)),
                    })
                    .collect(),
                _ => Err(bad(k)),
            }
        };
        let (lower, upper) = (bounds("lower", f64::NEG_INFINITY)?, bounds("upper", f64::INFINITY)?);
        if lower.len() != p || upper.len() != p {
            return Err(bad("bounds must have p entries"));
        }
        SuperDomain::boxed(q, lower, upper)
    }
}

impl fmt::Display for SuperDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U ⊂ K^{{{}|{}}}", self.p, self.q)?;
        if !self.is_full() {
            let parts: Vec<String> = self
                .lower
                .iter()
                .zip(&self.upper)
                .enumerate()
                .map(|(i, (lo, hi))| format!("{lo} < x{} < {hi}", i + 1))
                .collect();
            write!(f, " ({}", parts.join(", "))?;
            if let Some((name, _)) = &self.predicate {
                write!(f, ", {name}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SuperDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A section of the structure sheaf over a superdomain.
#[derive(Clone, Debug)]
pub struct Section {
    domain: SuperDomain,
    expr: Expr,
}

impl Section {
    pub fn new(domain: &SuperDomain, expr: Expr) -> Result<Section> {
        check_range(&expr, domain.even_dim(), domain.odd_dim())?;
        Ok(Section {
            domain: domain.clone(),
            expr,
        })
    }

    pub fn parse(domain: &SuperDomain, text: &str) -> Result<Section> {
        let expr = parse_expr(text, domain.even_dim(), domain.odd_dim())?;
        Ok(Section {
            domain: domain.clone(),
            expr,
        })
    }

    pub fn domain(&self) -> &SuperDomain {
        &self.domain
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derive(&self, v: Var) -> Section {
        Section {
            domain: self.domain.clone(),
            expr: self.expr.derive(v),
        }
    }

    pub fn components(&self) -> Result<Components> {
        self.expr.components()
    }

    /// The value of the `θ^∅` component at a point of the region.
    pub fn eval_classical<S: Scalar>(&self, x: &[S]) -> Result<S> {
        self.domain.check_contains(x)?;
        self.expr.eval_scalar(x)
    }

    pub fn mul(&self, other: &Section) -> Result<Section> {
        self.check_same_domain(other)?;
        Section::new(&self.domain, self.expr.mul(&other.expr))
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        self.check_same_domain(other)?;
        Section::new(&self.domain, self.expr.add(&other.expr))
    }

    fn check_same_domain(&self, other: &Section) -> Result<()> {
        if self.domain.same_as(&other.domain) {
            Ok(())
        } else {
            Err(Error::Dimension(format!("sections on {} and {}", self.domain, other.domain)))
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
