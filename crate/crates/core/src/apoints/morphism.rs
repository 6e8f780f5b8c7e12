use serde_json::{json, Value};

use super::point::{eval_expr, APoint};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superfunc::{parse_expr, Expr, Section, SuperDomain};

/// A morphism of superdomains `U → V` given by the pullbacks of the target
/// coordinates: `m` even and `n` odd sections on `U`.
#[derive(Clone, Debug)]
pub struct DomainMorphism {
    source: SuperDomain,
    target: SuperDomain,
    even: Vec<Expr>,
    odd: Vec<Expr>,
}

impl DomainMorphism {
    pub fn new(source: &SuperDomain, target: &SuperDomain, even: Vec<Expr>, odd: Vec<Expr>) -> Result<Self> {
        if even.len() != target.even_dim() || odd.len() != target.odd_dim() {
            return Err(Error::Dimension(format!(
                "{} needs {}|{} pullbacks, got {}|{}",
                target,
                target.even_dim(),
                target.odd_dim(),
                even.len(),
                odd.len()
            )));
        }
        for e in even.iter().chain(&odd) {
            Section::new(source, e.clone())?;
        }
        for (i, e) in even.iter().enumerate() {
            if !e.parity().is_even() {
                return Err(Error::Parity(format!("pullback of x{} is not even: {e}", i + 1)));
            }
        }
        for (j, e) in odd.iter().enumerate() {
            if !e.parity().is_odd() {
                return Err(Error::Parity(format!("pullback of theta{} is not odd: {e}", j + 1)));
            }
        }
        Ok(DomainMorphism {
            source: source.clone(),
            target: target.clone(),
            even,
            odd,
        })
    }

    /// Pullbacks written in the expression grammar.
    pub fn parse(source: &SuperDomain, target: &SuperDomain, even: &[&str], odd: &[&str]) -> Result<Self> {
        let p = |t: &&str| parse_expr(t, source.even_dim(), source.odd_dim());
        DomainMorphism::new(
            source,
            target,
            even.iter().map(p).collect::<Result<_>>()?,
            odd.iter().map(p).collect::<Result<_>>()?,
        )
    }

    pub fn identity(u: &SuperDomain) -> Self {
        DomainMorphism {
            source: u.clone(),
            target: u.clone(),
            even: (0..u.even_dim()).map(Expr::x).collect(),
            odd: (0..u.odd_dim()).map(Expr::theta).collect(),
        }
    }

    pub fn source(&self) -> &SuperDomain {
        &self.source
    }

    pub fn target(&self) -> &SuperDomain {
        &self.target
    }

    pub fn even_pullbacks(&self) -> &[Expr] {
        &self.even
    }

    pub fn odd_pullbacks(&self) -> &[Expr] {
        &self.odd
    }

    /// Pullbacks in target coordinate order, even first.
    pub fn pullbacks(&self) -> impl Iterator<Item = &Expr> {
        self.even.iter().chain(&self.odd)
    }

    /// `x_A ↦ x_A ∘ φ*`; fails if the image base point leaves the target
    /// region.
    pub fn apply<S: Scalar>(&self, x: &APoint<S>) -> Result<APoint<S>> {
        let d = x.domain();
        if d.even_dim() != self.source.even_dim() || d.odd_dim() != self.source.odd_dim() {
            return Err(Error::Dimension("point is not on the morphism's source".into()));
        }
        let a = x.algebra();
        let ev = |e: &Expr| eval_expr(e, a, x.even_values(), x.odd_values());
        let even = self.even.iter().map(ev).collect::<Result<_>>()?;
        let odd = self.odd.iter().map(ev).collect::<Result<_>>()?;
        APoint::new(&self.target, a, even, odd)
    }

    /// `next ∘ self`, by substituting our pullbacks into `next`'s.
    pub fn then(&self, next: &DomainMorphism) -> Result<DomainMorphism> {
        if self.target.even_dim() != next.source.even_dim() || self.target.odd_dim() != next.source.odd_dim() {
            return Err(Error::Dimension("morphisms are not composable".into()));
        }
        let sub = |e: &Expr| e.substitute(&self.even, &self.odd);
        DomainMorphism::new(
            &self.source,
            &next.target,
            next.even.iter().map(sub).collect::<Result<_>>()?,
            next.odd.iter().map(sub).collect::<Result<_>>()?,
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "even": self.even.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "odd": self.odd.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: &str| Error::Malformed(format!("morphism JSON: {w}"));
        let source = SuperDomain::from_json(v.get("source").ok_or_else(|| bad("source"))?)?;
        let target = SuperDomain::from_json(v.get("target").ok_or_else(|| bad("target"))?)?;
        let strings = |k: &str| -> Result<Vec<String>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(k))?
                .iter()
                .map(|s| s.as_str().map(str::to_owned).ok_or_else(|| bad(k)))
                .collect()
        };
        let even = strings("even")?;
        let odd = strings("odd")?;
        let even: Vec<&str> = even.iter().map(String::as_str).collect();
        let odd: Vec<&str> = odd.iter().map(String::as_str).collect();
        DomainMorphism::parse(&source, &target, &even, &odd)
    }
}
