//! Truncated formal series `F_k = Σ f^k_{ν,J}(x) ẋ^ν θ^J` describing natural
//! transformations between functors of `A`-points, their extraction from
//! superdomain morphisms, and a numerical checker for the recursion
//! `∂_i f_{ν,J} = (ν_i + 1) f_{ν+δ_i,J}` that morphism-induced series obey.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::algebra::monomial::{exponents_up_to, mask_indices, Monomial};
use crate::algebra::AlgebraElement;
use crate::apoints::{APoint, DomainMorphism};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::superfunc::{parse_expr, Expr, Var};

/// `(ν, J)` with `J` as an odd mask.
pub type SeriesKey = (Vec<u32>, u64);

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedFormalSeries {
    p: usize,
    q: usize,
    m: usize,
    n: usize,
    order: u32,
    slots: Vec<BTreeMap<SeriesKey, Expr>>,
}

impl TruncatedFormalSeries {
    /// Slots `0..m` are even target coordinates and carry only even `|J|`,
    /// slots `m..m+n` odd ones with odd `|J|`. Coefficients are expressions
    /// in the `p` even source variables; absent keys are zero.
    pub fn new(
        (p, q): (usize, usize),
        (m, n): (usize, usize),
        order: u32,
        slots: Vec<BTreeMap<SeriesKey, Expr>>,
    ) -> Result<Self> {
        if slots.len() != m + n {
            return Err(Error::Dimension(format!("expected {} slots, got {}", m + n, slots.len())));
        }
        for (k, slot) in slots.iter().enumerate() {
            for ((nu, mask), f) in slot {
                let label = || format!("slot {}, key {}", k + 1, key_name(nu, *mask));
                if nu.len() != p || (q < 64 && mask >> q != 0) {
                    return Err(Error::Dimension(label()));
                }
                if nu.iter().sum::<u32>() > order {
                    return Err(Error::Dimension(format!("{}: |ν| exceeds the order {order}", label())));
                }
                if (mask.count_ones() % 2 == 1) != (k >= m) {
                    return Err(Error::Parity(format!("{}: |J| has the wrong parity", label())));
                }
                if f.odd_vars() > 0 || f.even_vars() > p {
                    return Err(Error::CoordinateOutOfRange(format!(
                        "{}: coefficients are functions of x1..x{p} only",
                        label()
                    )));
                }
            }
        }
        Ok(TruncatedFormalSeries {
            p,
            q,
            m,
            n,
            order,
            slots,
        })
    }

    pub fn source_dims(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn target_dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn slots(&self) -> &[BTreeMap<SeriesKey, Expr>] {
        &self.slots
    }

    pub fn coefficient(&self, slot: usize, nu: &[u32], mask: u64) -> Expr {
        self.slots[slot]
            .get(&(nu.to_vec(), mask))
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    /// Replaces one coefficient (zero removes it).
    pub fn with_coefficient(&self, slot: usize, key: SeriesKey, f: Expr) -> Result<Self> {
        let mut slots = self.slots.clone();
        if f.is_zero() {
            slots[slot].remove(&key);
        } else {
            slots[slot].insert(key, f);
        }
        TruncatedFormalSeries::new((self.p, self.q), (self.m, self.n), self.order, slots)
    }

    /// `f^k_{ν,J} = (1/ν!) ∂^ν s_{k,J}` for the components `s_{k,J}` of each
    /// pullback, `|ν| ≤ order`.
    pub fn from_morphism(phi: &DomainMorphism, order: u32) -> Result<Self> {
        let (p, q) = (phi.source().even_dim(), phi.source().odd_dim());
        let (m, n) = (phi.target().even_dim(), phi.target().odd_dim());
        let mut slots = Vec::with_capacity(m + n);
        for pullback in phi.pullbacks() {
            let mut slot = BTreeMap::new();
            for (mask, s_j) in pullback.components()? {
                let mut derivs: BTreeMap<Vec<u32>, Expr> = BTreeMap::from([(vec![0; p], s_j)]);
                for nu in exponents_up_to(p, order) {
                    let d = if nu.iter().all(|&x| x == 0) {
                        derivs[&nu].clone()
                    } else {
                        let i = nu.iter().rposition(|&x| x > 0).unwrap();
                        let mut prev = nu.clone();
                        prev[i] -= 1;
                        let d = derivs[&prev].derive(Var::Even(i));
                        derivs.insert(nu.clone(), d.clone());
                        d
                    };
                    let f = d.scale(&(Rational::from_i64(1) / nu_factorial(&nu)));
                    if !f.is_zero() {
                        slot.insert((nu, mask), f);
                    }
                }
            }
            slots.push(slot);
        }
        TruncatedFormalSeries::new((p, q), (m, n), order, slots)
    }

    /// `F_k(x_A) = Σ f^k_{ν,J}(base) soul^ν θ^J`; needs `height(A) ≤ order`.
    pub fn apply<S: Scalar>(&self, x: &APoint<S>) -> Result<Vec<AlgebraElement<S>>> {
        let a = x.algebra();
        if a.height() > self.order as usize {
            return Err(Error::HeightExceedsTruncation {
                height: a.height(),
                order: self.order as usize,
            });
        }
        let d = x.domain();
        if (d.even_dim(), d.odd_dim()) != (self.p, self.q) {
            return Err(Error::Dimension("point is not on the series' source".into()));
        }
        let base = x.base_point();
        let souls: Vec<AlgebraElement<S>> = x.even_values().iter().map(AlgebraElement::soul).collect();
        let mut out = Vec::with_capacity(self.slots.len());
        for slot in &self.slots {
            let mut acc = AlgebraElement::zero(a);
            for ((nu, mask), f) in slot {
                let mut term = AlgebraElement::one(a);
                for (i, &e) in nu.iter().enumerate() {
                    if e > 0 {
                        term = &term * &souls[i].pow(e);
                    }
                }
                for j in mask_indices(*mask) {
                    term = &term * &x.odd_values()[j];
                }
                if term.is_zero() {
                    continue;
                }
                acc = acc + term.scale(&f.eval_scalar(&base)?);
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Nested-map JSON: one object per slot mapping `x^ν θ^J` names (as
    /// printed by the library, `"1"` for the constant key) to expressions.
    pub fn to_json(&self) -> Value {
        let slots: Vec<Value> = self
            .slots
            .iter()
            .map(|slot| {
                let mut obj = Map::new();
                for ((nu, mask), f) in slot {
                    obj.insert(key_name(nu, *mask), json!(f.to_string()));
                }
                Value::Object(obj)
            })
            .collect();
        json!({
            "source": {"p": self.p, "q": self.q},
            "target": {"m": self.m, "n": self.n},
            "order": self.order,
            "slots": slots,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: &str| Error::Malformed(format!("series JSON: {w}"));
        let num = |path: [&str; 2]| {
            v.get(path[0])
                .and_then(|x| x.get(path[1]))
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(path[1]))
        };
        let (p, q, m, n) = (num(["source", "p"])?, num(["source", "q"])?, num(["target", "m"])?, num(["target", "n"])?);
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| bad("order"))? as u32;
        let slots = v
            .get("slots")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("slots"))?
            .iter()
            .map(|slot| {
                slot.as_object()
                    .ok_or_else(|| bad("slot must be an object"))?
                    .iter()
                    .map(|(key, f)| {
                        let mono = Monomial::parse_with(key, p, q, "x", "theta")
                            .ok_or_else(|| bad(&format!("bad key {key:?}")))?;
                        let text = f.as_str().ok_or_else(|| bad("coefficients are expression strings"))?;
                        Ok(((mono.nu().to_vec(), mono.odd_mask()), parse_expr(text, p, 0)?))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TruncatedFormalSeries::new((p, q), (m, n), order, slots)
    }
}

fn key_name(nu: &[u32], mask: u64) -> String {
    Monomial::new(nu.to_vec(), mask).display_with("x", "theta")
}

fn nu_factorial(nu: &[u32]) -> Rational {
    nu.iter()
        .flat_map(|&n| 1..=n as i64)
        .fold(Rational::from_i64(1), |acc, k| acc * Rational::from_i64(k))
}

/// One failed instance of `∂_i f_{ν,J} = (ν_i + 1) f_{ν+δ_i,J}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Target slot, 1-based.
    pub slot: usize,
    /// Differentiation variable, 1-based.
    pub variable: usize,
    pub key: String,
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Set when a coefficient could not be evaluated at the point.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

pub const NECESSARY_ONLY: &str = "an empty report is necessary, not sufficient: \
     it covers finitely many sample points up to the truncation order";

impl CheckReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                let mut o = json!({
                    "slot": v.slot,
                    "variable": v.variable,
                    "key": v.key,
                    "point": v.point,
                    "lhs": finite_or_null(v.lhs),
                    "rhs": finite_or_null(v.rhs),
                    "residual": finite_or_null(v.residual),
                });
                if let Some(e) = &v.error {
                    o["error"] = json!(e);
                }
                o
            })
            .collect();
        json!({
            "consistent": self.consistent(),
            "checked": self.checked,
            "violations": violations,
            "note": NECESSARY_ONLY,
        })
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Evaluates both sides of the recursion for every slot, variable, `J`
/// present in the slot and `|ν| < order`, at every sample point. A pair
/// counts as violated when `|lhs - rhs| > tol · max(1, |lhs|, |rhs|)`.
pub fn check_comes_from_morphism(series: &TruncatedFormalSeries, points: &[Vec<f64>], tol: f64) -> Result<CheckReport> {
    let p = series.p;
    for pt in points {
        if pt.len() != p {
            return Err(Error::Dimension(format!("sample point {pt:?} does not have {p} coordinates")));
        }
    }
    let mut report = CheckReport {
        checked: 0,
        violations: Vec::new(),
    };
    if series.order == 0 {
        return Ok(report);
    }
    for (k, slot) in series.slots.iter().enumerate() {
        let masks: BTreeSet<u64> = slot.keys().map(|(_, m)| *m).collect();
        for &mask in &masks {
            for nu in exponents_up_to(p, series.order - 1) {
                let f = series.coefficient(k, &nu, mask);
                for i in 0..p {
                    let mut up = nu.clone();
                    up[i] += 1;
                    let lhs_expr = f.derive(Var::Even(i));
                    let rhs_expr = series
                        .coefficient(k, &up, mask)
                        .scale(&Rational::from_i64(nu[i] as i64 + 1));
                    for pt in points {
                        report.checked += 1;
                        let key = key_name(&nu, mask);
                        match (lhs_expr.eval_scalar(pt), rhs_expr.eval_scalar(pt)) {
                            (Ok(lhs), Ok(rhs)) => {
                                let residual = (lhs - rhs).abs();
                                let scale = 1f64.max(lhs.abs()).max(rhs.abs());
                                if residual.is_nan() || residual > tol * scale {
                                    report.violations.push(Violation {
                                        slot: k + 1,
                                        variable: i + 1,
                                        key,
                                        point: pt.clone(),
                                        lhs,
                                        rhs,
                                        residual,
                                        error: None,
                                    });
                                }
                            }
                            (l, r) => {
                                let err = l.err().or(r.err()).map(|e| e.to_string());
                                report.violations.push(Violation {
                                    slot: k + 1,
                                    variable: i + 1,
                                    key,
                                    point: pt.clone(),
                                    lhs: f64::NAN,
                                    rhs: f64::NAN,
                                    residual: f64::NAN,
                                    error: err,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
