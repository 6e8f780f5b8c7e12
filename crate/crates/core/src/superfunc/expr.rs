use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::func::Func;
use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::scalar::{parse_rational, rational_to_string, Rational, Scalar};

/// A coordinate of `K^{p|q}`, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Even(usize),
    Odd(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Even(usize),
    Odd(usize),
    Const(Rational),
    Add(Expr, Expr),
    Mul(Expr, Expr),
    Neg(Expr),
    Scale(Rational, Expr),
    Apply(Func, Expr),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Node {
    kind: Kind,
    parity: Parity,
    even_vars: usize,
    odd_vars: usize,
    transcendental: bool,
}

/// Immutable, shared expression tree over even coordinates `x_i` and odd
/// coordinates `θ_j`, with parity tracked at every node.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn make(kind: Kind) -> Expr {
        let (parity, even_vars, odd_vars, transcendental) = match &kind {
            Kind::Even(i) => (Parity::Even, i + 1, 0, false),
            Kind::Odd(j) => (Parity::Odd, 0, j + 1, false),
            Kind::Const(c) => (
                if Scalar::is_zero(c) { Parity::Zero } else { Parity::Even },
                0,
                0,
                false,
            ),
            Kind::Add(a, b) | Kind::Mul(a, b) => (
                if matches!(kind, Kind::Add(..)) {
                    a.parity() + b.parity()
                } else {
                    a.parity() * b.parity()
                },
                a.0.even_vars.max(b.0.even_vars),
                a.0.odd_vars.max(b.0.odd_vars),
                a.0.transcendental || b.0.transcendental,
            ),
            Kind::Neg(a) | Kind::Scale(_, a) => (a.parity(), a.0.even_vars, a.0.odd_vars, a.0.transcendental),
            Kind::Apply(f, a) => (
                Parity::Even,
                a.0.even_vars,
                a.0.odd_vars,
                a.0.transcendental || f.is_transcendental(),
            ),
        };
        Expr(Arc::new(Node {
            kind,
            parity,
            even_vars,
            odd_vars,
            transcendental,
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn parity(&self) -> Parity {
        self.0.parity
    }

    /// One more than the largest even coordinate index referenced.
    pub fn even_vars(&self) -> usize {
        self.0.even_vars
    }

    pub fn odd_vars(&self) -> usize {
        self.0.odd_vars
    }

    /// Contains exp/log/sin/cos, so evaluation needs float or complex
    /// scalars.
    pub fn is_transcendental(&self) -> bool {
        self.0.transcendental
    }

    pub(crate) fn node_ptr(&self) -> *const () {
        Arc::as_ptr(&self.0) as *const ()
    }

    pub fn var(v: Var) -> Expr {
        match v {
            Var::Even(i) => Expr::x(i),
            Var::Odd(j) => Expr::theta(j),
        }
    }

    /// Even coordinate `x_{i+1}`.
    pub fn x(i: usize) -> Expr {
        Expr::make(Kind::Even(i))
    }

    /// Odd coordinate `θ_{j+1}`.
    pub fn theta(j: usize) -> Expr {
        Expr::make(Kind::Odd(j))
    }

    pub fn constant(c: Rational) -> Expr {
        Expr::make(Kind::Const(c))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(Rational::from_i64(n))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.kind() {
            Kind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Scalar::is_zero)
    }

    pub fn add(&self, other: &Expr) -> Expr {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a + b),
            _ if self.is_zero() => other.clone(),
            _ if other.is_zero() => self.clone(),
            _ => Expr::make(Kind::Add(self.clone(), other.clone())),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a * b),
            (Some(a), None) => other.scale(a),
            // constants commute with everything
            (None, Some(b)) => self.scale(b),
            _ => Expr::make(Kind::Mul(self.clone(), other.clone())),
        }
    }

    pub fn neg(&self) -> Expr {
        match self.kind() {
            Kind::Const(c) => Expr::constant(-c),
            Kind::Neg(a) => a.clone(),
            Kind::Scale(c, a) => a.scale(&-c),
            _ => Expr::make(Kind::Neg(self.clone())),
        }
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if Scalar::is_zero(c) {
            return Expr::zero();
        }
        if *c == Rational::from_i64(1) {
            return self.clone();
        }
        if *c == Rational::from_i64(-1) {
            return self.neg();
        }
        match self.kind() {
            Kind::Const(a) => Expr::constant(a * c),
            Kind::Scale(a, inner) => inner.scale(&(a * c)),
            Kind::Neg(inner) => inner.scale(&-c),
            _ => Expr::make(Kind::Scale(c.clone(), self.clone())),
        }
    }

    /// `f(self)`; the argument must be even.
    pub fn apply(&self, f: Func) -> Result<Expr> {
        if !self.parity().is_even() {
            return Err(Error::AnalyticOnOdd(format!("{}({})", f.name(), self)));
        }
        if let Func::Pow(n) = f {
            if n == 0 {
                return Ok(Expr::one());
            }
            if n == 1 {
                return Ok(self.clone());
            }
        }
        if let (Some(c), Func::Pow(n)) = (self.as_const(), f) {
            if n > 0 || !Scalar::is_zero(c) {
                return Ok(Expr::constant(Func::Pow(n).eval(c)?));
            }
        }
        if let (Some(c), Func::Recip) = (self.as_const(), f) {
            if !Scalar::is_zero(c) {
                return Ok(Expr::constant(Func::Recip.eval(c)?));
            }
        }
        Ok(Expr::make(Kind::Apply(f, self.clone())))
    }

    /// Integer power. Non-negative powers of odd or mixed expressions are
    /// expanded into products; negative powers need an even base.
    pub fn pow(&self, n: i32) -> Result<Expr> {
        if self.parity().is_even() {
            return self.apply(Func::Pow(n));
        }
        if n < 0 {
            return Err(Error::AnalyticOnOdd(format!("({self})^{n}")));
        }
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn exp(&self) -> Result<Expr> {
        self.apply(Func::Exp)
    }

    pub fn log(&self) -> Result<Expr> {
        self.apply(Func::Log)
    }

    pub fn sin(&self) -> Result<Expr> {
        self.apply(Func::Sin)
    }

    pub fn cos(&self) -> Result<Expr> {
        self.apply(Func::Cos)
    }

    pub fn recip(&self) -> Result<Expr> {
        self.apply(Func::Recip)
    }

    /// Sum of a list, `0` when empty.
    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a Expr>) -> Expr {
        terms.into_iter().fold(Expr::zero(), |acc, t| acc.add(t))
    }

    /// `θ^J` for an ascending odd mask.
    pub fn odd_monomial(mask: u64) -> Expr {
        let mut acc = Expr::one();
        for j in crate::algebra::monomial::mask_indices(mask) {
            acc = acc.mul(&Expr::theta(j));
        }
        acc
    }

    /// Replaces every coordinate by the given expressions.
    pub fn substitute(&self, even: &[Expr], odd: &[Expr]) -> Result<Expr> {
        let mut memo = std::collections::HashMap::new();
        self.substitute_memo(even, odd, &mut memo)
    }

    fn substitute_memo(
        &self,
        even: &[Expr],
        odd: &[Expr],
        memo: &mut std::collections::HashMap<*const (), Expr>,
    ) -> Result<Expr> {
        if let Some(e) = memo.get(&self.node_ptr()) {
            return Ok(e.clone());
        }
        let out = match self.kind() {
            Kind::Even(i) => even
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::CoordinateOutOfRange(format!("x{}", i + 1)))?,
            Kind::Odd(j) => odd
                .get(*j)
                .cloned()
                .ok_or_else(|| Error::CoordinateOutOfRange(format!("theta{}", j + 1)))?,
            Kind::Const(_) => self.clone(),
            Kind::Add(a, b) => a
                .substitute_memo(even, odd, memo)?
                .add(&b.substitute_memo(even, odd, memo)?),
            Kind::Mul(a, b) => a
                .substitute_memo(even, odd, memo)?
                .mul(&b.substitute_memo(even, odd, memo)?),
            Kind::Neg(a) => a.substitute_memo(even, odd, memo)?.neg(),
            Kind::Scale(c, a) => a.substitute_memo(even, odd, memo)?.scale(c),
            Kind::Apply(f, a) => a.substitute_memo(even, odd, memo)?.apply(*f)?,
        };
        memo.insert(self.node_ptr(), out.clone());
        Ok(out)
    }

    /// Classical value with all odd coordinates set to zero, i.e. the value
    /// of the `θ^∅` component.
    pub fn eval_scalar<S: Scalar>(&self, x: &[S]) -> Result<S> {
        let mut memo = std::collections::HashMap::new();
        self.eval_scalar_memo(x, &mut memo)
    }

    fn eval_scalar_memo<S: Scalar>(
        &self,
        x: &[S],
        memo: &mut std::collections::HashMap<*const (), S>,
    ) -> Result<S> {
        if let Some(v) = memo.get(&self.node_ptr()) {
            return Ok(v.clone());
        }
        let v = match self.kind() {
            Kind::Even(i) => x
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::CoordinateOutOfRange(format!("x{}", i + 1)))?,
            Kind::Odd(_) => S::zero(),
            Kind::Const(c) => S::from_rational(c),
            Kind::Add(a, b) => a.eval_scalar_memo(x, memo)? + b.eval_scalar_memo(x, memo)?,
            Kind::Mul(a, b) => a.eval_scalar_memo(x, memo)? * b.eval_scalar_memo(x, memo)?,
            Kind::Neg(a) => -a.eval_scalar_memo(x, memo)?,
            Kind::Scale(c, a) => S::from_rational(c) * a.eval_scalar_memo(x, memo)?,
            Kind::Apply(f, a) => f.eval(&a.eval_scalar_memo(x, memo)?)?,
        };
        memo.insert(self.node_ptr(), v.clone());
        Ok(v)
    }

    /// Splits into even and odd parts, `self = even + odd`.
    pub fn parity_split(&self) -> (Expr, Expr) {
        match self.parity() {
            Parity::Zero => return (Expr::zero(), Expr::zero()),
            Parity::Even => return (self.clone(), Expr::zero()),
            Parity::Odd => return (Expr::zero(), self.clone()),
            Parity::Mixed => {}
        }
        match self.kind() {
            Kind::Add(a, b) => {
                let (ae, ao) = a.parity_split();
                let (be, bo) = b.parity_split();
                (ae.add(&be), ao.add(&bo))
            }
            Kind::Mul(a, b) => {
                let (ae, ao) = a.parity_split();
                let (be, bo) = b.parity_split();
                (ae.mul(&be).add(&ao.mul(&bo)), ae.mul(&bo).add(&ao.mul(&be)))
            }
            Kind::Neg(a) => {
                let (e, o) = a.parity_split();
                (e.neg(), o.neg())
            }
            Kind::Scale(c, a) => {
                let (e, o) = a.parity_split();
                (e.scale(c), o.scale(c))
            }
            _ => unreachable!("leaf or analytic node cannot be mixed"),
        }
    }

    pub fn to_json(&self) -> Value {
        match self.kind() {
            Kind::Even(i) => json!({"op": "x", "index": i + 1}),
            Kind::Odd(j) => json!({"op": "theta", "index": j + 1}),
            Kind::Const(c) => json!({"op": "const", "value": rational_to_string(c)}),
            Kind::Add(a, b) => json!({"op": "add", "args": [a.to_json(), b.to_json()]}),
            Kind::Mul(a, b) => json!({"op": "mul", "args": [a.to_json(), b.to_json()]}),
            Kind::Neg(a) => json!({"op": "neg", "arg": a.to_json()}),
            Kind::Scale(c, a) => json!({"op": "scale", "by": rational_to_string(c), "arg": a.to_json()}),
            Kind::Apply(Func::Pow(n), a) => json!({"op": "pow", "exponent": n, "arg": a.to_json()}),
            Kind::Apply(f, a) => json!({"op": f.name(), "arg": a.to_json()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Expr> {
        let bad = |what: &str| Error::Malformed(format!("expression JSON: {what}"));
        let op = v.get("op").and_then(Value::as_str).ok_or_else(|| bad("missing op"))?;
        let index = || -> Result<usize> {
            let i = v.get("index").and_then(Value::as_u64).ok_or_else(|| bad("missing index"))?;
            if i == 0 {
                return Err(bad("indices are 1-based"));
            }
            Ok(i as usize - 1)
        };
        let arg = || Expr::from_json(v.get("arg").ok_or_else(|| bad("missing arg"))?);
        let args = || -> Result<(Expr, Expr)> {
            match v.get("args").and_then(Value::as_array).map(Vec::as_slice) {
                Some([a, b]) => Ok((Expr::from_json(a)?, Expr::from_json(b)?)),
                _ => Err(bad("args must have two entries")),
            }
        };
        let rational = |key: &str| -> Result<Rational> {
            match v.get(key) {
                Some(Value::String(s)) => parse_rational(s),
                Some(Value::Number(n)) => parse_rational(&n.to_string()),
                _ => Err(bad("missing constant")),
            }
        };
        Ok(match op {
            "x" => Expr::x(index()?),
            "theta" => Expr::theta(index()?),
            "const" => Expr::constant(rational("value")?),
            "add" => {
                let (a, b) = args()?;
                a.add(&b)
            }
            "mul" => {
                let (a, b) = args()?;
                a.mul(&b)
            }
            "neg" => arg()?.neg(),
            "scale" => arg()?.scale(&rational("by")?),
            "pow" => {
                let n = v.get("exponent").and_then(Value::as_i64).ok_or_else(|| bad("missing exponent"))?;
                arg()?.pow(i32::try_from(n).map_err(|_| bad("exponent out of range"))?)?
            }
            name => match Func::from_name(name) {
                Some(f) => arg()?.apply(f)?,
                None => return Err(bad(&format!("unknown op {name:?}"))),
            },
        })
    }
}

// Precedence levels for printing: sum < product < unary minus < power < atom.
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const UNARY: u8 = 2;
const POWER: u8 = 3;

fn write_const(f: &mut fmt::Formatter<'_>, c: &Rational, ctx: u8) -> fmt::Result {
    let s = rational_to_string(c);
    let needs = (s.contains('/') && ctx >= PRODUCT) || (s.starts_with('-') && ctx >= UNARY);
    if needs {
        write!(f, "({s})")
    } else {
        f.write_str(&s)
    }
}

impl Expr {
    fn level(&self) -> u8 {
        match self.kind() {
            Kind::Add(..) => SUM,
            Kind::Mul(..) | Kind::Scale(..) => PRODUCT,
            Kind::Neg(..) => UNARY,
            Kind::Const(c) => {
                let s = rational_to_string(c);
                if s.contains('/') {
                    PRODUCT
                } else if s.starts_with('-') {
                    UNARY
                } else {
                    4
                }
            }
            Kind::Apply(Func::Pow(_), _) => POWER,
            _ => 4,
        }
    }

    fn write_in(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        if self.level() < ctx {
            f.write_str("(")?;
            self.write_in(f, SUM)?;
            return f.write_str(")");
        }
        match self.kind() {
            Kind::Even(i) => write!(f, "x{}", i + 1),
            Kind::Odd(j) => write!(f, "theta{}", j + 1),
            Kind::Const(c) => write_const(f, c, ctx),
            Kind::Add(a, b) => {
                a.write_in(f, SUM)?;
                match b.kind() {
                    Kind::Neg(inner) => {
                        f.write_str(" - ")?;
                        inner.write_in(f, PRODUCT)
                    }
                    Kind::Const(c) if c < &Rational::from_i64(0) => {
                        f.write_str(" - ")?;
                        write_const(f, &-c, PRODUCT)
                    }
                    Kind::Scale(c, inner) if c < &Rational::from_i64(0) => {
                        f.write_str(" - ")?;
                        inner.scale(&-c).write_in(f, PRODUCT)
                    }
                    _ => {
                        f.write_str(" + ")?;
                        b.write_in(f, PRODUCT)
                    }
                }
            }
            Kind::Mul(a, b) => {
                a.write_in(f, PRODUCT)?;
                f.write_str("*")?;
                b.write_in(f, UNARY)
            }
            Kind::Scale(c, a) => {
                if *c == Rational::from_i64(-1) {
                    f.write_str("-")?;
                    return a.write_in(f, UNARY);
                }
                write_const(f, c, PRODUCT)?;
                f.write_str("*")?;
                a.write_in(f, UNARY)
            }
            Kind::Neg(a) => {
                f.write_str("-")?;
                a.write_in(f, UNARY)
            }
            Kind::Apply(Func::Pow(n), a) => {
                a.write_in(f, 4)?;
                write!(f, "^{n}")
            }
            Kind::Apply(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_in(f, SUM)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_in(f, SUM)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}
