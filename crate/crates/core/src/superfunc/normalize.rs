use std::collections::{BTreeMap, HashMap};

use super::derive::derivative_expr;
use super::expr::{Expr, Kind};
use super::func::{factorial, Func};
use crate::algebra::monomial::odd_swap_sign;
use crate::error::Result;
use crate::scalar::{Rational, Scalar};

/// The family `{s_J}` with `s = Σ_J s_J θ^J`, keyed by the odd mask of `J`.
/// Every `s_J` involves even coordinates only. Zero components are omitted.
pub type Components = BTreeMap<u64, Expr>;

fn insert(out: &mut Components, mask: u64, e: Expr) {
    if e.is_zero() {
        return;
    }
    let merged = match out.remove(&mask) {
        Some(prev) => prev.add(&e),
        None => e,
    };
    if !merged.is_zero() {
        out.insert(mask, merged);
    }
}

fn product(a: &Components, b: &Components) -> Components {
    let mut out = Components::new();
    for (&ma, ea) in a {
        for (&mb, eb) in b {
            if ma & mb != 0 {
                continue;
            }
            let term = ea.mul(eb);
            let term = if odd_swap_sign(ma, mb) { term.neg() } else { term };
            insert(&mut out, ma | mb, term);
        }
    }
    out
}

fn map(a: &Components, f: impl Fn(&Expr) -> Expr) -> Components {
    a.iter()
        .map(|(m, e)| (*m, f(e)))
        .filter(|(_, e)| !e.is_zero())
        .collect()
}

impl Expr {
    /// Expands products and analytic nodes (by nilpotent Taylor expansion in
    /// the odd part of their argument) into components `s_J`.
    pub fn components(&self) -> Result<Components> {
        let mut memo = HashMap::new();
        self.components_memo(&mut memo)
    }

    fn components_memo(&self, memo: &mut HashMap<*const (), Components>) -> Result<Components> {
        if let Some(c) = memo.get(&self.node_ptr()) {
            return Ok(c.clone());
        }
        let out = match self.kind() {
            Kind::Even(_) => Components::from([(0, self.clone())]),
            Kind::Odd(j) => Components::from([(1u64 << j, Expr::one())]),
            Kind::Const(_) => {
                let mut c = Components::new();
                insert(&mut c, 0, self.clone());
                c
            }
            Kind::Add(a, b) => {
                let mut c = a.components_memo(memo)?;
                for (m, e) in b.components_memo(memo)? {
                    insert(&mut c, m, e);
                }
                c
            }
            Kind::Mul(a, b) => product(&a.components_memo(memo)?, &b.components_memo(memo)?),
            Kind::Neg(a) => map(&a.components_memo(memo)?, Expr::neg),
            Kind::Scale(k, a) => map(&a.components_memo(memo)?, |e| e.scale(k)),
            Kind::Apply(f, u) => {
                let mut parts = u.components_memo(memo)?;
                let body = parts.remove(&0).unwrap_or_else(Expr::zero);
                analytic_lift(*f, &body, &parts)?
            }
        };
        memo.insert(self.node_ptr(), out.clone());
        Ok(out)
    }

    /// `Σ_J s_J θ^J`.
    pub fn from_components(c: &Components) -> Expr {
        c.iter().fold(Expr::zero(), |acc, (&m, e)| acc.add(&e.mul(&Expr::odd_monomial(m))))
    }
}

/// `f(b + n) = Σ_k f^(k)(b)/k! n^k` for an even nilpotent `n`.
fn analytic_lift(f: Func, body: &Expr, nil: &Components) -> Result<Components> {
    let mut out = Components::new();
    insert(&mut out, 0, body.apply(f)?);
    let mut power = Components::from([(0u64, Expr::one())]);
    let mut k = 0u32;
    loop {
        power = product(&power, nil);
        k += 1;
        if power.is_empty() || f.polynomial_degree().is_some_and(|d| k > d) {
            break;
        }
        let coeff = derivative_expr(f, body, k).scale(&(Rational::from_i64(1) / factorial(k)));
        for (m, e) in &power {
            insert(&mut out, *m, coeff.mul(e));
        }
    }
    Ok(out)
}
