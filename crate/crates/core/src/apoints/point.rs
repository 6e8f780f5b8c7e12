use std::collections::HashMap;

use crate::algebra::{AlgebraElement, AlgebraMorphism, SuperWeilAlgebra};
use crate::error::{Error, Result};
use crate::superfunc::{Components, Expr, Kind, Section, SuperDomain};
use crate::scalar::Scalar;

/// An `A`-point of a superdomain `U ⊂ K^{p|q}`: even coordinates sent to
/// `A₀`, odd coordinates to `A₁`, with the body tuple in the region.
#[derive(Clone, Debug)]
pub struct APoint<S: Scalar> {
    domain: SuperDomain,
    algebra: SuperWeilAlgebra,
    even: Vec<AlgebraElement<S>>,
    odd: Vec<AlgebraElement<S>>,
}

impl<S: Scalar> PartialEq for APoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_as(&other.domain)
            && self.algebra == other.algebra
            && self.even == other.even
            && self.odd == other.odd
    }
}

impl<S: Scalar> APoint<S> {
    pub fn new(
        domain: &SuperDomain,
        algebra: &SuperWeilAlgebra,
        even: Vec<AlgebraElement<S>>,
        odd: Vec<AlgebraElement<S>>,
    ) -> Result<Self> {
        if even.len() != domain.even_dim() || odd.len() != domain.odd_dim() {
            return Err(Error::Dimension(format!(
                "a point of K^{{{}|{}}} needs {}|{} coordinates, got {}|{}",
                domain.even_dim(),
                domain.odd_dim(),
                domain.even_dim(),
                domain.odd_dim(),
                even.len(),
                odd.len()
            )));
        }
        for v in even.iter().chain(&odd) {
            if !v.algebra().same(algebra) {
                return Err(Error::AlgebraMismatch("coordinate value outside the point's algebra".into()));
            }
        }
        for (i, v) in even.iter().enumerate() {
            if !v.parity().is_even() {
                return Err(Error::Parity(format!("x{} must be sent to an even element", i + 1)));
            }
        }
        for (j, v) in odd.iter().enumerate() {
            if !v.parity().is_odd() {
                return Err(Error::Parity(format!("theta{} must be sent to an odd element", j + 1)));
            }
        }
        let base: Vec<S> = even.iter().map(AlgebraElement::body).collect();
        domain.check_contains(&base)?;
        Ok(APoint {
            domain: domain.clone(),
            algebra: algebra.clone(),
            even,
            odd,
        })
    }

    /// The point with the given body and zero soul; over `K` this is plain
    /// evaluation at `base`.
    pub fn at_base(domain: &SuperDomain, algebra: &SuperWeilAlgebra, base: &[S]) -> Result<Self> {
        let even = base
            .iter()
            .map(|b| AlgebraElement::from_scalar(algebra, b.clone()))
            .collect();
        let odd = vec![AlgebraElement::zero(algebra); domain.odd_dim()];
        APoint::new(domain, algebra, even, odd)
    }

    pub fn domain(&self) -> &SuperDomain {
        &self.domain
    }

    pub fn algebra(&self) -> &SuperWeilAlgebra {
        &self.algebra
    }

    pub fn even_values(&self) -> &[AlgebraElement<S>] {
        &self.even
    }

    pub fn odd_values(&self) -> &[AlgebraElement<S>] {
        &self.odd
    }

    /// The `K`-point obtained by composing with `A → K`.
    pub fn base_point(&self) -> Vec<S> {
        self.even.iter().map(AlgebraElement::body).collect()
    }

    fn check_section(&self, s: &Section) -> Result<()> {
        let d = s.domain();
        if d.even_dim() != self.domain.even_dim() || d.odd_dim() != self.domain.odd_dim() {
            return Err(Error::Dimension(format!(
                "section on {} evaluated at a point of {}",
                d, self.domain
            )));
        }
        Ok(())
    }

    /// Recursive evaluation: analytic nodes are lifted by
    /// `f(ā + ȧ) = Σ_n f^(n)(ā)/n! ȧ^n`.
    pub fn eval_ast(&self, s: &Section) -> Result<AlgebraElement<S>> {
        self.check_section(s)?;
        eval_expr(s.expr(), &self.algebra, &self.even, &self.odd)
    }

    /// Evaluation through the formal Taylor expansion
    /// `Σ_{ν,J} (1/ν!) ∂^ν s_J(base) · soul^ν · θ^J`.
    pub fn eval_taylor(&self, s: &Section) -> Result<AlgebraElement<S>> {
        self.check_section(s)?;
        taylor_expand(&s.components()?, &self.algebra, &self.even, &self.odd)
    }

    /// `x_A ↦ ρ ∘ x_A`.
    pub fn pushforward(&self, rho: &AlgebraMorphism<S>) -> Result<APoint<S>> {
        if !rho.source().same(&self.algebra) {
            return Err(Error::AlgebraMismatch("morphism source differs from the point's algebra".into()));
        }
        let even = self.even.iter().map(|v| rho.apply(v)).collect::<Result<_>>()?;
        let odd = self.odd.iter().map(|v| rho.apply(v)).collect::<Result<_>>()?;
        APoint::new(&self.domain, rho.target(), even, odd)
    }

    /// The point of `U × V` with concatenated coordinates.
    pub fn product(&self, other: &APoint<S>) -> Result<APoint<S>> {
        if !self.algebra.same(&other.algebra) {
            return Err(Error::AlgebraMismatch("product of points over different algebras".into()));
        }
        let even = self.even.iter().chain(&other.even).cloned().collect();
        let odd = self.odd.iter().chain(&other.odd).cloned().collect();
        APoint::new(&self.domain.product(&other.domain), &self.algebra, even, odd)
    }

    /// Inverse of [`APoint::product`].
    pub fn split(&self, left: &SuperDomain, right: &SuperDomain) -> Result<(APoint<S>, APoint<S>)> {
        let (p, q) = (left.even_dim(), left.odd_dim());
        if p + right.even_dim() != self.even.len() || q + right.odd_dim() != self.odd.len() {
            return Err(Error::Dimension("factor dimensions do not add up".into()));
        }
        Ok((
            APoint::new(left, &self.algebra, self.even[..p].to_vec(), self.odd[..q].to_vec())?,
            APoint::new(right, &self.algebra, self.even[p..].to_vec(), self.odd[q..].to_vec())?,
        ))
    }

    /// Converts coordinates into another scalar field.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Result<APoint<T>> {
        APoint::new(
            &self.domain,
            &self.algebra,
            self.even.iter().map(|v| v.map_scalars(f)).collect(),
            self.odd.iter().map(|v| v.map_scalars(f)).collect(),
        )
    }
}

/// Evaluates an expression with coordinates sent to the given algebra
/// elements.
pub fn eval_expr<S: Scalar>(
    e: &Expr,
    algebra: &SuperWeilAlgebra,
    even: &[AlgebraElement<S>],
    odd: &[AlgebraElement<S>],
) -> Result<AlgebraElement<S>> {
    let mut memo = HashMap::new();
    eval_memo(e, algebra, even, odd, &mut memo)
}

fn eval_memo<S: Scalar>(
    e: &Expr,
    algebra: &SuperWeilAlgebra,
    even: &[AlgebraElement<S>],
    odd: &[AlgebraElement<S>],
    memo: &mut HashMap<*const (), AlgebraElement<S>>,
) -> Result<AlgebraElement<S>> {
    if let Some(v) = memo.get(&e.node_ptr()) {
        return Ok(v.clone());
    }
    let mut rec = |x: &Expr| eval_memo(x, algebra, even, odd, memo);
    let v = match e.kind() {
        Kind::Even(i) => even
            .get(*i)
            .cloned()
            .ok_or_else(|| Error::CoordinateOutOfRange(format!("x{}", i + 1)))?,
        Kind::Odd(j) => odd
            .get(*j)
            .cloned()
            .ok_or_else(|| Error::CoordinateOutOfRange(format!("theta{}", j + 1)))?,
        Kind::Const(c) => AlgebraElement::from_scalar(algebra, S::from_rational(c)),
        Kind::Add(a, b) => rec(a)? + rec(b)?,
        Kind::Mul(a, b) => rec(a)? * rec(b)?,
        Kind::Neg(a) => -rec(a)?,
        Kind::Scale(c, a) => rec(a)?.scale(&S::from_rational(c)),
        Kind::Apply(f, a) => {
            let a = rec(a)?;
            let body = a.body();
            let soul = a.soul();
            let powers = soul.powers_until_zero();
            let derivs = f.derivatives(&body, powers.len() - 1)?;
            let mut acc = AlgebraElement::zero(algebra);
            let mut inv_fact = S::one();
            for (n, (p, d)) in powers.iter().zip(&derivs).enumerate() {
                if n > 0 {
                    inv_fact = inv_fact * S::from_ratio(1, n as i64);
                }
                if !d.is_zero() {
                    acc = acc + p.scale(&(d.clone() * inv_fact.clone()));
                }
            }
            acc
        }
    };
    memo.insert(e.node_ptr(), v.clone());
    Ok(v)
}

/// `Σ_{ν,J} (1/ν!) ∂^ν s_J(base) soul^ν θ^J` over components `s_J`.
pub(crate) fn taylor_expand<S: Scalar>(
    comps: &Components,
    algebra: &SuperWeilAlgebra,
    even: &[AlgebraElement<S>],
    odd: &[AlgebraElement<S>],
) -> Result<AlgebraElement<S>> {
    let base: Vec<S> = even.iter().map(AlgebraElement::body).collect();
    let souls: Vec<AlgebraElement<S>> = even.iter().map(AlgebraElement::soul).collect();
    let h = algebra.height() as u32;
    let p = even.len();
    let mut total = AlgebraElement::zero(algebra);
    for (&mask, s_j) in comps {
        let mut theta = AlgebraElement::one(algebra);
        for j in crate::algebra::monomial::mask_indices(mask) {
            theta = &theta * odd.get(j).ok_or_else(|| Error::CoordinateOutOfRange(format!("theta{}", j + 1)))?;
        }
        if theta.is_zero() {
            continue;
        }
        let mut derivs: HashMap<Vec<u32>, Expr> = HashMap::new();
        derivs.insert(vec![0; p], s_j.clone());
        let mut sum = AlgebraElement::zero(algebra);
        for nu in crate::algebra::monomial::exponents_up_to(p, h) {
            let mut soul_pow = AlgebraElement::one(algebra);
            let mut fact = S::one();
            for (i, &n) in nu.iter().enumerate() {
                if n > 0 {
                    soul_pow = &soul_pow * &souls[i].pow(n);
                    for m in 1..=n as i64 {
                        fact = fact * S::from_i64(m);
                    }
                }
            }
            if soul_pow.is_zero() {
                continue;
            }
            let d = derivative_for(&nu, &mut derivs);
            let value = d.eval_scalar(&base)?;
            if value.is_zero() {
                continue;
            }
            let coeff = value * fact.recip().expect("factorials are nonzero");
            sum = sum + soul_pow.scale(&coeff);
        }
        total = total + &sum * &theta;
    }
    Ok(total)
}

/// `∂^ν s`, memoized through `∂^{ν - δ_i}`.
fn derivative_for(nu: &[u32], memo: &mut HashMap<Vec<u32>, Expr>) -> Expr {
    if let Some(e) = memo.get(nu) {
        return e.clone();
    }
    let i = nu.iter().rposition(|&n| n > 0).expect("ν = 0 is seeded");
    let mut prev = nu.to_vec();
    prev[i] -= 1;
    let d = derivative_for(&prev, memo).derive(crate::superfunc::Var::Even(i));
    memo.insert(nu.to_vec(), d.clone());
    d
}
