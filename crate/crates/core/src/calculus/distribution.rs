use std::collections::BTreeMap;

use crate::algebra::monomial::Monomial;
use crate::algebra::{AlgebraElement, SuperWeilAlgebra};
use crate::apoints::APoint;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superfunc::{Section, SuperDomain};

/// Key `(ν, J)` of a mixed partial `∂^ν/∂x^ν ∂^J/∂θ^J`, with `J` an odd mask.
pub type PartialKey = (Vec<u32>, u64);

/// A point-supported distribution of order `k`:
/// `v = Σ a_{ν,J} ev_base ∘ ∂^ν ∂^J` with `|ν| + |J| ≤ k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<S: Scalar> {
    base: Vec<S>,
    order: u32,
    coeffs: BTreeMap<PartialKey, S>,
}

impl<S: Scalar> Distribution<S> {
    pub fn new(domain: &SuperDomain, base: Vec<S>, order: u32, coeffs: BTreeMap<PartialKey, S>) -> Result<Self> {
        domain.check_contains(&base)?;
        for (nu, mask) in coeffs.keys() {
            if nu.len() != domain.even_dim() || (domain.odd_dim() < 64 && mask >> domain.odd_dim() != 0) {
                return Err(Error::Dimension(format!("partial ({nu:?}, {mask:#b}) is not on {domain}")));
            }
            let deg = nu.iter().sum::<u32>() + mask.count_ones();
            if deg > order {
                return Err(Error::Dimension(format!(
                    "partial of order {deg} in a distribution of order {order}"
                )));
            }
        }
        Ok(Distribution { base, order, coeffs })
    }

    pub fn base(&self) -> &[S] {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &BTreeMap<PartialKey, S> {
        &self.coeffs
    }

    /// `⟨v, s⟩ = Σ a_{ν,J} ν! c_{ν,J}` where `c_{ν,J}` is the coefficient of
    /// `z^ν ζ^J` in the tautological evaluation.
    pub fn pair(&self, domain: &SuperDomain, s: &Section) -> Result<S> {
        let y = tautological_point(domain, &self.base, self.order)?;
        let v = y.eval_ast(s)?;
        let mut acc = S::zero();
        for ((nu, mask), a) in &self.coeffs {
            let c = v.coeff_of(&Monomial::new(nu.clone(), *mask));
            acc = acc + a.clone() * c * nu_factorial::<S>(nu);
        }
        Ok(acc)
    }

    /// `Σ a_{ν,J} (∂^ν ∂^J s)(base)` by symbolic differentiation.
    pub fn pair_symbolic(&self, s: &Section) -> Result<S> {
        let mut acc = S::zero();
        for ((nu, mask), a) in &self.coeffs {
            let d = s.expr().derive_odd_mask(*mask).derive_multi(nu);
            acc = acc + a.clone() * d.eval_scalar(&self.base)?;
        }
        Ok(acc)
    }
}

pub(crate) fn nu_factorial<S: Scalar>(nu: &[u32]) -> S {
    let mut f = S::one();
    for &n in nu {
        for m in 1..=n as i64 {
            f = f * S::from_i64(m);
        }
    }
    f
}

/// The point `x_i ↦ base_i + z_i`, `θ_j ↦ ζ_j` over
/// `K[z_1..z_p | ζ_1..ζ_q]/m^{k+1}`.
pub fn tautological_point<S: Scalar>(domain: &SuperDomain, base: &[S], k: u32) -> Result<APoint<S>> {
    let a = SuperWeilAlgebra::truncated(domain.even_dim(), domain.odd_dim(), k as i64 + 1)?;
    let even = base
        .iter()
        .enumerate()
        .map(|(i, b)| AlgebraElement::from_scalar(&a, b.clone()) + AlgebraElement::even_generator(&a, i))
        .collect();
    let odd = (0..domain.odd_dim()).map(|j| AlgebraElement::odd_generator(&a, j)).collect();
    APoint::new(domain, &a, even, odd)
}

/// `ω(x_A(s))` for a functional `ω` given by its values on the basis of `A`.
pub fn functional_through_point<S: Scalar>(omega: &[S], x: &APoint<S>, s: &Section) -> Result<S> {
    if omega.len() != x.algebra().dim() {
        return Err(Error::Dimension(format!(
            "functional has {} entries, algebra has dimension {}",
            omega.len(),
            x.algebra().dim()
        )));
    }
    let v = x.eval_ast(s)?;
    Ok(omega
        .iter()
        .zip(v.coeffs())
        .fold(S::zero(), |acc, (w, c)| acc + w.clone() * c.clone()))
}
