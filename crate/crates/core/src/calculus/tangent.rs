use crate::algebra::{AlgebraElement, SuperWeilAlgebra};
use crate::apoints::APoint;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superfunc::{Section, SuperDomain};

/// A tangent vector `v = Σ a_i ∂/∂x_i + Σ b_j ∂/∂θ_j` at a point of the
/// region.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<S: Scalar> {
    pub base: Vec<S>,
    pub v_even: Vec<S>,
    pub v_odd: Vec<S>,
}

/// What a tangent vector extracts from a section: the value at the base,
/// the even directional derivative, and the odd one.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentValue<S> {
    pub value: S,
    pub d_even: S,
    pub d_odd: S,
}

impl<S: Scalar> TangentVector<S> {
    pub fn new(domain: &SuperDomain, base: Vec<S>, v_even: Vec<S>, v_odd: Vec<S>) -> Result<Self> {
        domain.check_contains(&base)?;
        if v_even.len() != domain.even_dim() || v_odd.len() != domain.odd_dim() {
            return Err(Error::Dimension(format!(
                "tangent vector on K^{{{}|{}}} needs {}|{} components",
                domain.even_dim(),
                domain.odd_dim(),
                domain.even_dim(),
                domain.odd_dim()
            )));
        }
        Ok(TangentVector { base, v_even, v_odd })
    }

    /// `x_i ↦ base_i + a_i e`, `θ_j ↦ b_j ε` over the super dual numbers
    /// `K(e, ε)`.
    pub fn to_point(&self, domain: &SuperDomain) -> Result<APoint<S>> {
        let d = SuperWeilAlgebra::super_dual_numbers();
        let e = AlgebraElement::<S>::even_generator(&d, 0);
        let eps = AlgebraElement::<S>::odd_generator(&d, 0);
        let even = self
            .base
            .iter()
            .zip(&self.v_even)
            .map(|(b, v)| AlgebraElement::from_scalar(&d, b.clone()) + e.scale(v))
            .collect();
        let odd = self.v_odd.iter().map(|v| eps.scale(v)).collect();
        APoint::new(domain, &d, even, odd)
    }

    /// Inverse of [`TangentVector::to_point`].
    pub fn from_point(x: &APoint<S>) -> Result<Self> {
        let d = SuperWeilAlgebra::super_dual_numbers();
        if !x.algebra().same(&d) {
            return Err(Error::AlgebraMismatch("tangent vectors are points over K(e, ε)".into()));
        }
        // basis of K(e, ε) is 1, e, ε
        let coeff = |v: &AlgebraElement<S>, i: usize| v.coeffs()[i].clone();
        Ok(TangentVector {
            base: x.base_point(),
            v_even: x.even_values().iter().map(|v| coeff(v, 1)).collect(),
            v_odd: x.odd_values().iter().map(|v| coeff(v, 2)).collect(),
        })
    }

    /// Evaluates `s` at the lifted point and reads off `s(base)`,
    /// `Σ a_i ∂s/∂x_i(base)` and `Σ b_j ∂s/∂θ_j(base)`.
    pub fn apply(&self, domain: &SuperDomain, s: &Section) -> Result<TangentValue<S>> {
        let v = self.to_point(domain)?.eval_ast(s)?;
        let c = v.coeffs();
        Ok(TangentValue {
            value: c[0].clone(),
            d_even: c[1].clone(),
            d_odd: c[2].clone(),
        })
    }
}

/// Central difference `(s(b + h v) - s(b - h v)) / 2h` of the `θ^∅`
/// component.
pub fn finite_difference_tangent(s: &Section, base: &[f64], direction: &[f64], h: f64) -> Result<f64> {
    if base.len() != direction.len() {
        return Err(Error::Dimension("base and direction lengths differ".into()));
    }
    let shifted = |sign: f64| -> Vec<f64> { base.iter().zip(direction).map(|(b, d)| b + sign * h * d).collect() };
    let plus = s.eval_classical(&shifted(1.0))?;
    let minus = s.eval_classical(&shifted(-1.0))?;
    Ok((plus - minus) / (2.0 * h))
}
