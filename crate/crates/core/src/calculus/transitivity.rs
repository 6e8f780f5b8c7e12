use std::collections::HashMap;

use crate::algebra::monomial::{exponents_up_to, mask_indices};
use crate::algebra::{AlgebraElement, SuperWeilAlgebra, TensorProduct};
use crate::apoints::APoint;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superfunc::{Expr, Section, SuperDomain, Var};

use super::distribution::nu_factorial;

/// An `A ⊗ B₀`-point together with the tensor structure needed to read it
/// as a `B₀`-point of `M_A`.
#[derive(Clone, Debug)]
pub struct TransitivityPoint<S: Scalar> {
    pub tensor: TensorProduct,
    pub point: APoint<S>,
}

/// Both sides of `(M_A)_{B₀} ≅ M_{A⊗B₀}` on one section.
#[derive(Clone, Debug)]
pub struct TransitivityCheck<S: Scalar> {
    pub direct: AlgebraElement<S>,
    pub iterated: AlgebraElement<S>,
    pub residual: f64,
}

/// Builds the point of `U` over `A ⊗ B₀`. `B₀` must be purely even.
pub fn transitivity_point<S: Scalar>(
    domain: &SuperDomain,
    a: &SuperWeilAlgebra,
    b0: &SuperWeilAlgebra,
    even: Vec<AlgebraElement<S>>,
    odd: Vec<AlgebraElement<S>>,
) -> Result<TransitivityPoint<S>> {
    if b0.odd_generators() > 0 {
        return Err(Error::NotPurelyEven);
    }
    let tensor = a.tensor(b0)?;
    let point = APoint::new(domain, &tensor.algebra, even, odd)?;
    Ok(TransitivityPoint { tensor, point })
}

impl<S: Scalar> TransitivityPoint<S> {
    /// Compares direct evaluation over `A ⊗ B₀` with the two-stage one:
    /// evaluate the `A`-valued function `y ↦ y(s)` and its even derivatives
    /// at the `A`-part `X` of the point, then Taylor-expand in the
    /// `B₀`-nilpotent directions `Y = x - X`.
    pub fn check(&self, s: &Section) -> Result<TransitivityCheck<S>> {
        let direct = self.point.eval_ast(s)?;
        let iterated = self.iterated(s)?;
        let residual = direct.max_abs_diff(&iterated);
        Ok(TransitivityCheck {
            direct,
            iterated,
            residual,
        })
    }

    fn iterated(&self, s: &Section) -> Result<AlgebraElement<S>> {
        let t = &self.tensor;
        let to_a = t.left_retraction::<S>();
        let into = t.left_inclusion::<S>();
        let x = &self.point;
        let a_point = x.pushforward(&to_a)?;
        let a_even: Vec<AlgebraElement<S>> =
            a_point.even_values().iter().map(|v| into.apply(v)).collect::<Result<_>>()?;
        let y: Vec<AlgebraElement<S>> = x.even_values().iter().zip(&a_even).map(|(v, a)| v - a).collect();

        let p = x.domain().even_dim();
        let h = t.right.height() as u32;
        let comps = s.components()?;
        let alg = &t.algebra;
        let mut total = AlgebraElement::zero(alg);
        for (&mask, s_j) in &comps {
            let mut derivs: HashMap<Vec<u32>, Expr> = HashMap::from([(vec![0; p], s_j.clone())]);
            let mut sum = AlgebraElement::zero(alg);
            for nu in exponents_up_to(p, h) {
                let mut y_pow = AlgebraElement::one(alg);
                for (i, &n) in nu.iter().enumerate() {
                    if n > 0 {
                        y_pow = &y_pow * &y[i].pow(n);
                    }
                }
                if y_pow.is_zero() {
                    continue;
                }
                let d = derivative(&nu, &mut derivs);
                let at_a = a_point.eval_ast(&Section::new(x.domain(), d)?)?;
                let inv = nu_factorial::<S>(&nu).recip().expect("factorials are nonzero");
                sum = sum + (&into.apply(&at_a)? * &y_pow).scale(&inv);
            }
            let mut theta = AlgebraElement::one(alg);
            for j in mask_indices(mask) {
                theta = &theta * &x.odd_values()[j];
            }
            total = total + &sum * &theta;
        }
        Ok(total)
    }
}

fn derivative(nu: &[u32], memo: &mut HashMap<Vec<u32>, Expr>) -> Expr {
    if let Some(e) = memo.get(nu) {
        return e.clone();
    }
    let i = nu.iter().rposition(|&n| n > 0).expect("ν = 0 is seeded");
    let mut prev = nu.to_vec();
    prev[i] -= 1;
    let d = derivative(&prev, memo).derive(Var::Even(i));
    memo.insert(nu.to_vec(), d.clone());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type E = AlgebraElement<Rational>;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn dual_times_dual_example() {
        let d = SuperWeilAlgebra::dual_numbers();
        let t = d.tensor(&d).unwrap();
        let alg = &t.algebra;
        let (c, al, be, ga) = (r(3), r(5), r(7), r(11));
        let e = E::even_generator(alg, 0);
        let e2 = E::even_generator(alg, 1);
        let val = E::from_scalar(alg, c.clone()) + e.scale(&al) + e2.scale(&be) + (&e * &e2).scale(&ga);
        let u = SuperDomain::full(1, 0);
        let tp = transitivity_point(&u, &d, &d, vec![val], vec![]).unwrap();
        let s = Section::parse(&u, "x1^2").unwrap();
        let out = tp.check(&s).unwrap();
        assert_eq!(out.residual, 0.0);
        let two = r(2);
        let expected = [
            c.clone() * c.clone(),
            two.clone() * c.clone() * al.clone(),
            two.clone() * c.clone() * be.clone(),
            two.clone() * c * ga + two * al * be,
        ];
        assert_eq!(out.direct.coeffs(), &expected[..]);
    }

    #[test]
    fn trivial_b0_is_plain_evaluation() {
        let g = SuperWeilAlgebra::grassmann(2).unwrap();
        let k = SuperWeilAlgebra::field();
        let u = SuperDomain::full(1, 2);
        let t = g.tensor(&k).unwrap();
        let alg = &t.algebra;
        let tp = transitivity_point(
            &u,
            &g,
            &k,
            vec![E::from_scalar(alg, r(1)) + E::odd_generator(alg, 0) * E::odd_generator(alg, 1)],
            vec![E::odd_generator(alg, 0), E::odd_generator(alg, 1)],
        )
        .unwrap();
        let s = Section::parse(&u, "x1^3*theta1 + inv(x1)*theta1*theta2").unwrap();
        assert_eq!(tp.check(&s).unwrap().residual, 0.0);
    }

    #[test]
    fn series_example_in_floats() {
        let g = SuperWeilAlgebra::grassmann(2).unwrap();
        let b = SuperWeilAlgebra::dual_numbers();
        let t = g.tensor(&b).unwrap();
        let alg = &t.algebra;
        type F = AlgebraElement<f64>;
        let x = F::odd_generator(alg, 0) * F::odd_generator(alg, 1) + F::even_generator(alg, 0);
        let u = SuperDomain::full(1, 0);
        let tp = transitivity_point(&u, &g, &b, vec![x], vec![]).unwrap();
        let s = Section::parse(&u, "exp(x1)").unwrap();
        assert!(tp.check(&s).unwrap().residual <= 1e-12);
    }

    #[test]
    fn odd_b0_rejected() {
        let g = SuperWeilAlgebra::grassmann(1).unwrap();
        let u = SuperDomain::full(0, 0);
        assert!(matches!(
            transitivity_point::<Rational>(&u, &g, &g, vec![], vec![]),
            Err(Error::NotPurelyEven)
        ));
    }
}
