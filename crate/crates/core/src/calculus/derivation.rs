use crate::algebra::AlgebraElement;
use crate::apoints::APoint;
use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::scalar::Scalar;
use crate::superfunc::{Expr, Section, Var};

/// Coefficients on the even and on the odd coordinates.
pub type Coefficients<S> = (Vec<AlgebraElement<S>>, Vec<AlgebraElement<S>>);

/// The `x_A`-derivation
/// `X(s) = Σ f_i x_A(∂s/∂x_i) + Σ F_j x_A(∂s/∂θ_j)`.
#[derive(Clone, Debug)]
pub struct Derivation<S: Scalar> {
    at: APoint<S>,
    f_even: Vec<AlgebraElement<S>>,
    f_odd: Vec<AlgebraElement<S>>,
    odd: bool,
}

impl<S: Scalar> Derivation<S> {
    /// An even derivation has even `f_i` and odd `F_j`; an odd one the
    /// reverse.
    pub fn new(
        at: &APoint<S>,
        f_even: Vec<AlgebraElement<S>>,
        f_odd: Vec<AlgebraElement<S>>,
        odd: bool,
    ) -> Result<Self> {
        let d = at.domain();
        if f_even.len() != d.even_dim() || f_odd.len() != d.odd_dim() {
            return Err(Error::Dimension(format!(
                "derivation on K^{{{}|{}}} needs {}|{} coefficients",
                d.even_dim(),
                d.odd_dim(),
                d.even_dim(),
                d.odd_dim()
            )));
        }
        let a = at.algebra();
        for c in f_even.iter().chain(&f_odd) {
            if !c.algebra().same(a) {
                return Err(Error::AlgebraMismatch("derivation coefficient outside the point's algebra".into()));
            }
        }
        let fits = |c: &AlgebraElement<S>, want_odd: bool| {
            if want_odd {
                c.parity().is_odd()
            } else {
                c.parity().is_even()
            }
        };
        for (i, c) in f_even.iter().enumerate() {
            if !fits(c, odd) {
                return Err(Error::Parity(format!("f{} has the wrong parity", i + 1)));
            }
        }
        for (j, c) in f_odd.iter().enumerate() {
            if !fits(c, !odd) {
                return Err(Error::Parity(format!("F{} has the wrong parity", j + 1)));
            }
        }
        Ok(Derivation {
            at: at.clone(),
            f_even,
            f_odd,
            odd,
        })
    }

    pub fn point(&self) -> &APoint<S> {
        &self.at
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd)
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn even_coefficients(&self) -> &[AlgebraElement<S>] {
        &self.f_even
    }

    pub fn odd_coefficients(&self) -> &[AlgebraElement<S>] {
        &self.f_odd
    }

    pub fn apply(&self, s: &Section) -> Result<AlgebraElement<S>> {
        let mut acc = AlgebraElement::zero(self.at.algebra());
        for (i, f) in self.f_even.iter().enumerate() {
            acc = acc + f * &self.at.eval_ast(&s.derive(Var::Even(i)))?;
        }
        for (j, f) in self.f_odd.iter().enumerate() {
            acc = acc + f * &self.at.eval_ast(&s.derive(Var::Odd(j)))?;
        }
        Ok(acc)
    }

    /// `(X(x_1), …, X(x_p))` and `(X(θ_1), …, X(θ_q))`.
    pub fn recover_coefficients(&self) -> Result<Coefficients<S>> {
        let d = self.at.domain();
        let coord = |e: Expr| Section::new(d, e);
        let even = (0..d.even_dim())
            .map(|i| self.apply(&coord(Expr::x(i))?))
            .collect::<Result<_>>()?;
        let odd = (0..d.odd_dim())
            .map(|j| self.apply(&coord(Expr::theta(j))?))
            .collect::<Result<_>>()?;
        Ok((even, odd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SuperWeilAlgebra;
    use crate::scalar::Rational;
    use crate::superfunc::SuperDomain;

    type E = AlgebraElement<Rational>;

    #[test]
    fn formula_example() {
        let g = SuperWeilAlgebra::grassmann(1).unwrap();
        let u = SuperDomain::full(1, 1);
        let x = APoint::new(&u, &g, vec![E::one(&g)], vec![E::zero(&g)]).unwrap();
        let zeta = E::odd_generator(&g, 0);
        let d = Derivation::new(&x, vec![E::zero(&g)], vec![zeta.clone()], false).unwrap();
        assert_eq!(d.apply(&Section::parse(&u, "x1*theta1").unwrap()).unwrap(), zeta);
        let zero = Derivation::new(&x, vec![E::zero(&g)], vec![E::zero(&g)], true).unwrap();
        assert!(zero.apply(&Section::parse(&u, "exp(x1)").unwrap()).is_err());
        assert!(zero.apply(&Section::parse(&u, "x1^3*theta1").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn leibniz_with_sign() {
        let a = SuperWeilAlgebra::truncated(1, 2, 3).unwrap();
        let u = SuperDomain::full(1, 1);
        let t = E::even_generator(&a, 0);
        let z1 = E::odd_generator(&a, 0);
        let z2 = E::odd_generator(&a, 1);
        let two = E::from_scalar(&a, Rational::from_i64(2));
        let x = APoint::new(&u, &a, vec![&two + &t], vec![z1.clone()]).unwrap();
        for (fe, fo, odd) in [(t.clone(), z2.clone(), false), (z2.clone(), t.clone(), true)] {
            let d = Derivation::new(&x, vec![fe], vec![fo], odd).unwrap();
            for (s, tt) in [("x1*theta1", "x1"), ("theta1", "x1^2 + theta1"), ("x1^2", "theta1")] {
                let s = Section::parse(&u, s).unwrap();
                let tt = Section::parse(&u, tt).unwrap();
                let lhs = d.apply(&s.mul(&tt).unwrap()).unwrap();
                let sign = if odd && s.expr().parity() == Parity::Odd { -1 } else { 1 };
                let rhs = d.apply(&s).unwrap() * x.eval_ast(&tt).unwrap()
                    + (x.eval_ast(&s).unwrap() * d.apply(&tt).unwrap()).scale(&Rational::from_i64(sign));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn coefficients_are_recovered() {
        let g = SuperWeilAlgebra::grassmann(2).unwrap();
        let u = SuperDomain::full(1, 1);
        let x = APoint::new(&u, &g, vec![E::one(&g)], vec![E::odd_generator(&g, 1)]).unwrap();
        let f = vec![E::odd_generator(&g, 0)];
        let big_f = vec![E::one(&g) + E::odd_generator(&g, 0) * E::odd_generator(&g, 1)];
        let d = Derivation::new(&x, f.clone(), big_f.clone(), true).unwrap();
        assert_eq!(d.recover_coefficients().unwrap(), (f, big_f));
    }

    #[test]
    fn parity_rules() {
        let g = SuperWeilAlgebra::grassmann(1).unwrap();
        let u = SuperDomain::full(1, 0);
        let x = APoint::at_base(&u, &g, &[Rational::from_i64(0)]).unwrap();
        assert!(Derivation::new(&x, vec![E::odd_generator(&g, 0)], vec![], false).is_err());
        assert!(Derivation::new(&x, vec![E::odd_generator(&g, 0)], vec![], true).is_ok());
    }
}
