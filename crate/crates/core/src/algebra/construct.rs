//! Algebras built from other algebras: quotients by graded ideals, graded
//! tensor products, and the join of two presentations over a common ambient.

use super::element::AlgebraElement;
use super::monomial::{exponents_of_degree, odd_subsets, Monomial};
use super::morphism::AlgebraMorphism;
use super::weil::SuperWeilAlgebra;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

type Terms = Vec<(Monomial, Rational)>;

fn element_terms(e: &AlgebraElement<Rational>) -> Terms {
    e.algebra()
        .basis()
        .iter()
        .zip(e.coeffs())
        .filter(|(_, c)| !Scalar::is_zero(*c))
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

impl<S: Scalar> AlgebraMorphism<S> {
    /// `t_i ↦ t_i`, `z_j ↦ z_j` between two presentations on the same
    /// generators; valid whenever the target's ideal contains the source's.
    pub fn generator_map(source: &SuperWeilAlgebra, target: &SuperWeilAlgebra) -> Result<Self> {
        if source.even_generators() != target.even_generators()
            || source.odd_generators() != target.odd_generators()
        {
            return Err(Error::MismatchedAmbients("generator counts differ".into()));
        }
        let even = (0..target.even_generators())
            .map(|i| AlgebraElement::even_generator(target, i))
            .collect();
        let odd = (0..target.odd_generators())
            .map(|j| AlgebraElement::odd_generator(target, j))
            .collect();
        AlgebraMorphism::new(source, target, even, odd)
    }
}

impl SuperWeilAlgebra {
    /// Quotient by the two-sided ideal generated by `gens` inside `self`.
    /// Generators must be parity-homogeneous with zero body.
    pub fn quotient(&self, gens: &[AlgebraElement<Rational>]) -> Result<SuperWeilAlgebra> {
        let mut generators: Vec<Terms> = self.generators().to_vec();
        for g in gens {
            if !g.algebra().same(self) {
                return Err(Error::AlgebraMismatch("ideal generator is not in the ambient".into()));
            }
            if !g.parity().is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            if !Scalar::is_zero(&g.body()) {
                return Err(Error::UnitInIdeal);
            }
            if !g.is_zero() {
                generators.push(element_terms(g));
            }
        }
        SuperWeilAlgebra::build(
            self.even_generators(),
            self.odd_generators(),
            self.truncation(),
            generators,
        )
    }

    /// The canonical projection onto a quotient of `self`.
    pub fn projection_to<S: Scalar>(&self, quotient: &SuperWeilAlgebra) -> Result<AlgebraMorphism<S>> {
        AlgebraMorphism::generator_map(self, quotient)
    }

    /// Graded tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &SuperWeilAlgebra) -> Result<TensorProduct> {
        let (ka, la, sa) = (self.even_generators(), self.odd_generators(), self.truncation());
        let (kb, lb, sb) = (other.even_generators(), other.odd_generators(), other.truncation());
        let k = ka + kb;
        let lift_left = |m: &Monomial| {
            let mut nu = m.nu().to_vec();
            nu.resize(k, 0);
            Monomial::new(nu, m.odd_mask())
        };
        let lift_right = |m: &Monomial| {
            let mut nu = vec![0; ka];
            nu.extend_from_slice(m.nu());
            Monomial::new(nu, m.odd_mask() << la)
        };
        let mut generators: Vec<Terms> = Vec::new();
        for g in self.generators() {
            generators.push(g.iter().map(|(m, c)| (lift_left(m), c.clone())).collect());
        }
        for g in other.generators() {
            generators.push(g.iter().map(|(m, c)| (lift_right(m), c.clone())).collect());
        }
        let one = Rational::from_i64(1);
        for (kk, ll, s, right) in [(ka, la, sa, false), (kb, lb, sb, true)] {
            for w in 0..=ll.min(s as usize) {
                for mask in odd_subsets(ll, w) {
                    for nu in exponents_of_degree(kk, s - w as u32) {
                        let m = Monomial::new(nu, mask);
                        let lifted = if right { lift_right(&m) } else { lift_left(&m) };
                        generators.push(vec![(lifted, one.clone())]);
                    }
                }
            }
        }
        let algebra = SuperWeilAlgebra::build(k, la + lb, sa + sb - 1, generators)?;
        Ok(TensorProduct {
            algebra,
            left: self.clone(),
            right: other.clone(),
        })
    }

    /// The join of two presentations over the same ambient `K[k|l]/m^s`: the
    /// quotient by the intersection of their ideals, which surjects onto
    /// both.
    pub fn join(&self, other: &SuperWeilAlgebra) -> Result<Join> {
        if (self.even_generators(), self.odd_generators(), self.truncation())
            != (other.even_generators(), other.odd_generators(), other.truncation())
        {
            return Err(Error::MismatchedAmbients(format!(
                "K[{}|{}]/m^{} vs K[{}|{}]/m^{}",
                self.even_generators(),
                self.odd_generators(),
                self.truncation(),
                other.even_generators(),
                other.odd_generators(),
                other.truncation()
            )));
        }
        let both = self.ideal().intersection(other.ideal(), self.ambient_dim());
        let ambient = self.ambient_monomials();
        let generators = both
            .rows()
            .map(|(_, row)| row.iter().map(|(c, x)| (ambient[*c].clone(), x.clone())).collect())
            .collect();
        let algebra = SuperWeilAlgebra::build(
            self.even_generators(),
            self.odd_generators(),
            self.truncation(),
            generators,
        )?;
        Ok(Join {
            algebra,
            first: self.clone(),
            second: other.clone(),
        })
    }
}

/// `A ⊗ B` with its structure maps. Generators are ordered
/// `t(A), t(B) | z(A), z(B)`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub algebra: SuperWeilAlgebra,
    pub left: SuperWeilAlgebra,
    pub right: SuperWeilAlgebra,
}

impl TensorProduct {
    fn gens<S: Scalar>(&self, from_left: bool) -> (Vec<AlgebraElement<S>>, Vec<AlgebraElement<S>>) {
        let t = &self.algebra;
        let (ka, la) = (self.left.even_generators(), self.left.odd_generators());
        let (kb, lb) = (self.right.even_generators(), self.right.odd_generators());
        if from_left {
            (
                (0..ka).map(|i| AlgebraElement::even_generator(t, i)).collect(),
                (0..la).map(|j| AlgebraElement::odd_generator(t, j)).collect(),
            )
        } else {
            (
                (0..kb).map(|i| AlgebraElement::even_generator(t, ka + i)).collect(),
                (0..lb).map(|j| AlgebraElement::odd_generator(t, la + j)).collect(),
            )
        }
    }

    /// `a ↦ a ⊗ 1`.
    pub fn left_inclusion<S: Scalar>(&self) -> AlgebraMorphism<S> {
        let (e, o) = self.gens(true);
        AlgebraMorphism::new(&self.left, &self.algebra, e, o).expect("left inclusion")
    }

    /// `b ↦ 1 ⊗ b`.
    pub fn right_inclusion<S: Scalar>(&self) -> AlgebraMorphism<S> {
        let (e, o) = self.gens(false);
        AlgebraMorphism::new(&self.right, &self.algebra, e, o).expect("right inclusion")
    }

    /// `id ⊗ pr_B: A ⊗ B → A`.
    pub fn left_retraction<S: Scalar>(&self) -> AlgebraMorphism<S> {
        let a = &self.left;
        let mut even: Vec<_> = (0..a.even_generators())
            .map(|i| AlgebraElement::even_generator(a, i))
            .collect();
        even.extend(std::iter::repeat_n(AlgebraElement::zero(a), self.right.even_generators()));
        let mut odd: Vec<_> = (0..a.odd_generators())
            .map(|j| AlgebraElement::odd_generator(a, j))
            .collect();
        odd.extend(std::iter::repeat_n(AlgebraElement::zero(a), self.right.odd_generators()));
        AlgebraMorphism::new(&self.algebra, a, even, odd).expect("left retraction")
    }

    /// `pr_A ⊗ id: A ⊗ B → B`.
    pub fn right_retraction<S: Scalar>(&self) -> AlgebraMorphism<S> {
        let b = &self.right;
        let mut even = vec![AlgebraElement::zero(b); self.left.even_generators()];
        even.extend((0..b.even_generators()).map(|i| AlgebraElement::even_generator(b, i)));
        let mut odd = vec![AlgebraElement::zero(b); self.left.odd_generators()];
        odd.extend((0..b.odd_generators()).map(|j| AlgebraElement::odd_generator(b, j)));
        AlgebraMorphism::new(&self.algebra, b, even, odd).expect("right retraction")
    }
}

/// Result of [`SuperWeilAlgebra::join`].
#[derive(Clone, Debug)]
pub struct Join {
    pub algebra: SuperWeilAlgebra,
    pub first: SuperWeilAlgebra,
    pub second: SuperWeilAlgebra,
}

impl Join {
    pub fn to_first<S: Scalar>(&self) -> AlgebraMorphism<S> {
        AlgebraMorphism::generator_map(&self.algebra, &self.first).expect("join projection")
    }

    pub fn to_second<S: Scalar>(&self) -> AlgebraMorphism<S> {
        AlgebraMorphism::generator_map(&self.algebra, &self.second).expect("join projection")
    }
}
