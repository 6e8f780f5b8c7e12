use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::Monomial;
use super::weil::SuperWeilAlgebra;
use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::scalar::{Coef, Scalar};

/// An element of a super Weil algebra, stored densely over the quotient
/// basis and therefore always in normal form.
#[derive(Clone)]
pub struct AlgebraElement<S> {
    algebra: SuperWeilAlgebra,
    coeffs: Vec<S>,
}

impl<S: Scalar> PartialEq for AlgebraElement<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.algebra == other.algebra
    }
}

impl<S: Scalar> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.algebra.basis_names();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("{c:?}*{n}"))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(algebra: &SuperWeilAlgebra) -> Self {
        AlgebraElement {
            coeffs: vec![S::zero(); algebra.dim()],
            algebra: algebra.clone(),
        }
    }

    pub fn from_scalar(algebra: &SuperWeilAlgebra, c: S) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[0] = c;
        e
    }

    pub fn one(algebra: &SuperWeilAlgebra) -> Self {
        Self::from_scalar(algebra, S::one())
    }

    pub fn from_coeffs(algebra: &SuperWeilAlgebra, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::Dimension(format!(
                "{} coefficients for an algebra of dimension {}",
                coeffs.len(),
                algebra.dim()
            )));
        }
        Ok(AlgebraElement {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    /// Normal form of `Σ c·m` for arbitrary ambient monomials `m`.
    pub fn from_terms(algebra: &SuperWeilAlgebra, terms: &[(Monomial, S)]) -> Self {
        AlgebraElement {
            coeffs: algebra.reduce_ambient(terms),
            algebra: algebra.clone(),
        }
    }

    pub fn monomial(algebra: &SuperWeilAlgebra, m: &Monomial, c: S) -> Self {
        Self::from_terms(algebra, &[(m.clone(), c)])
    }

    /// The `i`-th even generator `t_{i+1}` in normal form.
    pub fn even_generator(algebra: &SuperWeilAlgebra, i: usize) -> Self {
        let m = Monomial::even_generator(algebra.even_generators(), i);
        Self::monomial(algebra, &m, S::one())
    }

    /// The `j`-th odd generator `z_{j+1}` in normal form.
    pub fn odd_generator(algebra: &SuperWeilAlgebra, j: usize) -> Self {
        let m = Monomial::odd_generator(algebra.even_generators(), j);
        Self::monomial(algebra, &m, S::one())
    }

    pub fn algebra(&self) -> &SuperWeilAlgebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of a quotient-basis monomial (zero if `m` is not one).
    pub fn coeff_of(&self, m: &Monomial) -> S {
        self.algebra
            .basis_index(m)
            .map_or_else(S::zero, |i| self.coeffs[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(S::is_zero)
    }

    /// The scalar part `ā`.
    pub fn body(&self) -> S {
        self.coeffs[0].clone()
    }

    /// The nilpotent part `ȧ = a − ā`.
    pub fn soul(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = S::zero();
        s
    }

    fn project(&self, odd: bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.algebra.basis_is_odd(i) == odd {
                    c.clone()
                } else {
                    S::zero()
                }
            })
            .collect();
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs,
        }
    }

    pub fn even_part(&self) -> Self {
        self.project(false)
    }

    pub fn odd_part(&self) -> Self {
        self.project(true)
    }

    pub fn parity(&self) -> Parity {
        let mut p = Parity::Zero;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p = p + Parity::from_bit(self.algebra.basis_is_odd(i));
            }
        }
        p
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.algebra.same(&other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "{:?} vs {:?}",
                self.algebra.basis_names(),
                other.algebra.basis_names()
            )))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (k, c) in self.algebra.basis_product(i, j).iter() {
                    let slot = &mut out[*k as usize];
                    let prod = a.clone() * b.clone();
                    *slot = match c {
                        Coef::One => slot.clone() + prod,
                        Coef::MinusOne => slot.clone() - prod,
                        other => slot.clone() + prod * S::from_coef(other),
                    };
                }
            }
        }
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: out,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.algebra);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `[1, a, a², …, a^r]` where `a^{r+1} = 0`, capped at `height + 1` terms.
    pub fn powers_until_zero(&self) -> Vec<Self> {
        let cap = self.algebra.height() + 1;
        let mut out = vec![Self::one(&self.algebra)];
        if self.is_zero() {
            return out;
        }
        while out.len() <= cap {
            let next = out.last().unwrap().mul_unchecked(self);
            if next.is_zero() {
                break;
            }
            out.push(next);
        }
        out
    }

    /// Inverse of an even element with nonzero body, via the finite
    /// geometric series on the soul.
    pub fn invert(&self) -> Result<Self> {
        if !self.odd_part().is_zero() {
            return Err(Error::NotInvertible("element has a nonzero odd part"));
        }
        let inv_body = self
            .body()
            .recip()
            .ok_or(Error::NotInvertible("element has zero body"))?;
        let ratio = self.soul().scale(&-inv_body.clone());
        let mut sum = Self::zero(&self.algebra);
        for p in ratio.powers_until_zero() {
            sum = sum + &p;
        }
        Ok(sum.scale(&inv_body))
    }

    /// Largest coefficient-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    /// Coefficient-wise comparison relative to the larger of the two norms
    /// (floor 1); exact for rationals.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        if !self.algebra.same(&other.algebra) {
            return false;
        }
        if S::KIND == crate::scalar::ScalarKind::Rational {
            return self.coeffs == other.coeffs;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.approx_eq(b, rel_tol))
            || self.max_abs_diff(other) <= rel_tol * self.max_abs().max(other.max_abs()).max(1.0)
    }

    /// Converts coefficients into another scalar field.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Sparse `(basis name, coefficient)` pairs in basis order.
    pub fn terms(&self) -> Vec<(String, S)> {
        self.algebra
            .basis_names()
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n, c.clone()))
            .collect()
    }
}

fn assert_same<S: Scalar>(a: &AlgebraElement<S>, b: &AlgebraElement<S>) {
    assert!(
        a.algebra.same(&b.algebra),
        "arithmetic on elements of different algebras"
    );
}

impl<S: Scalar> Add<&AlgebraElement<S>> for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        assert_same(self, rhs);
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<S: Scalar> Add<&AlgebraElement<S>> for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        &self + rhs
    }
}

impl<S: Scalar> Add for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: AlgebraElement<S>) -> AlgebraElement<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub<&AlgebraElement<S>> for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn sub(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        assert_same(self, rhs);
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<S: Scalar> Sub for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn sub(self, rhs: AlgebraElement<S>) -> AlgebraElement<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul<&AlgebraElement<S>> for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
        assert_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl<S: Scalar> Mul for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: AlgebraElement<S>) -> AlgebraElement<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn neg(self) -> AlgebraElement<S> {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn neg(self) -> AlgebraElement<S> {
        -&self
    }
}
