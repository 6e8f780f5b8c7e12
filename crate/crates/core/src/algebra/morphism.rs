use std::collections::HashMap;

use super::element::AlgebraElement;
use super::monomial::{exponents_of_degree, odd_subsets, Monomial};
use super::weil::SuperWeilAlgebra;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance for relation checks when the scalars are inexact.
const RELATION_TOL: f64 = 1e-9;

/// A unital, parity-preserving algebra morphism determined by the images of
/// the source generators.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism<S: Scalar> {
    source: SuperWeilAlgebra,
    target: SuperWeilAlgebra,
    even_images: Vec<AlgebraElement<S>>,
    odd_images: Vec<AlgebraElement<S>>,
    basis_images: Vec<AlgebraElement<S>>,
}

fn eval_monomial<S: Scalar>(
    m: &Monomial,
    even: &[AlgebraElement<S>],
    odd: &[AlgebraElement<S>],
    target: &SuperWeilAlgebra,
) -> AlgebraElement<S> {
    let mut acc = AlgebraElement::one(target);
    for (i, &e) in m.nu().iter().enumerate() {
        if e > 0 {
            acc = &acc * &even[i].pow(e);
        }
    }
    for j in m.odd_indices() {
        acc = &acc * &odd[j];
    }
    acc
}

impl<S: Scalar> AlgebraMorphism<S> {
    /// Builds the morphism `t_i ↦ even_images[i]`, `z_j ↦ odd_images[j]`,
    /// checking parity, zero bodies, and that every relation of the source
    /// (ideal rows and the truncation `m^s`) is sent to zero.
    pub fn new(
        source: &SuperWeilAlgebra,
        target: &SuperWeilAlgebra,
        even_images: Vec<AlgebraElement<S>>,
        odd_images: Vec<AlgebraElement<S>>,
    ) -> Result<Self> {
        if even_images.len() != source.even_generators() || odd_images.len() != source.odd_generators() {
            return Err(Error::Dimension(format!(
                "expected {}|{} generator images, got {}|{}",
                source.even_generators(),
                source.odd_generators(),
                even_images.len(),
                odd_images.len()
            )));
        }
        for img in even_images.iter().chain(&odd_images) {
            if !img.algebra().same(target) {
                return Err(Error::AlgebraMismatch("generator image outside the target".into()));
            }
        }
        for (i, img) in even_images.iter().enumerate() {
            if !img.parity().is_even() {
                return Err(Error::Parity(format!("image of t{} is not even", i + 1)));
            }
        }
        for (j, img) in odd_images.iter().enumerate() {
            if !img.parity().is_odd() {
                return Err(Error::Parity(format!("image of z{} is not odd", j + 1)));
            }
        }
        let scale = even_images
            .iter()
            .chain(&odd_images)
            .map(AlgebraElement::max_abs)
            .fold(1.0, f64::max);
        for (i, img) in even_images.iter().enumerate() {
            if !img.body().approx_eq(&S::zero(), RELATION_TOL * scale) {
                return Err(Error::IncompatibleImages(format!(
                    "image of t{} has nonzero body",
                    i + 1
                )));
            }
        }

        let mut cache: HashMap<Monomial, AlgebraElement<S>> = HashMap::new();
        let mut image_of = |m: &Monomial| -> AlgebraElement<S> {
            cache
                .entry(m.clone())
                .or_insert_with(|| eval_monomial(m, &even_images, &odd_images, target))
                .clone()
        };
        let s = source.truncation();
        let tol = RELATION_TOL * scale.powi(s as i32);
        for row in source.ideal_rows() {
            let mut value = AlgebraElement::zero(target);
            for (m, c) in &row {
                value = value + image_of(m).scale(&S::from_rational(c));
            }
            if value.max_abs() > tol || (S::KIND == crate::scalar::ScalarKind::Rational && !value.is_zero()) {
                return Err(Error::IncompatibleImages(format!(
                    "relation {} is not sent to zero",
                    row.iter()
                        .map(|(m, c)| format!("{}*{}", crate::scalar::rational_to_string(c), m.display_with("t", "z")))
                        .collect::<Vec<_>>()
                        .join(" + ")
                )));
            }
        }
        if target.height() >= s as usize {
            let k = source.even_generators();
            for w in 0..=(source.odd_generators().min(s as usize)) {
                for mask in odd_subsets(source.odd_generators(), w) {
                    for nu in exponents_of_degree(k, s - w as u32) {
                        let m = Monomial::new(nu, mask);
                        let v = eval_monomial(&m, &even_images, &odd_images, target);
                        if v.max_abs() > tol || (S::KIND == crate::scalar::ScalarKind::Rational && !v.is_zero()) {
                            return Err(Error::IncompatibleImages(format!(
                                "truncation monomial {} is not sent to zero",
                                m.display_with("t", "z")
                            )));
                        }
                    }
                }
            }
        }

        let basis_images = source
            .basis()
            .iter()
            .map(|m| eval_monomial(m, &even_images, &odd_images, target))
            .collect();
        Ok(AlgebraMorphism {
            source: source.clone(),
            target: target.clone(),
            even_images,
            odd_images,
            basis_images,
        })
    }

    pub fn identity(a: &SuperWeilAlgebra) -> Self {
        let even = (0..a.even_generators())
            .map(|i| AlgebraElement::even_generator(a, i))
            .collect();
        let odd = (0..a.odd_generators())
            .map(|j| AlgebraElement::odd_generator(a, j))
            .collect();
        Self::new(a, a, even, odd).expect("identity is a morphism")
    }

    /// The augmentation `pr_A: A → K` sending every generator to zero.
    pub fn to_field(a: &SuperWeilAlgebra) -> Self {
        let k = SuperWeilAlgebra::field();
        let even = vec![AlgebraElement::zero(&k); a.even_generators()];
        let odd = vec![AlgebraElement::zero(&k); a.odd_generators()];
        Self::new(a, &k, even, odd).expect("augmentation is a morphism")
    }

    /// The unit `j_A: K → A`.
    pub fn from_field(a: &SuperWeilAlgebra) -> Self {
        Self::new(&SuperWeilAlgebra::field(), a, Vec::new(), Vec::new()).expect("unit map")
    }

    pub fn source(&self) -> &SuperWeilAlgebra {
        &self.source
    }

    pub fn target(&self) -> &SuperWeilAlgebra {
        &self.target
    }

    pub fn even_images(&self) -> &[AlgebraElement<S>] {
        &self.even_images
    }

    pub fn odd_images(&self) -> &[AlgebraElement<S>] {
        &self.odd_images
    }

    pub fn apply(&self, a: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
        if !a.algebra().same(&self.source) {
            return Err(Error::AlgebraMismatch("element is not in the morphism's source".into()));
        }
        let mut out = AlgebraElement::zero(&self.target);
        for (c, img) in a.coeffs().iter().zip(&self.basis_images) {
            if !c.is_zero() {
                out = out + img.scale(c);
            }
        }
        Ok(out)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AlgebraMorphism<S>) -> Result<AlgebraMorphism<S>> {
        if !self.target.same(&next.source) {
            return Err(Error::AlgebraMismatch("composition of non-composable morphisms".into()));
        }
        let even = self
            .even_images
            .iter()
            .map(|e| next.apply(e))
            .collect::<Result<_>>()?;
        let odd = self
            .odd_images
            .iter()
            .map(|e| next.apply(e))
            .collect::<Result<_>>()?;
        AlgebraMorphism::new(&self.source, &next.target, even, odd)
    }
}

/// `second ∘ first`.
pub fn compose<S: Scalar>(
    first: &AlgebraMorphism<S>,
    second: &AlgebraMorphism<S>,
) -> Result<AlgebraMorphism<S>> {
    first.then(second)
}
