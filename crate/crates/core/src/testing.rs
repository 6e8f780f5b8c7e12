//! Seeded random generators for algebras, elements, points, sections and
//! morphisms at desk scale (dimensions ≤ 256, heights ≤ 6, `p, q ≤ 3`).
//! Shared by `selftest` and the test suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::monomial::monomials_below;
use crate::algebra::{AlgebraElement, AlgebraMorphism, SuperWeilAlgebra};
use crate::apoints::{APoint, DomainMorphism};
use crate::scalar::{Rational, Scalar};
use crate::superfunc::{Expr, Func, SuperDomain};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Grassmann,
    Truncated,
    Dual,
    SuperDual,
    MonomialQuotient,
    Tensor,
}

pub const FAMILIES: [Family; 6] = [
    Family::Grassmann,
    Family::Truncated,
    Family::Dual,
    Family::SuperDual,
    Family::MonomialQuotient,
    Family::Tensor,
];

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Grassmann => "grassmann",
            Family::Truncated => "truncated",
            Family::Dual => "dual",
            Family::SuperDual => "superdual",
            Family::MonomialQuotient => "monomial quotient",
            Family::Tensor => "tensor",
        }
    }
}

pub fn random_algebra(rng: &mut TestRng, family: Family) -> SuperWeilAlgebra {
    match family {
        Family::Grassmann => SuperWeilAlgebra::grassmann(rng.gen_range(0..=4)).unwrap(),
        Family::Truncated => random_truncated(rng),
        Family::Dual => SuperWeilAlgebra::dual_numbers(),
        Family::SuperDual => SuperWeilAlgebra::super_dual_numbers(),
        Family::MonomialQuotient => random_monomial_quotient(rng).1,
        Family::Tensor => {
            let small = |rng: &mut TestRng| match rng.gen_range(0..4) {
                0 => SuperWeilAlgebra::grassmann(rng.gen_range(1..=2)).unwrap(),
                1 => SuperWeilAlgebra::dual_numbers(),
                2 => SuperWeilAlgebra::super_dual_numbers(),
                _ => SuperWeilAlgebra::truncated(1, 0, rng.gen_range(2..=3)).unwrap(),
            };
            let (a, b) = (small(rng), small(rng));
            a.tensor(&b).unwrap().algebra
        }
    }
}

pub fn random_any_algebra(rng: &mut TestRng) -> SuperWeilAlgebra {
    let f = *FAMILIES.choose(rng).unwrap();
    random_algebra(rng, f)
}

/// `K[k|l]/m^s` with `k, l ≤ 2`, `s ≤ 4`.
pub fn random_truncated(rng: &mut TestRng) -> SuperWeilAlgebra {
    let k = rng.gen_range(0..=2);
    let l = rng.gen_range(0..=2);
    let s = rng.gen_range(1..=4);
    SuperWeilAlgebra::truncated(k, l, s).unwrap()
}

/// A truncated ambient and its quotient by a random set of non-constant
/// monomials.
pub fn random_monomial_quotient(rng: &mut TestRng) -> (SuperWeilAlgebra, SuperWeilAlgebra) {
    let k = rng.gen_range(0..=2);
    let l = rng.gen_range(0..=3);
    let s = rng.gen_range(2..=4);
    let amb = SuperWeilAlgebra::truncated(k, l, s).unwrap();
    let candidates: Vec<_> = monomials_below(k, l, s as u32).into_iter().filter(|m| !m.is_one()).collect();
    let count = rng.gen_range(0..=candidates.len().min(3));
    let gens: Vec<AlgebraElement<Rational>> = candidates
        .choose_multiple(rng, count)
        .map(|m| AlgebraElement::monomial(&amb, m, Rational::from_i64(1)))
        .collect();
    let q = amb.quotient(&gens).unwrap();
    (amb, q)
}

fn small_int<S: Scalar>(rng: &mut TestRng) -> S {
    S::from_i64(rng.gen_range(-3..=3))
}

/// Random element with small integer coefficients.
pub fn random_element<S: Scalar>(rng: &mut TestRng, alg: &SuperWeilAlgebra) -> AlgebraElement<S> {
    let coeffs = (0..alg.dim())
        .map(|_| if rng.gen_bool(0.6) { small_int(rng) } else { S::zero() })
        .collect();
    AlgebraElement::from_coeffs(alg, coeffs).unwrap()
}

pub fn random_homogeneous<S: Scalar>(rng: &mut TestRng, alg: &SuperWeilAlgebra, odd: bool) -> AlgebraElement<S> {
    let e = random_element(rng, alg);
    if odd {
        e.odd_part()
    } else {
        e.even_part()
    }
}

pub fn random_nilpotent<S: Scalar>(rng: &mut TestRng, alg: &SuperWeilAlgebra, odd: bool) -> AlgebraElement<S> {
    random_homogeneous(rng, alg, odd).soul()
}

/// Body in `{-1, -1/2, 0, 1/2, 1}`.
pub fn random_body<S: Scalar>(rng: &mut TestRng) -> S {
    S::from_ratio(rng.gen_range(-2..=2), 2)
}

/// A point of the full domain over `alg` with random bodies and souls.
pub fn random_point<S: Scalar>(rng: &mut TestRng, domain: &SuperDomain, alg: &SuperWeilAlgebra) -> APoint<S> {
    let even = (0..domain.even_dim())
        .map(|_| AlgebraElement::from_scalar(alg, random_body(rng)) + random_nilpotent(rng, alg, false))
        .collect();
    let odd = (0..domain.odd_dim()).map(|_| random_nilpotent(rng, alg, true)).collect();
    APoint::new(domain, alg, even, odd).unwrap()
}

fn odd_masks(q: usize, odd: bool) -> Vec<u64> {
    (0..1u64 << q).filter(|m| (m.count_ones() % 2 == 1) == odd).collect()
}

fn random_monomial_expr(rng: &mut TestRng, p: usize, q: usize, odd: bool, max_exp: u32) -> Option<Expr> {
    let masks = odd_masks(q, odd);
    let mask = *masks.choose(rng)?;
    let mut e = Expr::int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
    for i in 0..p {
        let n = rng.gen_range(0..=max_exp);
        if n > 0 {
            e = e.mul(&Expr::x(i).pow(n as i32).unwrap());
        }
    }
    Some(e.mul(&Expr::odd_monomial(mask)))
}

/// A polynomial of the requested parity on `K^{p|q}` (zero if no
/// monomial of that parity exists).
pub fn random_polynomial(rng: &mut TestRng, p: usize, q: usize, odd: bool) -> Expr {
    let terms: Vec<Expr> = (0..rng.gen_range(1..=3))
        .filter_map(|_| random_monomial_expr(rng, p, q, odd, 2))
        .collect();
    let mut e = Expr::sum(&terms);
    if rng.gen_bool(0.3) {
        // a factored piece, so the tree is not already in normal form
        let f = Expr::sum(&(0..2).filter_map(|_| random_monomial_expr(rng, p, q, false, 1)).collect::<Vec<_>>());
        let g: Vec<Expr> = (0..2).filter_map(|_| random_monomial_expr(rng, p, q, odd, 1)).collect();
        e = e.add(&f.add(&Expr::one()).mul(&Expr::sum(&g)));
    }
    e
}

/// Analytic section: polynomial terms plus `f(g)·θ^J` with `g` an even
/// polynomial. `log` and `inv` act on `2 + g²`, so real bodies stay in
/// their domains.
pub fn random_analytic(rng: &mut TestRng, p: usize, q: usize, odd: bool) -> Expr {
    let mut e = random_polynomial(rng, p, q, odd);
    for _ in 0..rng.gen_range(1..=2) {
        let Some(mask) = odd_masks(q, odd).choose(rng).copied() else {
            break;
        };
        let g = random_polynomial(rng, p, q, false).scale(&Rational::from_ratio(1, 4));
        let safe = Expr::int(2).add(&g.mul(&g));
        let f = match rng.gen_range(0..5) {
            0 => g.apply(Func::Exp),
            1 => g.apply(Func::Sin),
            2 => g.apply(Func::Cos),
            3 => safe.apply(Func::Log),
            _ => safe.apply(Func::Recip),
        }
        .unwrap();
        e = e.add(&f.mul(&Expr::odd_monomial(mask)));
    }
    e
}

/// Polynomial morphism `K^{p|q} → K^{m|n}` between full domains.
pub fn random_domain_morphism(rng: &mut TestRng, (p, q): (usize, usize), (m, n): (usize, usize)) -> DomainMorphism {
    let even = (0..m).map(|_| random_polynomial(rng, p, q, false)).collect();
    let odd = (0..n).map(|_| random_polynomial(rng, p, q, true)).collect();
    DomainMorphism::new(&SuperDomain::full(p, q), &SuperDomain::full(m, n), even, odd).unwrap()
}

/// A random morphism into `target` from a truncated algebra whose order
/// exceeds the height of `target`, so any nilpotent images are admissible.
pub fn random_morphism_into<S: Scalar>(rng: &mut TestRng, target: &SuperWeilAlgebra) -> AlgebraMorphism<S> {
    let k = rng.gen_range(0..=2);
    let l = rng.gen_range(0..=2);
    let s = target.height() as i64 + 1;
    let source = SuperWeilAlgebra::truncated(k, l, s).unwrap();
    let even = (0..k).map(|_| random_nilpotent(rng, target, false)).collect();
    let odd = (0..l).map(|_| random_nilpotent(rng, target, true)).collect();
    AlgebraMorphism::new(&source, target, even, odd).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_respect_bounds() {
        let mut r = rng(7);
        for f in FAMILIES {
            for _ in 0..20 {
                let a = random_algebra(&mut r, f);
                assert!(a.dim() <= 256 && a.height() <= 6);
            }
        }
        for _ in 0..20 {
            for odd in [false, true] {
                let e = random_analytic(&mut r, 2, 2, odd);
                assert!(e.is_zero() || e.parity().is_odd() == odd);
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_polynomial(&mut rng(3), 2, 2, false).to_string();
        let b = random_polynomial(&mut rng(3), 2, 2, false).to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn morphisms_are_valid() {
        let mut r = rng(11);
        for _ in 0..20 {
            let t = random_any_algebra(&mut r);
            let rho = random_morphism_into::<Rational>(&mut r, &t);
            assert!(rho.target().same(&t));
        }
    }
}
