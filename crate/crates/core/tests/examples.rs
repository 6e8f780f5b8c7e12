//! Worked examples through the public API.

use std::collections::BTreeMap;

use superweil::algebra::{AlgebraElement, AlgebraMorphism, SuperWeilAlgebra};
use superweil::apoints::{APoint, DomainMorphism};
use superweil::calculus::{finite_difference_tangent, functional_through_point, transitivity_point, Derivation, Distribution, TangentVector};
use superweil::error::Error;
use superweil::nattrans::{check_comes_from_morphism, TruncatedFormalSeries};
use superweil::notation::{algebra_element, parse_algebra, Assignment};
use superweil::parity::Parity;
use superweil::scalar::{Rational, Scalar};
use superweil::superfunc::{parse_expr, Expr, Section, SuperDomain, Var};

type Q = AlgebraElement<Rational>;

fn alg(spec: &str) -> SuperWeilAlgebra {
    parse_algebra(spec).unwrap()
}

fn el(a: &SuperWeilAlgebra, text: &str) -> Q {
    algebra_element(a, text).unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn section(p: usize, q: usize, text: &str) -> Section {
    Section::parse(&SuperDomain::full(p, q), text).unwrap()
}

fn point(a: &SuperWeilAlgebra, p: usize, q: usize, assign: &str) -> APoint<Rational> {
    Assignment::parse(assign).unwrap().to_point(&SuperDomain::full(p, q), a).unwrap()
}

#[test]
fn truncated_bases() {
    assert_eq!(alg("trunc:1,0,3").basis_names(), ["1", "t1", "t1^2"]);
    assert_eq!(alg("trunc:0,2,3").basis_names(), ["1", "z1", "z2", "z1z2"]);
    assert_eq!(alg("trunc:1,1,2").basis_names(), ["1", "t1", "z1"]);
}

#[test]
fn grassmann_algebras() {
    assert_eq!(alg("grassmann:0").dim(), 1);
    let g2 = alg("grassmann:2");
    assert_eq!(g2.dim(), 4);
    assert_eq!(&el(&g2, "z2") * &el(&g2, "z1"), el(&g2, "-z1*z2"));
    let g3 = alg("grassmann:3");
    let s = el(&g3, "z1+z2+z3");
    assert!(s.pow(3).is_zero());
    assert!(!el(&g3, "z1*z2*z3").is_zero());
    assert_eq!((g3.height(), g3.width()), (3, 3));
}

#[test]
fn super_dual_numbers() {
    let d = alg("superdual");
    assert!((&el(&d, "t1") * &el(&d, "z1")).is_zero());
    assert_eq!(&el(&d, "1+t1") * &el(&d, "1+t1"), el(&d, "1+2*t1"));
    assert_eq!((d.height(), d.width()), (1, 2));
    let k = alg("K");
    assert_eq!((k.height(), k.width()), (0, 0));
}

#[test]
fn quotients() {
    let a = alg("quot:trunc:1,1,3;t1*z1");
    assert_eq!(a.basis_names(), ["1", "t1", "z1", "t1^2"]);
    assert_eq!(alg("quot:trunc:1,1,3").dim(), alg("trunc:1,1,3").dim());
    assert_eq!(alg("quot:trunc:1,0,3;t1^2").basis_names(), alg("dual").basis_names());
}

#[test]
fn products_and_parts() {
    let g = alg("grassmann:2");
    assert!((&el(&g, "z1+z2") * &el(&g, "z1+z2")).is_zero());
    let t = alg("trunc:1,0,3");
    assert_eq!(&el(&t, "1+t1") * &el(&t, "1+t1"), el(&t, "1+2*t1+t1^2"));
    let x = el(&g, "3+2*z1*z2");
    assert_eq!(x.body(), r(3, 1));
    assert_eq!(x.soul(), el(&g, "2*z1*z2"));
    assert!(x.soul().pow(2).is_zero());
    assert_eq!(el(&g, "z1+z1*z2").parity(), Parity::Mixed);
}

#[test]
fn inverses() {
    let t = alg("trunc:1,0,3");
    assert_eq!(el(&t, "1+t1").invert().unwrap(), el(&t, "1-t1+t1^2"));
    assert_eq!(el(&t, "2").invert().unwrap(), el(&t, "1/2"));
    let g = alg("grassmann:1");
    assert!(matches!(el(&g, "z1").invert(), Err(Error::NotInvertible(_))));
}

#[test]
fn tensor_products() {
    let dd = alg("tensor:dual,dual");
    assert_eq!(dd.dim(), 4);
    let gg = alg("tensor:grassmann:1,grassmann:1");
    let (a, b) = (el(&gg, "z1"), el(&gg, "z2"));
    assert_eq!(&a * &b, (&b * &a).scale(&r(-1, 1)));
    assert!(!(&a * &b).is_zero());
}

#[test]
fn morphisms() {
    let g = alg("grassmann:2");
    let pr = AlgebraMorphism::<Rational>::to_field(&g);
    assert_eq!(pr.apply(&el(&g, "3+z1*z2")).unwrap().body(), r(3, 1));
    let swap = AlgebraMorphism::new(&g, &g, vec![], vec![el(&g, "z2"), el(&g, "z1")]).unwrap();
    assert_eq!(swap.apply(&el(&g, "z1*z2")).unwrap(), el(&g, "-z1*z2"));
    // z1 -> 1 moves the base point and is refused
    assert!(AlgebraMorphism::new(&g, &g, vec![], vec![el(&g, "z1"), el(&g, "1")]).is_err());
}

#[test]
fn joins() {
    let a = alg("trunc:1,1,3");
    let j = a.join(&a).unwrap();
    assert_eq!(j.algebra.dim(), a.dim());
    let d = alg("quot:trunc:1,0,3;t1^2");
    let t = alg("trunc:1,0,3");
    assert_eq!(d.join(&t).unwrap().algebra.dim(), 3);
    let l1 = alg("quot:trunc:1,1,2;t1");
    let kt = alg("quot:trunc:1,1,2;z1");
    assert_eq!(l1.join(&kt).unwrap().algebra.dim(), 3);
}

#[test]
fn expressions() {
    assert_eq!(parse_expr("x1^2 + theta1*theta2", 1, 2).unwrap().parity(), Parity::Even);
    assert!(matches!(parse_expr("sin(theta1)", 0, 1), Err(Error::AnalyticOnOdd(_))));
    assert_eq!(parse_expr("exp(x1 + theta1*theta2)", 1, 2).unwrap().parity(), Parity::Even);
}

#[test]
fn derivatives() {
    let s = section(1, 2, "theta1*theta2");
    assert_eq!(s.derive(Var::Odd(0)).expr().components().unwrap(), section(1, 2, "theta2").expr().components().unwrap());
    assert_eq!(s.derive(Var::Odd(1)).expr().components().unwrap(), section(1, 2, "-theta1").expr().components().unwrap());
    let t = section(1, 1, "x1^2*theta1").derive(Var::Even(0));
    assert_eq!(t.eval_classical(&[r(3, 1)]).unwrap(), r(0, 1));
    let c = t.components().unwrap();
    assert_eq!(c[&1].eval_scalar(&[r(3, 1)]).unwrap(), r(6, 1));
}

#[test]
fn components() {
    let c = section(1, 2, "x1^2 + theta1*theta2").components().unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c[&0b11].eval_scalar(&[r(5, 1)]).unwrap(), r(1, 1));
    let e = section(1, 2, "exp(x1 + theta1*theta2)").components().unwrap();
    assert!((e[&0].eval_scalar(&[0.5]).unwrap() - 0.5f64.exp()).abs() < 1e-15);
    assert!((e[&0b11].eval_scalar(&[0.5]).unwrap() - 0.5f64.exp()).abs() < 1e-15);
    assert!(section(0, 1, "theta1*theta1").components().unwrap().is_empty());
}

#[test]
fn classical_values() {
    assert_eq!(section(1, 2, "x1^2 + theta1*theta2").eval_classical(&[r(3, 1)]).unwrap(), r(9, 1));
    assert_eq!(section(1, 1, "theta1").eval_classical(&[r(7, 1)]).unwrap(), r(0, 1));
    assert_eq!(section(1, 0, "exp(x1)").eval_classical(&[0.0]).unwrap(), 1.0);
}

#[test]
fn point_evaluation() {
    let t = alg("trunc:1,0,3");
    let x = point(&t, 1, 0, "x1 = 1 + t1");
    assert_eq!(x.base_point(), vec![r(1, 1)]);
    assert_eq!(x.eval_ast(&section(1, 0, "x1^2")).unwrap(), el(&t, "1+2*t1+t1^2"));
    let y: APoint<Rational> = point(&t, 1, 0, "x1 = t1");
    let e = section(1, 0, "exp(x1)");
    assert!(matches!(y.eval_ast(&e), Err(Error::NeedsFloat(_))));
    let yf: APoint<f64> = Assignment::parse("x1 = t1").unwrap().to_point(&SuperDomain::full(1, 0), &t).unwrap();
    assert_eq!(yf.eval_ast(&e).unwrap().coeffs(), &[1.0, 1.0, 0.5]);
    let g = alg("grassmann:2");
    let z = point(&g, 0, 2, "th1 = z1, th2 = z2");
    assert_eq!(z.eval_taylor(&section(0, 2, "theta1*theta2")).unwrap(), el(&g, "z1*z2"));
    // odd coordinate given an even value
    assert!(Assignment::parse("x1 = 1, th1 = z1*z2").unwrap().to_point::<Rational>(&SuperDomain::full(1, 1), &g).is_err());
}

#[test]
fn pushforwards() {
    let t3 = alg("trunc:1,0,3");
    let t2 = alg("trunc:1,0,2");
    let x = point(&t3, 1, 0, "x1 = 1 + t1 + t1^2");
    let rho = AlgebraMorphism::new(&t3, &t2, vec![el(&t2, "t1")], vec![]).unwrap();
    assert_eq!(x.pushforward(&rho).unwrap(), point(&t2, 1, 0, "x1 = 1 + t1"));
    let base = x.pushforward(&AlgebraMorphism::to_field(&t3)).unwrap();
    assert_eq!(base.even_values()[0].coeffs(), &[r(1, 1)]);
}

#[test]
fn domain_morphisms() {
    let src = SuperDomain::full(1, 2);
    let phi = DomainMorphism::parse(&src, &SuperDomain::full(1, 0), &["x1 + theta1*theta2"], &[]).unwrap();
    let g = alg("grassmann:2");
    let x = point(&g, 1, 2, "x1=2, th1=z1, th2=z2");
    assert_eq!(phi.apply(&x).unwrap().even_values()[0], el(&g, "2+z1*z2"));
    assert_eq!(DomainMorphism::identity(&src).apply(&x).unwrap(), x);
}

#[test]
fn tangent_vectors() {
    let u = SuperDomain::full(1, 1);
    let tv = TangentVector::new(&u, vec![r(2, 1)], vec![r(1, 1)], vec![r(1, 1)]).unwrap();
    let v = tv.to_point(&u).unwrap().eval_ast(&section(1, 1, "x1*theta1")).unwrap();
    assert_eq!(v.coeffs(), &[r(0, 1), r(0, 1), r(2, 1)]);
    assert_eq!(TangentVector::from_point(&tv.to_point(&u).unwrap()).unwrap(), tv);
    let sq = TangentVector::new(&SuperDomain::full(1, 0), vec![r(3, 1)], vec![r(1, 1)], vec![])
        .unwrap()
        .apply(&SuperDomain::full(1, 0), &section(1, 0, "x1^2"))
        .unwrap();
    assert_eq!((sq.value, sq.d_even), (r(9, 1), r(6, 1)));
    let fd = finite_difference_tangent(&section(1, 0, "x1^2"), &[3.0], &[1.0], 1e-5).unwrap();
    assert!((fd - 6.0).abs() <= 1e-8);
    let fd = finite_difference_tangent(&section(1, 0, "sin(x1)"), &[0.0], &[1.0], 1e-5).unwrap();
    assert!((fd - 1.0).abs() <= 1e-9);
}

#[test]
fn derivation_zero() {
    let g = alg("grassmann:2");
    let x = point(&g, 1, 1, "x1 = 1, th1 = z1");
    let d = Derivation::new(&x, vec![Q::zero(&g)], vec![Q::zero(&g)], false).unwrap();
    assert!(d.apply(&section(1, 1, "x1^3*theta1 + x1")).unwrap().is_zero());
}

#[test]
fn distributions() {
    let u = SuperDomain::full(1, 1);
    let mut c = BTreeMap::new();
    c.insert((vec![1], 1), r(1, 1));
    let v = Distribution::new(&u, vec![r(0, 1)], 2, c).unwrap();
    assert_eq!(v.pair(&u, &section(1, 1, "x1*theta1")).unwrap(), r(1, 1));
    let mut c = BTreeMap::new();
    c.insert((vec![0], 0), r(1, 1));
    let ev = Distribution::new(&u, vec![r(2, 1)], 0, c).unwrap();
    assert_eq!(ev.pair(&u, &section(1, 1, "x1^2 + 1")).unwrap(), r(5, 1));
    let mut c = BTreeMap::new();
    c.insert((vec![2], 0), r(1, 1));
    let k2 = Distribution::new(&u, vec![r(0, 1)], 2, c).unwrap();
    assert_eq!(k2.pair(&u, &section(1, 1, "x1^3")).unwrap(), r(0, 1));
}

#[test]
fn functionals() {
    let u = SuperDomain::full(1, 0);
    let d = alg("dual");
    let x = point(&d, 1, 0, "x1 = 3 + t1");
    let s = section(1, 0, "x1^3");
    assert_eq!(functional_through_point(&[r(1, 1), r(0, 1)], &x, &s).unwrap(), r(27, 1));
    assert_eq!(functional_through_point(&[r(0, 1), r(1, 1)], &x, &s).unwrap(), r(27, 1));
    assert_eq!(functional_through_point(&[r(0, 1), r(0, 1)], &x, &s).unwrap(), r(0, 1));
    assert_eq!(x.domain().even_dim(), u.even_dim());
}

#[test]
fn transitivity() {
    let u = SuperDomain::full(1, 0);
    let (a, b0) = (alg("dual"), alg("dual"));
    let t = a.tensor(&b0).unwrap().algebra;
    let x1 = el(&t, "5 + 2*t1 + 3*t2 + 7*t1*t2");
    let tp = transitivity_point(&u, &a, &b0, vec![x1], vec![]).unwrap();
    let c = tp.check(&section(1, 0, "x1^2")).unwrap();
    assert_eq!(c.direct, el(&t, "25 + 20*t1 + 30*t2 + 82*t1*t2"));
    assert_eq!(c.residual, 0.0);

    let g = alg("grassmann:2");
    let b0 = alg("trunc:1,0,2");
    let t = g.tensor(&b0).unwrap().algebra;
    let x1: AlgebraElement<f64> = algebra_element(&t, "z1*z2 + t1").unwrap();
    let tp = transitivity_point(&u, &g, &b0, vec![x1], vec![]).unwrap();
    assert!(tp.check(&section(1, 0, "exp(x1)")).unwrap().residual <= 1e-12);
    assert!(matches!(transitivity_point::<Rational>(&u, &g, &g, vec![], vec![]), Err(Error::NotPurelyEven)));
}

#[test]
fn series_examples() {
    let src = SuperDomain::full(1, 2);
    let phi = DomainMorphism::parse(&src, &SuperDomain::full(1, 0), &["x1 + theta1*theta2"], &[]).unwrap();
    let f = TruncatedFormalSeries::from_morphism(&phi, 2).unwrap();
    let at = |nu: u32, mask: u64| f.coefficient(0, &[nu], mask).eval_scalar(&[r(5, 1)]).unwrap();
    assert_eq!([at(0, 0), at(1, 0), at(2, 0), at(0, 3), at(1, 3)], [r(5, 1), r(1, 1), r(0, 1), r(1, 1), r(0, 1)]);
    let g = alg("grassmann:2");
    let x = point(&g, 1, 2, "x1=2, th1=z1, th2=z2");
    assert_eq!(f.apply(&x).unwrap(), vec![el(&g, "2+z1*z2")]);
    assert!(check_comes_from_morphism(&f, &[vec![0.3], vec![-2.0]], 1e-12).unwrap().consistent());

    let e = DomainMorphism::parse(&SuperDomain::full(1, 0), &SuperDomain::full(1, 0), &["exp(x1)"], &[]).unwrap();
    let fe = TruncatedFormalSeries::from_morphism(&e, 2).unwrap();
    let v = fe.coefficient(0, &[2], 0).eval_scalar(&[1.0]).unwrap();
    assert!((v - std::f64::consts::E / 2.0).abs() < 1e-15);

    let mut slot = BTreeMap::new();
    slot.insert((vec![0], 0), Expr::x(0).pow(2).unwrap());
    let bad = TruncatedFormalSeries::new((1, 0), (1, 0), 2, vec![slot]).unwrap();
    let rep = check_comes_from_morphism(&bad, &[vec![1.0], vec![-0.5], vec![0.0]], 1e-9).unwrap();
    assert_eq!(rep.violations.len(), 2);
    assert!(rep.violations.iter().all(|v| v.point[0] != 0.0));

    let mut slot = BTreeMap::new();
    slot.insert((vec![0], 0), Expr::int(4));
    let constant = TruncatedFormalSeries::new((1, 0), (1, 0), 2, vec![slot]).unwrap();
    assert!(check_comes_from_morphism(&constant, &[vec![1.0], vec![2.0]], 1e-9).unwrap().consistent());
}
