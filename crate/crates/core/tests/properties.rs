use proptest::prelude::*;
use rand::Rng;

use superweil::algebra::{AlgebraElement, AlgebraMorphism, SuperWeilAlgebra};
use superweil::apoints::APoint;
use superweil::calculus::TangentVector;
use superweil::nattrans::{check_comes_from_morphism, TruncatedFormalSeries};
use superweil::parity::Parity;
use superweil::scalar::{Rational, Scalar};
use superweil::superfunc::{parse_expr, Section, SuperDomain, Var};
use superweil::testing::*;
use superweil::workspace::{PointEntry, SectionEntry, Workspace};

type Q = AlgebraElement<Rational>;

fn domain(r: &mut TestRng) -> SuperDomain {
    SuperDomain::full(r.gen_range(1..=2), r.gen_range(0..=2))
}

fn poly(r: &mut TestRng, p: usize, q: usize) -> superweil::superfunc::Expr {
    let odd = r.gen_bool(0.5);
    random_polynomial(r, p, q, odd)
}

fn analytic(r: &mut TestRng, p: usize, q: usize) -> superweil::superfunc::Expr {
    let odd = r.gen_bool(0.5);
    random_analytic(r, p, q, odd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_any_algebra(&mut r);
        let (x, y, z): (Q, Q, Q) = (random_element(&mut r, &a), random_element(&mut r, &a), random_element(&mut r, &a));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&Q::one(&a) * &x, x.clone());
        let (p, q) = (r.gen_bool(0.5), r.gen_bool(0.5));
        let (hp, hq): (Q, Q) = (random_homogeneous(&mut r, &a, p), random_homogeneous(&mut r, &a, q));
        let sign = Rational::from_i64(if p && q { -1 } else { 1 });
        prop_assert_eq!(&hp * &hq, (&hq * &hp).scale(&sign));
        prop_assert!(x.soul().pow(a.height() as u32 + 1).is_zero());
    }

    #[test]
    fn quotient_dimensions_add_up(seed in any::<u64>()) {
        let (amb, q) = random_monomial_quotient(&mut rng(seed));
        prop_assert_eq!(q.dim() + q.ideal_rank(), amb.dim());
        prop_assert!(q.height() <= amb.height());
    }

    #[test]
    fn morphisms_preserve_products_and_bodies(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_any_algebra(&mut r);
        let rho = random_morphism_into::<Rational>(&mut r, &t);
        let a = rho.source().clone();
        let (x, y): (Q, Q) = (random_element(&mut r, &a), random_element(&mut r, &a));
        prop_assert_eq!(rho.apply(&(&x * &y)).unwrap(), &rho.apply(&x).unwrap() * &rho.apply(&y).unwrap());
        prop_assert_eq!(rho.apply(&x).unwrap().body(), x.body());
        let pr = AlgebraMorphism::<Rational>::to_field(&t);
        prop_assert_eq!(pr.apply(&rho.apply(&x).unwrap()).unwrap().body(), x.body());
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = domain(&mut r);
        let a = random_any_algebra(&mut r);
        let x: APoint<Rational> = random_point(&mut r, &u, &a);
        let s = Section::new(&u, poly(&mut r, u.even_dim(), u.odd_dim())).unwrap();
        let t = Section::new(&u, poly(&mut r, u.even_dim(), u.odd_dim())).unwrap();
        let st = s.mul(&t).unwrap();
        prop_assert_eq!(x.eval_ast(&st).unwrap(), &x.eval_ast(&s).unwrap() * &x.eval_ast(&t).unwrap());
        prop_assert_eq!(x.eval_ast(&st).unwrap(), x.eval_taylor(&st).unwrap());
        prop_assert_eq!(x.eval_ast(&s.add(&t).unwrap()).unwrap(), &x.eval_ast(&s).unwrap() + &x.eval_ast(&t).unwrap());
    }

    #[test]
    fn float_paths_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = domain(&mut r);
        let a = random_any_algebra(&mut r);
        let x: APoint<f64> = random_point(&mut r, &u, &a);
        let s = Section::new(&u, analytic(&mut r, u.even_dim(), u.odd_dim())).unwrap();
        prop_assert!(x.eval_ast(&s).unwrap().approx_eq(&x.eval_taylor(&s).unwrap(), 1e-9));
    }

    #[test]
    fn super_leibniz_for_coordinate_derivatives(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = domain(&mut r);
        let (p, q) = (u.even_dim(), u.odd_dim());
        let s = Section::new(&u, poly(&mut r, p, q)).unwrap();
        let t = Section::new(&u, poly(&mut r, p, q)).unwrap();
        let v = if q > 0 && r.gen_bool(0.5) { Var::Odd(r.gen_range(0..q)) } else { Var::Even(r.gen_range(0..p)) };
        let sign = matches!(v, Var::Odd(_)) && s.expr().parity() == Parity::Odd;
        let lhs = s.mul(&t).unwrap().derive(v);
        let second = s.mul(&t.derive(v)).unwrap();
        let second = if sign { Section::new(&u, second.expr().neg()).unwrap() } else { second };
        let rhs = s.derive(v).mul(&t).unwrap().add(&second).unwrap();
        // compare through a generic point, which sees every component
        let a = SuperWeilAlgebra::truncated(p, q, 3).unwrap();
        let x: APoint<Rational> = random_point(&mut r, &u, &a);
        prop_assert_eq!(x.eval_ast(&lhs).unwrap(), x.eval_ast(&rhs).unwrap());
    }

    #[test]
    fn printed_expressions_reparse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = domain(&mut r);
        let (p, q) = (u.even_dim(), u.odd_dim());
        let e = analytic(&mut r, p, q);
        let back = parse_expr(&e.to_string(), p, q).unwrap();
        let a = SuperWeilAlgebra::truncated(p, q, 3).unwrap();
        let x: APoint<f64> = random_point(&mut r, &u, &a);
        let (s, t) = (Section::new(&u, e).unwrap(), Section::new(&u, back).unwrap());
        prop_assert!(x.eval_ast(&s).unwrap().approx_eq(&x.eval_ast(&t).unwrap(), 1e-12));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_any_algebra(&mut r);
        let back = SuperWeilAlgebra::from_json(&a.to_json()).unwrap();
        prop_assert!(back.same(&a));
        prop_assert_eq!(back.basis_names(), a.basis_names());
        let x: Q = random_element(&mut r, &a);
        prop_assert_eq!(Q::from_json(&a, &x.to_json()).unwrap(), x);
        let u = domain(&mut r);
        let pt: APoint<Rational> = random_point(&mut r, &u, &a);
        prop_assert_eq!(APoint::from_json(&pt.to_json()).unwrap(), pt);
    }

    #[test]
    fn morphism_series_pass_the_checker(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = (r.gen_range(1..=2), r.gen_range(0..=2));
        let (m, n) = (r.gen_range(1..=2), r.gen_range(0..=1));
        let phi = random_domain_morphism(&mut r, (p, q), (m, n));
        let f = TruncatedFormalSeries::from_morphism(&phi, 3).unwrap();
        let pts: Vec<Vec<f64>> = (0..2).map(|_| (0..p).map(|_| r.gen_range(-2.0..2.0)).collect()).collect();
        prop_assert!(check_comes_from_morphism(&f, &pts, 1e-9).unwrap().consistent());
        prop_assert_eq!(TruncatedFormalSeries::from_json(&f.to_json()).unwrap(), f.clone());
        let a = SuperWeilAlgebra::truncated(r.gen_range(0..=2), r.gen_range(0..=2), 4).unwrap();
        let x: APoint<Rational> = random_point(&mut r, phi.source(), &a);
        let direct = phi.apply(&x).unwrap();
        let via: Vec<Q> = direct.even_values().iter().chain(direct.odd_values()).cloned().collect();
        prop_assert_eq!(f.apply(&x).unwrap(), via);
    }

    #[test]
    fn tangent_points_round_trip(base in proptest::collection::vec(-4i64..4, 2), ve in proptest::collection::vec(-4i64..4, 2), vo in -4i64..4) {
        let u = SuperDomain::full(2, 1);
        let q = |v: &[i64]| v.iter().map(|&n| Rational::from_i64(n)).collect::<Vec<_>>();
        let tv = TangentVector::new(&u, q(&base), q(&ve), q(&[vo])).unwrap();
        prop_assert_eq!(TangentVector::from_point(&tv.to_point(&u).unwrap()).unwrap(), tv);
    }

    #[test]
    fn workspace_save_load_is_identity(q in 0usize..4, c in -9i64..9) {
        let mut w = Workspace::default();
        w.algebras.insert("A".into(), format!("grassmann:{q}"));
        w.sections.insert("s".into(), SectionEntry { domain: "1|0".into(), expr: format!("{c}*x1^2 + 1") });
        w.points.insert("x".into(), PointEntry { domain: "1|0".into(), algebra: "A".into(), assign: format!("x1 = {c}") });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        w.save(&path).unwrap();
        prop_assert_eq!(Workspace::load(&path).unwrap(), w);
    }
}
