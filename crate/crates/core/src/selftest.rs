//! The property battery behind `superweil selftest`: every suite draws its
//! own cases from a seed derived from the run seed, so results do not depend
//! on how suites are scheduled across threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::Rng;

use crate::algebra::{AlgebraElement, AlgebraMorphism, SuperWeilAlgebra};
use crate::apoints::APoint;
use crate::calculus::{finite_difference_tangent, transitivity_point, Derivation, Distribution, TangentVector};
use crate::error::Result;
use crate::nattrans::{check_comes_from_morphism, TruncatedFormalSeries};
use crate::parity::Parity;
use crate::scalar::{Rational, Scalar};
use crate::superfunc::{Section, SuperDomain};
use crate::testing::*;

pub const DEFAULT_SEED: u64 = 20240917;

type E = AlgebraElement<Rational>;

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Case = fn(&mut TestRng) -> Result<std::result::Result<(), String>>;

struct Suite {
    name: &'static str,
    cases: usize,
    case: Case,
}

const SUITES: &[Suite] = &[
    Suite { name: "ring laws", cases: 300, case: ring_laws },
    Suite { name: "nilpotency", cases: 300, case: nilpotency },
    Suite { name: "K + nil decomposition", cases: 40, case: decomposition },
    Suite { name: "algebra morphisms", cases: 100, case: morphism_laws },
    Suite { name: "point homomorphism", cases: 100, case: homomorphism },
    Suite { name: "ast vs taylor", cases: 100, case: dual_path },
    Suite { name: "tangent vs finite difference", cases: 60, case: tangent_fd },
    Suite { name: "derivation leibniz", cases: 60, case: leibniz },
    Suite { name: "distribution duality", cases: 60, case: distributions },
    Suite { name: "transitivity", cases: 40, case: transitivity },
    Suite { name: "series checker", cases: 20, case: series },
    Suite { name: "functoriality", cases: 60, case: functoriality },
];

/// Runs every suite with `cases · scale` cases on up to `jobs` threads.
pub fn run(seed: u64, jobs: usize, scale: f64) -> Vec<SuiteResult> {
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<SuiteResult>>> = Mutex::new(vec![None; SUITES.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, SUITES.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(suite) = SUITES.get(i) else { break };
                let r = run_suite(suite, seed.wrapping_add(i as u64 * 0x9E37_79B9), scale);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(Option::unwrap).collect()
}

fn run_suite(suite: &Suite, seed: u64, scale: f64) -> SuiteResult {
    let cases = ((suite.cases as f64 * scale).ceil() as usize).max(1);
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for n in 0..cases {
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (suite.case)(&mut r)));
        let msg = match res {
            Ok(Ok(Ok(()))) => continue,
            Ok(Ok(Err(m))) => m,
            Ok(Err(e)) => format!("error: {e}"),
            Err(_) => "panic".to_string(),
        };
        failures.push(format!("case {n}: {msg}"));
        if failures.len() >= 5 {
            break;
        }
    }
    SuiteResult {
        name: suite.name,
        cases,
        failures,
    }
}

pub fn table(results: &[SuiteResult]) -> String {
    let mut s = format!("{:<30} {:>6}  result\n", "suite", "cases");
    for r in results {
        s += &format!("{:<30} {:>6}  {}\n", r.name, r.cases, if r.passed() { "pass" } else { "FAIL" });
        for f in &r.failures {
            s += &format!("    {f}\n");
        }
    }
    s
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

type Outcome = Result<std::result::Result<(), String>>;

fn ring_laws(r: &mut TestRng) -> Outcome {
    let a = random_any_algebra(r);
    let (x, y, z): (E, E, E) = (random_element(r, &a), random_element(r, &a), random_element(r, &a));
    let one = E::one(&a);
    let ok = &(&x * &y) * &z == &x * &(&y * &z)
        && &x * &(&y + &z) == &(&x * &y) + &(&x * &z)
        && &(&x + &y) * &z == &(&x * &z) + &(&y * &z)
        && &one * &x == x
        && &x * &one == x;
    let (p, q) = (r.gen_bool(0.5), r.gen_bool(0.5));
    let (hp, hq): (E, E) = (random_homogeneous(r, &a, p), random_homogeneous(r, &a, q));
    let sign = if p && q { -1 } else { 1 };
    let comm = &hp * &hq == (&hq * &hp).scale(&Rational::from_i64(sign));
    Ok(ensure(ok && comm, || format!("laws fail in {:?}", a.basis_names())))
}

fn nilpotency(r: &mut TestRng) -> Outcome {
    let a = random_any_algebra(r);
    let x: E = random_element(r, &a);
    Ok(ensure(x.soul().pow(a.height() as u32 + 1).is_zero(), || {
        format!("soul^(h+1) != 0 in {:?}", a.basis_names())
    }))
}

fn decomposition(r: &mut TestRng) -> Outcome {
    let (amb, q) = random_monomial_quotient(r);
    if q.dim() + q.ideal_rank() != amb.dim() {
        return Ok(Err(format!("dim {} + rank {} != {}", q.dim(), q.ideal_rank(), amb.dim())));
    }
    let x: E = random_element(r, &q);
    let to_k = AlgebraMorphism::<Rational>::to_field(&q);
    let from_k = AlgebraMorphism::<Rational>::from_field(&q);
    let body = to_k.apply(&x)?;
    let back = from_k.apply(&body)?;
    Ok(ensure(
        &back + &x.soul() == x && to_k.apply(&x.soul())?.is_zero() && body.coeffs()[0] == x.body(),
        || "A = K + nil fails".into(),
    ))
}

fn morphism_laws(r: &mut TestRng) -> Outcome {
    let t = random_any_algebra(r);
    let rho = random_morphism_into::<Rational>(r, &t);
    let a = rho.source().clone();
    let (x, y): (E, E) = (random_element(r, &a), random_element(r, &a));
    let mult = rho.apply(&(&x * &y))? == &rho.apply(&x)? * &rho.apply(&y)?;
    let base = rho.apply(&x)?.body() == x.body();
    Ok(ensure(mult && base, || "morphism is not multiplicative or moves the body".into()))
}

fn small_domain(r: &mut TestRng) -> SuperDomain {
    SuperDomain::full(r.gen_range(1..=2), r.gen_range(0..=2))
}

fn homomorphism(r: &mut TestRng) -> Outcome {
    let u = small_domain(r);
    let a = random_any_algebra(r);
    let x: APoint<Rational> = random_point(r, &u, &a);
    let (ps, pt) = (r.gen_bool(0.5), r.gen_bool(0.5));
    let s = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), ps))?;
    let t = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), pt))?;
    let lhs = x.eval_ast(&s.mul(&t)?)?;
    let rhs = &x.eval_ast(&s)? * &x.eval_ast(&t)?;
    Ok(ensure(lhs == rhs, || format!("x(st) != x(s)x(t) for s = {}, t = {}", s.expr(), t.expr())))
}

fn dual_path(r: &mut TestRng) -> Outcome {
    let u = small_domain(r);
    let a = random_any_algebra(r);
    let odd = r.gen_bool(0.5);
    let x: APoint<Rational> = random_point(r, &u, &a);
    let s = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), odd))?;
    if x.eval_ast(&s)? != x.eval_taylor(&s)? {
        return Ok(Err(format!("exact paths differ on {}", s.expr())));
    }
    let xf: APoint<f64> = random_point(r, &u, &a);
    let s = Section::new(&u, random_analytic(r, u.even_dim(), u.odd_dim(), odd))?;
    let (p, q) = (xf.eval_ast(&s)?, xf.eval_taylor(&s)?);
    Ok(ensure(p.approx_eq(&q, 1e-9), || format!("float paths differ on {}", s.expr())))
}

fn tangent_fd(r: &mut TestRng) -> Outcome {
    let p = r.gen_range(1..=3);
    let u = SuperDomain::full(p, 0);
    let s = Section::new(&u, random_analytic(r, p, 0, false))?;
    let base: Vec<f64> = (0..p).map(|_| r.gen_range(-1.0..1.0)).collect();
    let dir: Vec<f64> = (0..p).map(|_| r.gen_range(-1.0..1.0)).collect();
    let ad = TangentVector::new(&u, base.clone(), dir.clone(), vec![])?.apply(&u, &s)?.d_even;
    let fd = finite_difference_tangent(&s, &base, &dir, 1e-5)?;
    Ok(ensure((ad - fd).abs() <= 1e-6 * ad.abs().max(fd.abs()).max(1.0), || {
        format!("AD {ad} vs FD {fd} on {}", s.expr())
    }))
}

fn leibniz(r: &mut TestRng) -> Outcome {
    let u = small_domain(r);
    let a = random_any_algebra(r);
    let x: APoint<Rational> = random_point(r, &u, &a);
    let odd = r.gen_bool(0.5);
    let fe = (0..u.even_dim()).map(|_| random_homogeneous(r, &a, odd)).collect();
    let fo = (0..u.odd_dim()).map(|_| random_homogeneous(r, &a, !odd)).collect();
    let d = Derivation::new(&x, fe, fo, odd)?;
    let (ps, pt) = (r.gen_bool(0.5), r.gen_bool(0.5));
    let s = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), ps))?;
    let t = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), pt))?;
    let sign = if odd && s.expr().parity() == Parity::Odd { -1 } else { 1 };
    let lhs = d.apply(&s.mul(&t)?)?;
    let rhs = &d.apply(&s)? * &x.eval_ast(&t)? + (&x.eval_ast(&s)? * &d.apply(&t)?).scale(&Rational::from_i64(sign));
    let (fe, fo) = d.recover_coefficients()?;
    Ok(ensure(
        lhs == rhs && fe == d.even_coefficients() && fo == d.odd_coefficients(),
        || format!("Leibniz or recovery fails on {}, {}", s.expr(), t.expr()),
    ))
}

fn distributions(r: &mut TestRng) -> Outcome {
    let u = small_domain(r);
    let k: u32 = r.gen_range(0..=3);
    let base: Vec<Rational> = (0..u.even_dim()).map(|_| random_body(r)).collect();
    let mut coeffs = std::collections::BTreeMap::new();
    for _ in 0..3 {
        let mask = r.gen_range(0..1u64 << u.odd_dim());
        let budget = k.saturating_sub(mask.count_ones());
        if mask.count_ones() > k {
            continue;
        }
        let mut nu = vec![0u32; u.even_dim()];
        for _ in 0..r.gen_range(0..=budget) {
            nu[r.gen_range(0..u.even_dim())] += 1;
        }
        coeffs.insert((nu, mask), Rational::from_i64(r.gen_range(-3..=3)));
    }
    let v = Distribution::new(&u, base, k, coeffs)?;
    let odd = r.gen_bool(0.5);
    let s = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), odd))?;
    Ok(ensure(v.pair(&u, &s)? == v.pair_symbolic(&s)?, || format!("pairings differ on {}", s.expr())))
}

fn transitivity(r: &mut TestRng) -> Outcome {
    let u = SuperDomain::full(r.gen_range(1..=2), r.gen_range(0..=1));
    let a = match r.gen_range(0..3) {
        0 => SuperWeilAlgebra::grassmann(r.gen_range(1..=2))?,
        1 => SuperWeilAlgebra::super_dual_numbers(),
        _ => SuperWeilAlgebra::dual_numbers(),
    };
    let b0 = SuperWeilAlgebra::truncated(1, 0, r.gen_range(2..=3))?;
    let t = a.tensor(&b0)?;
    let x: APoint<Rational> = random_point(r, &u, &t.algebra);
    let tp = transitivity_point(&u, &a, &b0, x.even_values().to_vec(), x.odd_values().to_vec())?;
    let odd = r.gen_bool(0.5);
    let s = Section::new(&u, random_polynomial(r, u.even_dim(), u.odd_dim(), odd))?;
    let res = tp.check(&s)?.residual;
    Ok(ensure(res == 0.0, || format!("residual {res} on {}", s.expr())))
}

fn series(r: &mut TestRng) -> Outcome {
    let (p, q) = (r.gen_range(1..=2), r.gen_range(0..=2));
    let (m, n) = (r.gen_range(1..=2), r.gen_range(0..=1));
    let phi = random_domain_morphism(r, (p, q), (m, n));
    let f = TruncatedFormalSeries::from_morphism(&phi, 4)?;
    let pts: Vec<Vec<f64>> = (0..3).map(|_| (0..p).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    let rep = check_comes_from_morphism(&f, &pts, 1e-9)?;
    if !rep.consistent() {
        return Ok(Err(format!("{} violations on a morphism series", rep.violations.len())));
    }
    let a = SuperWeilAlgebra::truncated(1, 1, 3)?;
    let x: APoint<Rational> = random_point(r, phi.source(), &a);
    let direct = phi.apply(&x)?;
    let via = f.apply(&x)?;
    let same = direct.even_values().iter().chain(direct.odd_values()).eq(via.iter());
    Ok(ensure(same, || "series application differs from the morphism".into()))
}

fn functoriality(r: &mut TestRng) -> Outcome {
    let c = random_any_algebra(r);
    let sigma = random_morphism_into::<Rational>(r, &c);
    let b = sigma.source().clone();
    let rho = random_morphism_into::<Rational>(r, &b);
    let u = small_domain(r);
    let x: APoint<Rational> = random_point(r, &u, rho.source());
    let two_step = x.pushforward(&rho)?.pushforward(&sigma)?;
    let one_step = x.pushforward(&rho.then(&sigma)?)?;
    let id = x.pushforward(&AlgebraMorphism::identity(x.algebra()))?;
    Ok(ensure(
        two_step == one_step && id == x && two_step.base_point() == x.base_point(),
        || "pushforward is not functorial".into(),
    ))
}
