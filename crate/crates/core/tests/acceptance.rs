//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p superweil --test acceptance`.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;

use superweil::algebra::{AlgebraElement, AlgebraMorphism, Monomial, SuperWeilAlgebra};
use superweil::apoints::APoint;
use superweil::calculus::{tautological_point, transitivity_point, Derivation, Distribution, TangentVector};
use superweil::nattrans::{check_comes_from_morphism, TruncatedFormalSeries};
use superweil::parity::Parity;
use superweil::scalar::{Rational, Scalar};
use superweil::superfunc::{Expr, Section, SuperDomain};
use superweil::testing::*;

type Q = AlgebraElement<Rational>;
type F = AlgebraElement<f64>;

const SEED: u64 = 0x5eed_0001;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    let mut detail = summary;
    if let Some(first) = failures.first() {
        detail += &format!("; {} failures, first: {first}", failures.len());
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn small_domain(r: &mut TestRng) -> SuperDomain {
    SuperDomain::full(r.gen_range(1..=2), r.gen_range(0..=2))
}

// ---------------------------------------------------------------- 1

/// Product on a Grassmann algebra computed straight from bitmasks.
fn grassmann_naive(alg: &SuperWeilAlgebra, a: &Q, b: &Q) -> Vec<Rational> {
    let masks: Vec<u64> = alg.basis().iter().map(Monomial::odd_mask).collect();
    let index: BTreeMap<u64, usize> = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut out = vec![q(0); masks.len()];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            let (u, v) = (masks[i], masks[j]);
            if u & v != 0 || x == &q(0) || y == &q(0) {
                continue;
            }
            // generators of v that must pass a larger generator of u
            let mut swaps = 0;
            for bit in 0..64 {
                if v >> bit & 1 == 1 {
                    swaps += (u >> (bit + 1)).count_ones();
                }
            }
            let c = x * y;
            let slot = &mut out[index[&(u | v)]];
            *slot = if swaps % 2 == 1 { slot.clone() - c } else { slot.clone() + c };
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut r = rng(SEED + 1);
    let mut failures = Vec::new();
    let mut oracle_checks = 0;
    for fam in FAMILIES {
        for _ in 0..1000 {
            let alg = random_algebra(&mut r, fam);
            let (a, b, c): (Q, Q, Q) = (random_element(&mut r, &alg), random_element(&mut r, &alg), random_element(&mut r, &alg));
            let assoc = &(&a * &b) * &c == &a * &(&b * &c);
            let distr = &a * &(&b + &c) == &(&a * &b) + &(&a * &c) && &(&a + &b) * &c == &(&a * &c) + &(&b * &c);
            let (pa, pb) = (r.gen_bool(0.5), r.gen_bool(0.5));
            let (ha, hb): (Q, Q) = (random_homogeneous(&mut r, &alg, pa), random_homogeneous(&mut r, &alg, pb));
            let sign = if pa && pb { q(-1) } else { q(1) };
            let comm = &ha * &hb == (&hb * &ha).scale(&sign);
            let mut oracle = true;
            if fam == Family::Grassmann {
                oracle_checks += 1;
                oracle = (&a * &b).coeffs() == grassmann_naive(&alg, &a, &b).as_slice();
            }
            if !(assoc && distr && comm && oracle) {
                failures.push(format!(
                    "{} {:?}: assoc {assoc} distr {distr} comm {comm} oracle {oracle}",
                    fam.name(),
                    alg.basis_names()
                ));
            }
        }
    }
    for _ in 0..1000 {
        let alg = random_any_algebra(&mut r);
        let x: Q = random_element(&mut r, &alg);
        if !x.soul().pow(alg.height() as u32 + 1).is_zero() {
            failures.push(format!("soul^(h+1) != 0 in {:?}", alg.basis_names()));
        }
    }
    outcome(
        &failures,
        format!(
            "{} triples over {} families ({} against the bitmask oracle), 1000 nilpotency checks",
            1000 * FAMILIES.len(),
            FAMILIES.len(),
            oracle_checks
        ),
    )
}

// ---------------------------------------------------------------- 2

/// Monomials of `K[k|l]` of total degree below `s`.
fn enumerate_monomials(k: usize, l: usize, s: u32) -> Vec<(Vec<u32>, u64)> {
    fn rec(i: usize, k: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == k {
            out.push(cur.clone());
            return;
        }
        for e in 0..=budget {
            cur.push(e);
            rec(i + 1, k, budget - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s == 0 {
        return out;
    }
    let mut evens = Vec::new();
    rec(0, k, s - 1, &mut Vec::new(), &mut evens);
    for nu in evens {
        let d: u32 = nu.iter().sum();
        for mask in 0..1u64 << l {
            if d + mask.count_ones() < s {
                out.push((nu.clone(), mask));
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut r = rng(SEED + 2);
    let mut failures = Vec::new();
    for case in 0..20 {
        let k = r.gen_range(0..=2);
        let l = r.gen_range(0..=3);
        let s = r.gen_range(2..=4u32);
        let amb = SuperWeilAlgebra::truncated(k, l, s as i64).unwrap();
        let all = enumerate_monomials(k, l, s);
        let candidates: Vec<&(Vec<u32>, u64)> = all.iter().filter(|(nu, m)| nu.iter().sum::<u32>() + m.count_ones() > 0).collect();
        let count = r.gen_range(1..=candidates.len().clamp(1, 3));
        let gens: Vec<(Vec<u32>, u64)> = (0..count.min(candidates.len()))
            .map(|_| candidates[r.gen_range(0..candidates.len())].clone())
            .collect();
        let elems: Vec<Q> = gens
            .iter()
            .map(|(nu, m)| AlgebraElement::monomial(&amb, &Monomial::new(nu.clone(), *m), q(1)))
            .collect();
        let quot = amb.quotient(&elems).unwrap();
        let divides = |(gn, gm): &(Vec<u32>, u64), (n, m): &(Vec<u32>, u64)| gn.iter().zip(n).all(|(a, b)| a <= b) && gm & !m == 0;
        let survivors = all.iter().filter(|m| !gens.iter().any(|g| divides(g, m))).count();
        let rank_ok = quot.dim() + quot.ideal_rank() == amb.dim() && amb.dim() == all.len();
        let count_ok = quot.dim() == survivors;

        let x: Q = random_element(&mut r, &quot);
        let to_k = AlgebraMorphism::<Rational>::to_field(&quot);
        let from_k = AlgebraMorphism::<Rational>::from_field(&quot);
        let body = to_k.apply(&x).unwrap();
        let split = &from_k.apply(&body).unwrap() + &x.soul() == x;
        let soul_nil = x.soul().pow(quot.height() as u32 + 1).is_zero() && to_k.apply(&x.soul()).unwrap().is_zero();
        let e = x.even_part();
        let unit = e.body() == q(0) || e.invert().map(|y| &e * &y == Q::one(&quot)).unwrap_or(false);
        if !(rank_ok && count_ok && split && soul_nil && unit) {
            failures.push(format!(
                "case {case} K[{k}|{l}]/m^{s} mod {gens:?}: dim {} rank {} ambient {} survivors {survivors}, split {split} nil {soul_nil} unit {unit}",
                quot.dim(),
                quot.ideal_rank(),
                amb.dim()
            ));
        }
    }
    outcome(&failures, "20 monomial quotients, dim + rank = ambient, K + nil".into())
}

// ---------------------------------------------------------------- 3, 4

struct HomCase {
    exact: bool,
    hom: bool,
    dual: bool,
    label: String,
}

fn hom_case(r: &mut TestRng, exact: bool) -> HomCase {
    let u = small_domain(r);
    let (p, qd) = (u.even_dim(), u.odd_dim());
    let alg = random_any_algebra(r);
    let (ps, pt) = (r.gen_bool(0.5), r.gen_bool(0.5));
    if exact {
        let x: APoint<Rational> = random_point(r, &u, &alg);
        let s = Section::new(&u, random_polynomial(r, p, qd, ps)).unwrap();
        let t = Section::new(&u, random_polynomial(r, p, qd, pt)).unwrap();
        let st = s.mul(&t).unwrap();
        let hom = x.eval_ast(&st).unwrap() == &x.eval_ast(&s).unwrap() * &x.eval_ast(&t).unwrap();
        let dual = [&s, &t, &st].iter().all(|f| x.eval_ast(f).unwrap() == x.eval_taylor(f).unwrap());
        HomCase {
            exact,
            hom,
            dual,
            label: format!("s = {}, t = {}", s.expr(), t.expr()),
        }
    } else {
        let x: APoint<f64> = random_point(r, &u, &alg);
        let s = Section::new(&u, random_analytic(r, p, qd, ps)).unwrap();
        let t = Section::new(&u, random_analytic(r, p, qd, pt)).unwrap();
        let st = s.mul(&t).unwrap();
        let lhs: F = x.eval_ast(&st).unwrap();
        let hom = lhs.approx_eq(&(&x.eval_ast(&s).unwrap() * &x.eval_ast(&t).unwrap()), 1e-9);
        let dual = [&s, &t, &st].iter().all(|f| x.eval_ast(f).unwrap().approx_eq(&x.eval_taylor(f).unwrap(), 1e-9));
        HomCase {
            exact,
            hom,
            dual,
            label: format!("s = {}, t = {}", s.expr(), t.expr()),
        }
    }
}

fn homomorphism_cases() -> Vec<HomCase> {
    let mut r = rng(SEED + 3);
    (0..500).map(|i| hom_case(&mut r, i % 2 == 0)).collect()
}

fn criterion_3(cases: &[HomCase]) -> Outcome {
    let failures: Vec<String> = cases
        .iter()
        .filter(|c| !c.hom)
        .map(|c| format!("{} {}", if c.exact { "exact" } else { "float" }, c.label))
        .collect();
    outcome(&failures, "500 cases, x(st) = x(s)x(t), exact and rel 1e-9".into())
}

fn criterion_4(cases: &[HomCase]) -> Outcome {
    let failures: Vec<String> = cases
        .iter()
        .filter(|c| !c.dual)
        .map(|c| format!("{} {}", if c.exact { "exact" } else { "float" }, c.label))
        .collect();
    outcome(&failures, "same 500 cases, eval_ast = eval_taylor on s, t and st".into())
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let mut r = rng(SEED + 5);
    let h = 1e-5;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = r.gen_range(1..=3);
        let qd = r.gen_range(0..=2);
        let u = SuperDomain::full(p, qd);
        let s = Section::new(&u, random_analytic(&mut r, p, qd, false)).unwrap();
        let base: Vec<f64> = (0..p).map(|_| r.gen_range(-1.0..1.0)).collect();
        let dir: Vec<f64> = (0..p).map(|_| r.gen_range(-1.0..1.0)).collect();
        let vo: Vec<f64> = (0..qd).map(|_| r.gen_range(-1.0..1.0)).collect();
        let tv = TangentVector::new(&u, base.clone(), dir.clone(), vo).unwrap().apply(&u, &s).unwrap();
        let body = |t: f64| {
            let x: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + t * d).collect();
            s.eval_classical(&x).unwrap()
        };
        let fd = (body(h) - body(-h)) / (2.0 * h);
        let rel = (tv.d_even - fd).abs() / tv.d_even.abs().max(fd.abs()).max(1.0);
        worst = worst.max(rel);
        let value_ok = (tv.value - body(0.0)).abs() <= 1e-12 * body(0.0).abs().max(1.0);
        if rel > 1e-6 || !value_ok {
            failures.push(format!("AD {} vs FD {fd} on {}", tv.d_even, s.expr()));
        }
    }
    outcome(&failures, format!("200 analytic sections, worst rel {worst:.2e} (h = 1e-5, tol 1e-6)"))
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let mut r = rng(SEED + 6);
    let mut failures = Vec::new();
    for case in 0..200 {
        let u = small_domain(&mut r);
        let alg = random_any_algebra(&mut r);
        let x: APoint<Rational> = random_point(&mut r, &u, &alg);
        let odd = r.gen_bool(0.5);
        let fe: Vec<Q> = (0..u.even_dim()).map(|_| random_homogeneous(&mut r, &alg, odd)).collect();
        let fo: Vec<Q> = (0..u.odd_dim()).map(|_| random_homogeneous(&mut r, &alg, !odd)).collect();
        let d = Derivation::new(&x, fe.clone(), fo.clone(), odd).unwrap();
        let (ps, pt) = (r.gen_bool(0.5), r.gen_bool(0.5));
        let s = Section::new(&u, random_polynomial(&mut r, u.even_dim(), u.odd_dim(), ps)).unwrap();
        let t = Section::new(&u, random_polynomial(&mut r, u.even_dim(), u.odd_dim(), pt)).unwrap();
        let sign = if odd && s.expr().parity() == Parity::Odd { q(-1) } else { q(1) };
        let lhs = d.apply(&s.mul(&t).unwrap()).unwrap();
        let rhs = &d.apply(&s).unwrap() * &x.eval_ast(&t).unwrap() + (&x.eval_ast(&s).unwrap() * &d.apply(&t).unwrap()).scale(&sign);
        // coordinates recover the coefficients
        let coord = |i: usize, odd_coord: bool| {
            let e = if odd_coord { Expr::theta(i) } else { Expr::x(i) };
            d.apply(&Section::new(&u, e).unwrap()).unwrap()
        };
        let direct = (0..u.even_dim()).all(|i| coord(i, false) == fe[i]) && (0..u.odd_dim()).all(|j| coord(j, true) == fo[j]);
        let (re, ro) = d.recover_coefficients().unwrap();
        if lhs != rhs || !direct || re != fe || ro != fo {
            failures.push(format!("case {case}: Leibniz {} recovery {direct}", lhs == rhs));
        }
    }
    outcome(&failures, "200 derivations, signed Leibniz and D(x_i), D(θ_j) exact".into())
}

// ---------------------------------------------------------------- 7

/// A polynomial as explicit terms `c · x^α · θ^J`.
type Terms = Vec<(Rational, Vec<u32>, u64)>;

fn random_terms(r: &mut TestRng, p: usize, qd: usize) -> Terms {
    (0..r.gen_range(1..=4))
        .map(|_| {
            (
                q(r.gen_range(-4..=4)),
                (0..p).map(|_| r.gen_range(0..=3)).collect(),
                r.gen_range(0..1u64 << qd),
            )
        })
        .collect()
}

fn terms_expr(t: &Terms) -> Expr {
    let parts: Vec<Expr> = t
        .iter()
        .map(|(c, alpha, mask)| {
            let mut e = Expr::constant(c.clone());
            for (i, &a) in alpha.iter().enumerate() {
                e = e.mul(&Expr::x(i).pow(a as i32).unwrap());
            }
            e.mul(&Expr::odd_monomial(*mask))
        })
        .collect();
    Expr::sum(&parts)
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut b = q(1);
    for i in 0..k {
        b = b * q((n - i) as i64) / q((i + 1) as i64);
    }
    b
}

/// Coefficient of `z^ν ζ^J` in `s(base + z, ζ)`, expanded binomially.
fn binomial_coefficient(t: &Terms, base: &[Rational], nu: &[u32], mask: u64) -> Rational {
    let mut acc = q(0);
    for (c, alpha, m) in t {
        if *m != mask || alpha.iter().zip(nu).any(|(a, n)| a < n) {
            continue;
        }
        let mut term = c.clone();
        for ((&a, &n), b) in alpha.iter().zip(nu).zip(base) {
            term *= binomial(a, n);
            for _ in 0..a - n {
                term *= b.clone();
            }
        }
        acc += term;
    }
    acc
}

fn criterion_7() -> Outcome {
    let mut r = rng(SEED + 7);
    let mut failures = Vec::new();
    let mut compared = 0;
    for k in 0..=4u32 {
        for case in 0..40 {
            let u = small_domain(&mut r);
            let (p, qd) = (u.even_dim(), u.odd_dim());
            let base: Vec<Rational> = (0..p).map(|_| random_body(&mut r)).collect();
            let terms = random_terms(&mut r, p, qd);
            let s = Section::new(&u, terms_expr(&terms)).unwrap();
            let y = tautological_point(&u, &base, k).unwrap();
            let v = y.eval_ast(&s).unwrap();
            for m in y.algebra().basis() {
                compared += 1;
                let want = binomial_coefficient(&terms, &base, m.nu(), m.odd_mask());
                if v.coeff_of(m) != want {
                    failures.push(format!("k {k} case {case} {}: {} vs {want}", s.expr(), v.coeff_of(m)));
                }
            }

            // a random order-k distribution against s, and against a section in m^{k+1}
            let mut coeffs = BTreeMap::new();
            for m in y.algebra().basis() {
                if r.gen_bool(0.6) {
                    coeffs.insert((m.nu().to_vec(), m.odd_mask()), q(r.gen_range(-3..=3)));
                }
            }
            let dist = Distribution::new(&u, base.clone(), k, coeffs).unwrap();
            let sym = dist.pair_symbolic(&s).unwrap();
            if dist.pair(&u, &s).unwrap() != sym {
                failures.push(format!("k {k} case {case}: pairing {} vs symbolic {sym}", dist.pair(&u, &s).unwrap()));
            }
            let mut vanishing = terms_expr(&random_terms(&mut r, p, qd));
            for _ in 0..=k {
                let j = r.gen_range(0..p + qd);
                let factor = if j < p {
                    Expr::x(j).sub(&Expr::constant(base[j].clone()))
                } else {
                    Expr::theta(j - p)
                };
                vanishing = vanishing.mul(&factor);
            }
            let w = Section::new(&u, vanishing).unwrap();
            let (a, b) = (dist.pair(&u, &w).unwrap(), dist.pair_symbolic(&w).unwrap());
            if a != q(0) || b != q(0) {
                failures.push(format!("k {k} case {case}: m^(k+1) fixture {} pairs to {a} / {b}", w.expr()));
            }
        }
    }
    outcome(&failures, format!("k = 0..4, 200 sections, {compared} coefficients against the binomial expansion, m^(k+1) annihilated"))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let mut r = rng(SEED + 8);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let u = SuperDomain::full(r.gen_range(1..=2), r.gen_range(0..=2));
        let (p, qd) = (u.even_dim(), u.odd_dim());
        let a = match r.gen_range(0..4) {
            0 => SuperWeilAlgebra::grassmann(r.gen_range(1..=2)).unwrap(),
            1 => SuperWeilAlgebra::super_dual_numbers(),
            2 => SuperWeilAlgebra::dual_numbers(),
            _ => SuperWeilAlgebra::truncated(1, 1, 3).unwrap(),
        };
        let b0 = match r.gen_range(0..3) {
            0 => SuperWeilAlgebra::dual_numbers(),
            1 => SuperWeilAlgebra::truncated(1, 0, 3).unwrap(),
            _ => SuperWeilAlgebra::truncated(2, 0, 2).unwrap(),
        };
        let t = a.tensor(&b0).unwrap().algebra;
        let odd = r.gen_bool(0.5);
        if case % 2 == 0 {
            let x: APoint<Rational> = random_point(&mut r, &u, &t);
            let tp = transitivity_point(&u, &a, &b0, x.even_values().to_vec(), x.odd_values().to_vec()).unwrap();
            let s = Section::new(&u, random_polynomial(&mut r, p, qd, odd)).unwrap();
            let c = tp.check(&s).unwrap();
            if c.direct != c.iterated {
                failures.push(format!("exact case {case}: residual {} on {}", c.residual, s.expr()));
            }
        } else {
            let x: APoint<f64> = random_point(&mut r, &u, &t);
            let tp = transitivity_point(&u, &a, &b0, x.even_values().to_vec(), x.odd_values().to_vec()).unwrap();
            let s = Section::new(&u, random_analytic(&mut r, p, qd, odd)).unwrap();
            let res = tp.check(&s).unwrap().residual;
            worst = worst.max(res);
            if res.is_nan() || res > 1e-9 {
                failures.push(format!("float case {case}: residual {res} on {}", s.expr()));
            }
        }
    }
    outcome(&failures, format!("100 cases, exact residual 0, worst float residual {worst:.1e}"))
}

// ---------------------------------------------------------------- 9

fn sample_points(r: &mut TestRng, p: usize) -> Vec<Vec<f64>> {
    (0..3).map(|_| (0..p).map(|_| r.gen_range(-1.0..1.0)).collect()).collect()
}

/// Whether `g`, which is `f` with `f_(0,J)` of `slot` shifted by 1, acts
/// on points exactly like `phi` with `θ^J` added to that pullback.
fn genuine(phi: &superweil::apoints::DomainMorphism, g: &TruncatedFormalSeries, slot: usize, mask: u64, r: &mut TestRng) -> bool {
    let m = phi.target().even_dim();
    let mut even = phi.even_pullbacks().to_vec();
    let mut odd = phi.odd_pullbacks().to_vec();
    let pull = if slot < m { &mut even[slot] } else { &mut odd[slot - m] };
    *pull = pull.add(&Expr::odd_monomial(mask));
    let shifted = superweil::apoints::DomainMorphism::new(phi.source(), phi.target(), even, odd).unwrap();
    let (p, qd) = g.source_dims();
    let alg = SuperWeilAlgebra::truncated(p, qd, 3).unwrap();
    (0..3).all(|_| {
        let x: APoint<Rational> = random_point(r, phi.source(), &alg);
        let y = shifted.apply(&x).unwrap();
        y.even_values().iter().chain(y.odd_values()).eq(g.apply(&x).unwrap().iter())
    })
}

fn criterion_9() -> Outcome {
    let mut r = rng(SEED + 9);
    let order = 4;
    let mut failures = Vec::new();
    let (mut perturbed, mut detected, mut certified) = (0, 0, 0);
    let mut missed_by_order: BTreeMap<u32, usize> = BTreeMap::new();
    for case in 0..50 {
        let (p, qd) = (r.gen_range(1..=2), r.gen_range(0..=2));
        let (m, n) = (r.gen_range(1..=2), r.gen_range(0..=1));
        let phi = random_domain_morphism(&mut r, (p, qd), (m, n));
        let f = TruncatedFormalSeries::from_morphism(&phi, order).unwrap();
        let pts = sample_points(&mut r, p);
        let rep = check_comes_from_morphism(&f, &pts, 1e-9).unwrap();
        if !rep.consistent() {
            failures.push(format!("case {case}: {} violations on a morphism series", rep.violations.len()));
        }
        for slot in 0..m + n {
            for nu in superweil::algebra::monomial::exponents_up_to(p, order) {
                for mask in (0..1u64 << qd).filter(|j| (j.count_ones() % 2 == 1) == (slot >= m)) {
                    let c = f.coefficient(slot, &nu, mask).add(&Expr::one());
                    let g = f.with_coefficient(slot, (nu.clone(), mask), c).unwrap();
                    perturbed += 1;
                    if check_comes_from_morphism(&g, &pts, 1e-9).unwrap().consistent() {
                        *missed_by_order.entry(nu.iter().sum()).or_default() += 1;
                        if genuine(&phi, &g, slot, mask, &mut r) {
                            certified += 1;
                        }
                    } else {
                        detected += 1;
                    }
                }
            }
        }
    }
    if perturbed != detected {
        failures.push(format!(
            "{} of {perturbed} +1 perturbations pass the checker, missed by |nu|: {missed_by_order:?}; \
             {certified} of them act on points exactly like the morphism with pullback s + theta^J, \
             so no sound checker can reject them",
            perturbed - detected
        ));
    }

    // constant pushforward x_A -> ev_phi(base): f_(0,0) = phi(x), nothing else
    let mut counter = Vec::new();
    for phi in ["x1^2", "sin(x1)", "x1*x2 + x2"] {
        let p = if phi.contains("x2") { 2 } else { 1 };
        let mut slot = BTreeMap::new();
        slot.insert((vec![0; p], 0), superweil::superfunc::parse_expr(phi, p, 0).unwrap());
        let f = TruncatedFormalSeries::new((p, 0), (1, 0), order, vec![slot]).unwrap();
        let rep = check_comes_from_morphism(&f, &sample_points(&mut r, p), 1e-9).unwrap();
        if rep.consistent() {
            failures.push(format!("constant pushforward of {phi} accepted"));
        }
        counter.push(rep.violations.len());
    }
    outcome(
        &failures,
        format!(
            "50 morphism series clean, {detected}/{perturbed} perturbations detected, counter-example fixtures rejected with {counter:?} violations"
        ),
    )
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let mut r = rng(SEED + 10);
    let mut failures = Vec::new();
    for case in 0..100 {
        let c = random_any_algebra(&mut r);
        let sigma = random_morphism_into::<Rational>(&mut r, &c);
        let b = sigma.source().clone();
        let rho = random_morphism_into::<Rational>(&mut r, &b);
        let u = small_domain(&mut r);
        let x: APoint<Rational> = random_point(&mut r, &u, rho.source());
        let two = x.pushforward(&rho).unwrap().pushforward(&sigma).unwrap();
        let one = x.pushforward(&rho.then(&sigma).unwrap()).unwrap();
        let id = x.pushforward(&AlgebraMorphism::identity(x.algebra())).unwrap();
        let id_after = x.pushforward(&rho).unwrap().pushforward(&AlgebraMorphism::identity(&b)).unwrap();
        let base = two.base_point() == x.base_point() && x.pushforward(&rho).unwrap().base_point() == x.base_point();
        if two != one || id != x || id_after != x.pushforward(&rho).unwrap() || !base {
            failures.push(format!("case {case}: composition {} identity {} base {base}", two == one, id == x));
        }
    }
    outcome(&failures, "100 morphism pairs, composition, identity and base point".into())
}

// ---------------------------------------------------------------- 11

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let dir = std::env::temp_dir().join(format!("superweil-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_superweil"))
        .args(args)
        .current_dir(&dir)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_11() -> Outcome {
    let examples: [&[&str]; 3] = [
        &["eval", "--algebra", "grassmann:2", "--point", "x1=2, th1=z1, th2=z2", "--section", "x1+theta1*theta2"],
        &["tangent", "--base", "3", "--vE", "1", "--section", "x1^2"],
        &["selftest", "--seed", "7"],
    ];
    let expected = [Some("{\"1\":\"2\",\"z1z2\":\"1\"}\n"), Some("{\"value\":\"9\",\"d\":\"6\"}\n"), None];
    let mut failures = Vec::new();
    for (args, want) in examples.iter().zip(expected) {
        let (c1, o1) = run_cli(args);
        let (c2, o2) = run_cli(args);
        if o1 != o2 {
            failures.push(format!("{} differs between runs", args[0]));
        }
        if c1 != Some(0) || c2 != Some(0) {
            failures.push(format!("{} exited with {c1:?}", args[0]));
        }
        if let Some(w) = want {
            if o1 != w.as_bytes() {
                failures.push(format!("{} printed {:?}", args[0], String::from_utf8_lossy(&o1)));
            }
        }
    }
    outcome(&failures, "eval, tangent and selftest byte-identical across two runs, selftest exit 0".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let hom = homomorphism_cases();
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("algebra laws", Box::new(criterion_1)),
        ("structure round trip", Box::new(criterion_2)),
        ("A-point homomorphism", Box::new(|| criterion_3(&hom))),
        ("ast vs taylor", Box::new(|| criterion_4(&hom))),
        ("AD vs finite differences", Box::new(criterion_5)),
        ("derivations", Box::new(criterion_6)),
        ("distribution duality", Box::new(criterion_7)),
        ("transitivity", Box::new(criterion_8)),
        ("natural transformation checker", Box::new(criterion_9)),
        ("functoriality", Box::new(criterion_10)),
        ("CLI determinism", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({:.1}s): {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{}/{} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
