//! Text notation for algebras and points.
//!
//! Algebras:
//!
//! ```text
//! alg := "grassmann:" INT | "trunc:" INT "," INT "," INT
//!      | "dual" | "superdual" | "field" | "K"
//!      | "quot:" alg (";" poly)*      poly in t1.. (even), z1.. (odd)
//!      | "tensor:" alg "," alg
//!      | "(" alg ")"
//! ```
//!
//! Points: `"x1=2, th1=z1, th2=z2"`, values being polynomials in the
//! algebra generators.

use crate::algebra::{AlgebraElement, SuperWeilAlgebra};
use crate::apoints::{eval_expr, APoint};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::superfunc::parse::{section_vocabulary, split_indexed};
use crate::superfunc::{parse_with, Expr, SuperDomain, Var};

/// Names of algebra generators: `t{i}` even, `z{j}` odd.
pub fn algebra_vocabulary(ident: &str) -> Option<Var> {
    let (prefix, n) = split_indexed(ident)?;
    match prefix {
        "t" => Some(Var::Even(n)),
        "z" => Some(Var::Odd(n)),
        _ => None,
    }
}

/// Evaluates a `t`/`z` polynomial in `alg`.
pub fn algebra_element<S: Scalar>(alg: &SuperWeilAlgebra, text: &str) -> Result<AlgebraElement<S>> {
    let e = parse_with(text, &algebra_vocabulary)?;
    element_from_expr(alg, &e)
}

fn element_from_expr<S: Scalar>(alg: &SuperWeilAlgebra, e: &Expr) -> Result<AlgebraElement<S>> {
    let (k, l) = (alg.even_generators(), alg.odd_generators());
    if e.even_vars() > k {
        return Err(Error::CoordinateOutOfRange(format!("t{} in an algebra with {k} even generators", e.even_vars())));
    }
    if e.odd_vars() > l {
        return Err(Error::CoordinateOutOfRange(format!("z{} in an algebra with {l} odd generators", e.odd_vars())));
    }
    let even: Vec<_> = (0..k).map(|i| AlgebraElement::even_generator(alg, i)).collect();
    let odd: Vec<_> = (0..l).map(|j| AlgebraElement::odd_generator(alg, j)).collect();
    eval_expr(e, alg, &even, &odd)
}

pub fn parse_algebra(text: &str) -> Result<SuperWeilAlgebra> {
    let mut p = AlgParser { src: text, at: 0 };
    let a = p.algebra()?;
    p.skip_ws();
    if p.at != text.len() {
        return p.err("trailing input");
    }
    Ok(a)
}

struct AlgParser<'a> {
    src: &'a str,
    at: usize,
}

impl<'a> AlgParser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.at,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &str {
        &self.src[self.at..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.at += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.at += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected {s:?}"))
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let n = self.rest().chars().take_while(char::is_ascii_digit).count();
        if n == 0 {
            return self.err("expected an integer");
        }
        let v = self.rest()[..n].parse().or_else(|_| self.err("integer too large"))?;
        self.at += n;
        Ok(v)
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let n = self.rest().chars().take_while(char::is_ascii_alphabetic).count();
        let w = &self.src[self.at..self.at + n];
        self.at += n;
        w
    }

    fn algebra(&mut self) -> Result<SuperWeilAlgebra> {
        if self.eat("(") {
            let a = self.algebra()?;
            self.expect(")")?;
            return Ok(a);
        }
        let start = self.at;
        match self.word() {
            "field" | "K" => Ok(SuperWeilAlgebra::field()),
            "dual" => Ok(SuperWeilAlgebra::dual_numbers()),
            "superdual" => Ok(SuperWeilAlgebra::super_dual_numbers()),
            "grassmann" => {
                self.expect(":")?;
                SuperWeilAlgebra::grassmann(self.int()?)
            }
            "trunc" => {
                self.expect(":")?;
                let k = self.int()?;
                self.expect(",")?;
                let l = self.int()?;
                self.expect(",")?;
                let s = self.int()?;
                SuperWeilAlgebra::truncated(k, l, s as i64)
            }
            "tensor" => {
                self.expect(":")?;
                let a = self.algebra()?;
                self.expect(",")?;
                let b = self.algebra()?;
                Ok(a.tensor(&b)?.algebra)
            }
            "quot" => {
                self.expect(":")?;
                let amb = self.algebra()?;
                let mut gens = Vec::new();
                while self.eat(";") {
                    let start = self.at;
                    let text = self.generator_text();
                    let g = algebra_element::<Rational>(&amb, text).map_err(|e| match e {
                        Error::Syntax { pos, msg } => Error::Syntax {
                            pos: pos + start,
                            msg,
                        },
                        e => e,
                    })?;
                    gens.push(g);
                }
                amb.quotient(&gens)
            }
            "" => self.err("expected an algebra"),
            w => {
                let w = w.to_string();
                self.at = start;
                self.err(format!("unknown algebra {w:?}"))
            }
        }
    }

    /// Text up to the next `;`, `,` or unmatched `)`.
    fn generator_text(&mut self) -> &'a str {
        let mut depth = 0usize;
        let mut end = self.src.len();
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    end = self.at + i;
                    break;
                }
                ')' => depth -= 1,
                ';' | ',' if depth == 0 => {
                    end = self.at + i;
                    break;
                }
                _ => {}
            }
        }
        let text = &self.src[self.at..end];
        self.at = end;
        text
    }
}

/// Parsed coordinate assignments `x_i = a_i`, `θ_j = b_j`.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub even: Vec<Option<Expr>>,
    pub odd: Vec<Option<Expr>>,
}

impl Assignment {
    pub fn parse(text: &str) -> Result<Assignment> {
        let mut even: Vec<Option<Expr>> = Vec::new();
        let mut odd: Vec<Option<Expr>> = Vec::new();
        let mut offset = 0;
        for part in text.split(',') {
            let here = offset;
            offset += part.len() + 1;
            if part.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::Syntax {
                pos: here,
                msg: format!("expected coordinate=value in {:?}", part.trim()),
            })?;
            let var = section_vocabulary(lhs.trim()).ok_or_else(|| Error::Syntax {
                pos: here,
                msg: format!("{:?} is not a coordinate name", lhs.trim()),
            })?;
            let value = parse_with(rhs, &algebra_vocabulary).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax {
                    pos: pos + here + lhs.len() + 1,
                    msg,
                },
                e => e,
            })?;
            let (slot, i) = match var {
                Var::Even(i) => (&mut even, i),
                Var::Odd(j) => (&mut odd, j),
            };
            if slot.len() <= i {
                slot.resize(i + 1, None);
            }
            if slot[i].replace(value).is_some() {
                return Err(Error::Malformed(format!("{} assigned twice", lhs.trim())));
            }
        }
        Ok(Assignment { even, odd })
    }

    pub fn even_dim(&self) -> usize {
        self.even.len()
    }

    pub fn odd_dim(&self) -> usize {
        self.odd.len()
    }

    /// The point over `alg`. Every even coordinate needs a value;
    /// unassigned odd coordinates go to zero.
    pub fn to_point<S: Scalar>(&self, domain: &SuperDomain, alg: &SuperWeilAlgebra) -> Result<APoint<S>> {
        let (p, q) = (domain.even_dim(), domain.odd_dim());
        if self.even.len() > p || self.odd.len() > q {
            return Err(Error::Dimension(format!(
                "assignment mentions coordinates outside K^{{{p}|{q}}}"
            )));
        }
        let even = (0..p)
            .map(|i| match self.even.get(i).cloned().flatten() {
                Some(e) => element_from_expr(alg, &e),
                None => Err(Error::Malformed(format!("x{} has no value", i + 1))),
            })
            .collect::<Result<Vec<_>>>()?;
        let odd = (0..q)
            .map(|j| match self.odd.get(j).cloned().flatten() {
                Some(e) => element_from_expr(alg, &e),
                None => Ok(AlgebraElement::zero(alg)),
            })
            .collect::<Result<Vec<_>>>()?;
        APoint::new(domain, alg, even, odd)
    }

    pub fn is_transcendental(&self) -> bool {
        self.even.iter().chain(&self.odd).flatten().any(Expr::is_transcendental)
    }
}
