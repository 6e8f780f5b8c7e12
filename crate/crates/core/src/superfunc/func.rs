use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Analytic unary functions. Each has a closed form for every derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    /// `1/u`
    Recip,
    /// `u^n`, any integer `n`
    Pow(i32),
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Recip => "inv",
            Func::Pow(_) => "pow",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "inv" => Func::Recip,
            _ => return None,
        })
    }

    /// Whether values need a transcendental scalar (floats or complex).
    pub fn is_transcendental(self) -> bool {
        matches!(self, Func::Exp | Func::Log | Func::Sin | Func::Cos)
    }

    /// Polynomial of degree `n >= 0`: all derivatives past `n` vanish.
    pub fn polynomial_degree(self) -> Option<u32> {
        match self {
            Func::Pow(n) if n >= 0 => Some(n as u32),
            _ => None,
        }
    }

    pub fn eval<S: Scalar>(self, a: &S) -> Result<S> {
        Ok(self.derivatives(a, 0)?.remove(0))
    }

    /// `[f(a), f'(a), ..., f^(upto)(a)]`.
    pub fn derivatives<S: Scalar>(self, a: &S, upto: usize) -> Result<Vec<S>> {
        let domain = || Error::FunctionDomain {
            func: self.name().into(),
            at: a.to_json().to_string(),
        };
        let mut out = Vec::with_capacity(upto + 1);
        match self {
            Func::Exp => {
                let e = a.exp()?;
                out.resize(upto + 1, e);
            }
            Func::Sin | Func::Cos => {
                let (s, c) = (a.sin()?, a.cos()?);
                let cycle = if self == Func::Sin {
                    [s.clone(), c.clone(), -s, -c]
                } else {
                    [c.clone(), -s.clone(), -c, s]
                };
                out.extend((0..=upto).map(|n| cycle[n % 4].clone()));
            }
            Func::Log => {
                out.push(a.ln()?);
                if upto > 0 {
                    let inv = a.recip().ok_or_else(domain)?;
                    // (-1)^(n-1) (n-1)! / a^n
                    let mut term = inv.clone();
                    for n in 1..=upto {
                        out.push(term.clone());
                        term = term * inv.clone() * S::from_i64(-(n as i64));
                    }
                }
            }
            Func::Recip => {
                let inv = a.recip().ok_or_else(domain)?;
                // (-1)^n n! / a^(n+1)
                let mut term = inv.clone();
                for n in 0..=upto {
                    out.push(term.clone());
                    term = term * inv.clone() * S::from_i64(-(n as i64 + 1));
                }
            }
            Func::Pow(m) => {
                let base = if m < 0 {
                    a.recip().ok_or_else(domain)?
                } else {
                    a.clone()
                };
                for n in 0..=upto {
                    let falling = falling_factorial(m, n);
                    if falling == 0 {
                        out.push(S::zero());
                        continue;
                    }
                    let e = m as i64 - n as i64;
                    let p = if e >= 0 {
                        a.powi(e as u32)
                    } else {
                        let inv = if m < 0 { base.clone() } else { a.recip().ok_or_else(domain)? };
                        inv.powi((-e) as u32)
                    };
                    out.push(p * S::from_i64(falling));
                }
            }
        }
        Ok(out)
    }
}

/// `m (m-1) ... (m-n+1)`
pub(crate) fn falling_factorial(m: i32, n: usize) -> i64 {
    (0..n as i64).fold(1i64, |acc, k| acc * (m as i64 - k))
}

pub(crate) fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::from_i64(1), |acc, k| acc * Rational::from_i64(k))
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
