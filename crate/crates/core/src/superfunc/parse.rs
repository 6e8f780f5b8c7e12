//! Expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+') factor | atom ('^' ['-'] INT)?
//! atom   := VAR | NUMBER | FUNC '(' expr ')' | '(' expr ')'
//! FUNC   := exp | log | sin | cos | inv
//! ```
//!
//! Variables are resolved by a vocabulary; the default one accepts `x<i>`
//! for even and `theta<j>` / `th<j>` / `θ<j>` for odd coordinates (1-based).
//! `a / b` means `a * inv(b)` and needs an even `b`.

use super::expr::{Expr, Var};
use super::func::Func;
use crate::error::{Error, Result};
use crate::scalar::parse_decimal;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // exponent part, only when followed by digits
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    while j < chars.len() && chars[j].1.is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Num(s)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

/// Splits `"theta12"` into `("theta", 12)`.
pub(crate) fn split_indexed(ident: &str) -> Option<(&str, usize)> {
    let digits = ident.len() - ident.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 || digits == ident.len() {
        return None;
    }
    let (prefix, num) = ident.split_at(ident.len() - digits);
    let n: usize = num.parse().ok()?;
    n.checked_sub(1).map(|i| (prefix, i))
}

/// The default coordinate names.
pub fn section_vocabulary(ident: &str) -> Option<Var> {
    let (prefix, n) = split_indexed(ident)?;
    match prefix {
        "x" => Some(Var::Even(n)),
        "theta" | "th" | "θ" => Some(Var::Odd(n)),
        _ => None,
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vocab: &'a dyn Fn(&str) -> Option<Var>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.factor()?;
                acc = match d.as_const() {
                    Some(c) if crate::scalar::Scalar::is_zero(c) => {
                        return Err(Error::Syntax {
                            pos,
                            msg: "division by zero".into(),
                        })
                    }
                    Some(c) => acc.scale(&(crate::scalar::Rational::from_integer(1.into()) / c)),
                    None => acc.mul(&d.recip()?),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let paren = !neg && self.eat('(');
            let neg = neg || (paren && self.eat('-'));
            let n = match self.peek() {
                Some(Tok::Num(s)) if s.chars().all(|c| c.is_ascii_digit()) => s.parse::<i32>().ok(),
                _ => None,
            };
            let Some(n) = n else {
                return self.err("expected an integer exponent");
            };
            self.at += 1;
            if paren {
                self.expect(')')?;
            }
            return base.pow(if neg { -n } else { n });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                match parse_decimal(&s) {
                    Some(r) => Ok(Expr::constant(r)),
                    None => Err(Error::Syntax {
                        pos,
                        msg: format!("bad number {s:?}"),
                    }),
                }
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(f) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return arg.apply(f);
                }
                match (self.vocab)(&name) {
                    Some(v) => Ok(Expr::var(v)),
                    None => Err(Error::Syntax {
                        pos,
                        msg: format!("unknown name {name:?}"),
                    }),
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses with a custom variable vocabulary.
pub fn parse_with(text: &str, vocab: &dyn Fn(&str) -> Option<Var>) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        end: text.len(),
        vocab,
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses with the default names and no range check.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &section_vocabulary)
}

/// Parses an expression on `K^{p|q}`.
pub fn parse_expr(text: &str, p: usize, q: usize) -> Result<Expr> {
    let e = parse(text)?;
    check_range(&e, p, q)?;
    Ok(e)
}

pub(crate) fn check_range(e: &Expr, p: usize, q: usize) -> Result<()> {
    if e.even_vars() > p {
        return Err(Error::CoordinateOutOfRange(format!("x{} with p = {p}", e.even_vars())));
    }
    if e.odd_vars() > q {
        return Err(Error::CoordinateOutOfRange(format!("theta{} with q = {q}", e.odd_vars())));
    }
    Ok(())
}
