use super::expr::{Expr, Kind, Var};
use super::func::{falling_factorial, factorial, Func};
use crate::parity::Parity;
use crate::scalar::{Rational, Scalar};

/// `f^(n)(u)` as an expression in `u`.
pub fn derivative_expr(f: Func, u: &Expr, n: u32) -> Expr {
    let apply = |g: Func| u.apply(g).expect("argument of an analytic node is even");
    if n == 0 {
        return apply(f);
    }
    let n_i = n as i32;
    match f {
        Func::Exp => apply(Func::Exp),
        Func::Sin => match n % 4 {
            0 => apply(Func::Sin),
            1 => apply(Func::Cos),
            2 => apply(Func::Sin).neg(),
            _ => apply(Func::Cos).neg(),
        },
        Func::Cos => match n % 4 {
            0 => apply(Func::Cos),
            1 => apply(Func::Sin).neg(),
            2 => apply(Func::Cos).neg(),
            _ => apply(Func::Sin),
        },
        Func::Log => {
            let c = factorial(n - 1) * Rational::from_i64(if n % 2 == 1 { 1 } else { -1 });
            apply(Func::Pow(-n_i)).scale(&c)
        }
        Func::Recip => {
            let c = factorial(n) * Rational::from_i64(if n.is_multiple_of(2) { 1 } else { -1 });
            apply(Func::Pow(-n_i - 1)).scale(&c)
        }
        Func::Pow(m) => {
            let c = falling_factorial(m, n as usize);
            if c == 0 {
                return Expr::zero();
            }
            apply(Func::Pow(m - n_i)).scale(&Rational::from_i64(c))
        }
    }
}

impl Expr {
    /// `∂/∂x_i` for even variables, the left derivative `∂/∂θ_j` for odd
    /// ones.
    pub fn derive(&self, v: Var) -> Expr {
        let mut memo = std::collections::HashMap::new();
        self.derive_memo(v, &mut memo)
    }

    // Values keep their key alive: parity_split creates temporaries whose
    // addresses could otherwise be reused while the memo is live.
    fn derive_memo(&self, v: Var, memo: &mut std::collections::HashMap<*const (), (Expr, Expr)>) -> Expr {
        if let Some((_, d)) = memo.get(&self.node_ptr()) {
            return d.clone();
        }
        let missing = match v {
            Var::Even(i) => i >= self.even_vars(),
            Var::Odd(j) => j >= self.odd_vars(),
        };
        if missing {
            return Expr::zero();
        }
        let d = match self.kind() {
            Kind::Even(i) => Expr::int((v == Var::Even(*i)) as i64),
            Kind::Odd(j) => Expr::int((v == Var::Odd(*j)) as i64),
            Kind::Const(_) => Expr::zero(),
            Kind::Add(a, b) => a.derive_memo(v, memo).add(&b.derive_memo(v, memo)),
            Kind::Neg(a) => a.derive_memo(v, memo).neg(),
            Kind::Scale(c, a) => a.derive_memo(v, memo).scale(c),
            Kind::Mul(a, b) => match v {
                Var::Even(_) => a
                    .derive_memo(v, memo)
                    .mul(b)
                    .add(&a.mul(&b.derive_memo(v, memo))),
                Var::Odd(_) => match a.parity() {
                    Parity::Zero => Expr::zero(),
                    Parity::Even | Parity::Odd => {
                        let first = a.derive_memo(v, memo).mul(b);
                        let second = a.mul(&b.derive_memo(v, memo));
                        if a.parity() == Parity::Odd {
                            first.sub(&second)
                        } else {
                            first.add(&second)
                        }
                    }
                    Parity::Mixed => {
                        let (ae, ao) = a.parity_split();
                        let de = ae.derive_memo(v, memo).mul(b).add(&ae.mul(&b.derive_memo(v, memo)));
                        let dodd = ao.derive_memo(v, memo).mul(b).sub(&ao.mul(&b.derive_memo(v, memo)));
                        de.add(&dodd)
                    }
                },
            },
            // the argument is even, so the chain rule carries no sign
            Kind::Apply(f, u) => derivative_expr(*f, u, 1).mul(&u.derive_memo(v, memo)),
        };
        memo.insert(self.node_ptr(), (self.clone(), d.clone()));
        d
    }

    /// `∂^ν` in the even variables.
    pub fn derive_multi(&self, nu: &[u32]) -> Expr {
        let mut e = self.clone();
        for (i, &n) in nu.iter().enumerate() {
            for _ in 0..n {
                e = e.derive(Var::Even(i));
            }
        }
        e
    }

    /// `∂^J = ∂_{θ_{j1}} ∘ ... ` with ascending `j` applied first, so that
    /// `∂^J θ^J = 1`.
    pub fn derive_odd_mask(&self, mask: u64) -> Expr {
        let mut e = self.clone();
        for j in crate::algebra::monomial::mask_indices(mask) {
            e = e.derive(Var::Odd(j));
        }
        e
    }
}
