use std::cmp::Ordering;
use std::fmt::Write as _;

/// A monomial `x^ν θ^J` in `k` even and `l` odd generators. The odd part is a
/// bitmask (bit `j` is `θ_{j+1}`), so `θ_j² = 0` is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    nu: Box<[u32]>,
    odd: u64,
}

/// Maximum number of odd generators representable by the bitmask.
pub const MAX_ODD: usize = 64;

impl Monomial {
    pub fn one(k: usize) -> Monomial {
        Monomial {
            nu: vec![0; k].into_boxed_slice(),
            odd: 0,
        }
    }

    pub fn new(nu: Vec<u32>, odd: u64) -> Monomial {
        Monomial {
            nu: nu.into_boxed_slice(),
            odd,
        }
    }

    pub fn even_generator(k: usize, i: usize) -> Monomial {
        let mut nu = vec![0; k];
        nu[i] = 1;
        Monomial::new(nu, 0)
    }

    pub fn odd_generator(k: usize, j: usize) -> Monomial {
        Monomial::new(vec![0; k], 1 << j)
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    /// Odd indices (0-based) in ascending order.
    pub fn odd_indices(&self) -> impl Iterator<Item = usize> + '_ {
        mask_indices(self.odd)
    }

    pub fn even_degree(&self) -> u32 {
        self.nu.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.even_degree() + self.odd.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.nu.iter().all(|&e| e == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.odd.count_ones() % 2 == 1
    }

    /// Product in the free supercommutative algebra. Returns `None` when an
    /// odd generator repeats, otherwise the sign (`true` = negative) obtained
    /// by sorting the concatenated odd indices with adjacent transpositions.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let nu = self
            .nu
            .iter()
            .zip(other.nu.iter())
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>();
        Some((
            odd_swap_sign(self.odd, other.odd),
            Monomial::new(nu, self.odd | other.odd),
        ))
    }

    /// Degree-lexicographic comparison with `x_1 > … > x_k > θ_1 > … > θ_l`.
    pub fn deglex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        for (a, b) in self.nu.iter().zip(other.nu.iter()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        // the lowest differing odd bit decides; the monomial owning it is larger
        let diff = self.odd ^ other.odd;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff.trailing_zeros();
        if self.odd >> low & 1 == 1 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Order in which quotient bases are listed: ascending degree, and within
    /// one degree the deg-lex largest first (`x₁` before `x₂` before `θ₁`).
    pub fn listing_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.lex_cmp(self))
    }

    /// Inverse of `display_with(even, odd)` for canonical names: even
    /// factors in index order, odd factors strictly ascending.
    pub fn parse_with(text: &str, k: usize, l: usize, even: &str, odd: &str) -> Option<Monomial> {
        let text = text.trim();
        if text == "1" {
            return Some(Monomial::one(k));
        }
        let mut nu = vec![0u32; k];
        let mut mask = 0u64;
        let mut last_even = None;
        let mut last_odd = None;
        let mut rest = text;
        while !rest.is_empty() {
            let is_even = rest.starts_with(even) && !(odd.starts_with(even) && rest.starts_with(odd));
            let prefix = if is_even { even } else if rest.starts_with(odd) { odd } else { return None };
            rest = &rest[prefix.len()..];
            let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
            let idx: usize = rest[..digits].parse().ok()?;
            rest = &rest[digits..];
            let idx = idx.checked_sub(1)?;
            if is_even {
                let mut exp = 1u32;
                if let Some(r) = rest.strip_prefix('^') {
                    let d = r.len() - r.trim_start_matches(|c: char| c.is_ascii_digit()).len();
                    exp = r[..d].parse().ok()?;
                    rest = &r[d..];
                }
                if idx >= k || last_odd.is_some() || last_even.is_some_and(|p| p >= idx) {
                    return None;
                }
                if exp == 0 {
                    return None;
                }
                nu[idx] = exp;
                last_even = Some(idx);
            } else {
                if idx >= l || last_odd.is_some_and(|p| p >= idx) {
                    return None;
                }
                mask |= 1 << idx;
                last_odd = Some(idx);
            }
        }
        Some(Monomial::new(nu, mask))
    }

    /// Human-readable name using `even` / `odd` generator prefixes, e.g.
    /// `t1^2z1z3`; the constant monomial is `1`.
    pub fn display_with(&self, even: &str, odd: &str) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (i, &e) in self.nu.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(s, "{even}{}", i + 1).unwrap(),
                e => write!(s, "{even}{}^{e}", i + 1).unwrap(),
            }
        }
        for j in self.odd_indices() {
            write!(s, "{odd}{}", j + 1).unwrap();
        }
        s
    }
}

pub fn mask_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(j)
        }
    })
}

/// Parity of the number of pairs `(a ∈ left, b ∈ right)` with `a > b`.
pub fn odd_swap_sign(left: u64, right: u64) -> bool {
    let mut count = 0u32;
    for j in mask_indices(right) {
        count += left.checked_shr(j as u32 + 1).unwrap_or(0).count_ones();
    }
    count % 2 == 1
}

/// All exponent vectors in `k` variables with total degree exactly `d`.
pub fn exponents_of_degree(k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == k {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(k, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(k, d, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All exponent vectors in `k` variables with total degree at most `max`.
pub fn exponents_up_to(k: usize, max: u32) -> Vec<Vec<u32>> {
    (0..=max).flat_map(|d| exponents_of_degree(k, d)).collect()
}

/// Every monomial of `K[k|l]` with total degree `< s`, in listing order.
pub fn monomials_below(k: usize, l: usize, s: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let max_odd = l.min(s.saturating_sub(1) as usize);
    for w in 0..=max_odd {
        for mask in odd_subsets(l, w) {
            for d in 0..s - w as u32 {
                for nu in exponents_of_degree(k, d) {
                    out.push(Monomial::new(nu, mask));
                }
            }
        }
    }
    out.sort_by(|a, b| a.listing_cmp(b));
    out
}

/// Bitmasks of all `w`-element subsets of `{0, …, l-1}`.
pub fn odd_subsets(l: usize, w: usize) -> Vec<u64> {
    fn rec(start: usize, l: usize, w: usize, mask: u64, out: &mut Vec<u64>) {
        if w == 0 {
            out.push(mask);
            return;
        }
        for j in start..l {
            if l - j < w {
                break;
            }
            rec(j + 1, l, w - 1, mask | 1 << j, out);
        }
    }
    let mut out = Vec::new();
    rec(0, l, w, 0, &mut out);
    out
}

/// Number of monomials of degree `< s` without enumerating them.
pub fn count_below(k: usize, l: usize, s: u32) -> u128 {
    let binom = |n: u128, r: u128| -> u128 {
        if r > n {
            return 0;
        }
        let mut acc = 1u128;
        for i in 0..r {
            acc = acc.saturating_mul(n - i) / (i + 1);
        }
        acc
    };
    let mut total = 0u128;
    for w in 0..=l.min(s.saturating_sub(1) as usize) {
        let odd = binom(l as u128, w as u128);
        // even monomials of degree < s - w in k variables: C(k + s - w - 1, k)
        let even = if k == 0 {
            1
        } else {
            binom((k as u128) + (s as u128 - w as u128) - 1, k as u128)
        };
        total = total.saturating_add(odd.saturating_mul(even));
    }
    total
}
