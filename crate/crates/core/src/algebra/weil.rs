use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use super::linalg::{Echelon, SparseVec};
use super::monomial::{count_below, monomials_below, Monomial, MAX_ODD};
use crate::error::{Error, Result};
use crate::scalar::{Coef, Rational};

/// Largest ambient `K[k|l]/m^s` the constructors accept.
pub const MAX_AMBIENT_DIM: usize = 10_000;

/// Multiplication tables are precomputed up to this quotient dimension.
const TABLE_DIM: usize = 512;

/// Sparse combination of quotient-basis indices.
pub(crate) type Combination = Vec<(u32, Coef)>;

/// A super Weil algebra presented as `K[k|l] / (m^s + I)`.
///
/// The ideal `I` is stored as a linear subspace of the truncated ambient in
/// reduced echelon form. Ambient monomials are numbered in *elimination
/// order* (descending deg-lex), so a row's pivot is its leading monomial and
/// the quotient basis consists of the non-pivot monomials.
///
/// Cloning is cheap; the structure is immutable and shared.
#[derive(Clone)]
pub struct SuperWeilAlgebra(Arc<Inner>);

struct Inner {
    k: usize,
    l: usize,
    s: u32,
    ambient: Vec<Monomial>,
    ambient_index: HashMap<Monomial, usize>,
    ideal: Echelon,
    generators: Vec<Vec<(Monomial, Rational)>>,
    basis: Vec<Monomial>,
    basis_index: HashMap<Monomial, u32>,
    nf: Vec<Combination>,
    table: Option<Vec<Combination>>,
    height: OnceLock<usize>,
    width: OnceLock<usize>,
}

impl PartialEq for SuperWeilAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.k == other.0.k
                && self.0.l == other.0.l
                && self.0.s == other.0.s
                && self.0.ideal == other.0.ideal)
    }
}

impl fmt::Debug for SuperWeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SuperWeilAlgebra")
            .field("k", &self.0.k)
            .field("l", &self.0.l)
            .field("s", &self.0.s)
            .field("dim", &self.dim())
            .field("basis", &self.basis_names())
            .finish()
    }
}

impl SuperWeilAlgebra {
    /// `K[t₁..t_k] ⊗ Λ(θ₁..θ_l) / m^s`.
    pub fn truncated(k: usize, l: usize, s: i64) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidTruncation(s));
        }
        Self::build(k, l, s as u32, Vec::new())
    }

    /// The Grassmann algebra `Λ_q`, i.e. `K[0|q]/m^{q+1}`.
    pub fn grassmann(q: usize) -> Result<Self> {
        Self::truncated(0, q, q as i64 + 1)
    }

    /// Dual numbers `K[t]/t²`.
    pub fn dual_numbers() -> Self {
        Self::truncated(1, 0, 2).expect("valid")
    }

    /// Super dual numbers `K[x,θ]/⟨x², xθ, θ²⟩`.
    pub fn super_dual_numbers() -> Self {
        Self::truncated(1, 1, 2).expect("valid")
    }

    /// The ground field as the zero-generator algebra.
    pub fn field() -> Self {
        Self::truncated(0, 0, 1).expect("valid")
    }

    /// Builds the presentation from monomial-keyed ideal generators living
    /// in `K[k|l]/m^s`. Terms of degree `≥ s` are dropped.
    pub(crate) fn build(
        k: usize,
        l: usize,
        s: u32,
        generators: Vec<Vec<(Monomial, Rational)>>,
    ) -> Result<Self> {
        if l > MAX_ODD {
            return Err(Error::TooLarge {
                dim: usize::MAX,
                limit: MAX_AMBIENT_DIM,
            });
        }
        let count = count_below(k, l, s);
        if count > MAX_AMBIENT_DIM as u128 {
            return Err(Error::TooLarge {
                dim: usize::try_from(count).unwrap_or(usize::MAX),
                limit: MAX_AMBIENT_DIM,
            });
        }
        let mut ambient = monomials_below(k, l, s);
        ambient.sort_by(|a, b| b.deglex_cmp(a));
        let ambient_index: HashMap<Monomial, usize> = ambient
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();

        let mut gen_vecs = Vec::with_capacity(generators.len());
        for g in &generators {
            let mut v = SparseVec::new();
            for (m, c) in g {
                if m.nu().len() != k || (m.odd_mask() >> l) != 0 {
                    return Err(Error::Malformed(format!(
                        "generator monomial {} is not in K[{k}|{l}]",
                        m.display_with("t", "z")
                    )));
                }
                if m.degree() >= s || c.is_zero() {
                    continue;
                }
                let e = v.entry(ambient_index[m]).or_insert_with(Rational::zero);
                *e += c;
                if e.is_zero() {
                    let idx = ambient_index[m];
                    v.remove(&idx);
                }
            }
            if !v.is_empty() {
                gen_vecs.push(v);
            }
        }

        let mut ideal = Echelon::new();
        for g in &gen_vecs {
            for m in &ambient {
                let mut prod = SparseVec::new();
                for (&a, c) in g {
                    if let Some((neg, mono)) = ambient[a].mul(m) {
                        if mono.degree() < s {
                            let e = prod.entry(ambient_index[&mono]).or_insert_with(Rational::zero);
                            if neg {
                                *e -= c;
                            } else {
                                *e += c;
                            }
                        }
                    }
                }
                prod.retain(|_, x| !x.is_zero());
                if !prod.is_empty() {
                    ideal.insert(prod);
                }
            }
        }
        ideal.finish();

        let one_idx = ambient_index[&Monomial::one(k)];
        if ideal.is_pivot(one_idx) {
            return Err(Error::UnitInIdeal);
        }

        let mut basis: Vec<Monomial> = ambient
            .iter()
            .enumerate()
            .filter(|(i, _)| !ideal.is_pivot(*i))
            .map(|(_, m)| m.clone())
            .collect();
        basis.sort_by(|a, b| a.listing_cmp(b));
        let basis_index: HashMap<Monomial, u32> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();

        let nf = ambient
            .iter()
            .enumerate()
            .map(|(i, m)| match ideal.row(i) {
                None => vec![(basis_index[m], Coef::One)],
                Some(row) => row
                    .iter()
                    .skip(1)
                    .map(|(c, x)| (basis_index[&ambient[*c]], Coef::from_rational(-x.clone())))
                    .collect(),
            })
            .collect();

        let mut inner = Inner {
            k,
            l,
            s,
            ambient,
            ambient_index,
            ideal,
            generators,
            basis,
            basis_index,
            nf,
            table: None,
            height: OnceLock::new(),
            width: OnceLock::new(),
        };
        let n = inner.basis.len();
        if n <= TABLE_DIM {
            let mut table = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    table.push(inner.compute_basis_product(i, j));
                }
            }
            inner.table = Some(table);
        }
        Ok(SuperWeilAlgebra(Arc::new(inner)))
    }

    pub fn even_generators(&self) -> usize {
        self.0.k
    }

    pub fn odd_generators(&self) -> usize {
        self.0.l
    }

    /// The truncation order `s`: every ambient monomial of degree `≥ s` is 0.
    pub fn truncation(&self) -> u32 {
        self.0.s
    }

    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.0.basis
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.0.basis.iter().map(|m| m.display_with("t", "z")).collect()
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.0.basis_index.get(m).map(|&i| i as usize)
    }

    /// Whether basis element `i` is odd.
    pub fn basis_is_odd(&self, i: usize) -> bool {
        self.0.basis[i].is_odd()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient.len()
    }

    pub fn ideal_rank(&self) -> usize {
        self.0.ideal.rank()
    }

    /// The ideal as its reduced echelon basis, each row a monomial-keyed
    /// ambient element.
    pub fn ideal_rows(&self) -> Vec<Vec<(Monomial, Rational)>> {
        self.0
            .ideal
            .rows()
            .map(|(_, row)| {
                row.iter()
                    .map(|(c, x)| (self.0.ambient[*c].clone(), x.clone()))
                    .collect()
            })
            .collect()
    }

    /// Generating set recorded at construction (used for serialization).
    pub fn generators(&self) -> &[Vec<(Monomial, Rational)>] {
        &self.0.generators
    }

    pub(crate) fn ideal(&self) -> &Echelon {
        &self.0.ideal
    }

    pub(crate) fn ambient_monomials(&self) -> &[Monomial] {
        &self.0.ambient
    }

    /// Same presentation (pointer-equal or equal ideal over the same ambient).
    pub fn same(&self, other: &SuperWeilAlgebra) -> bool {
        self == other
    }

    /// Normal form of an arbitrary monomial of `K[k|l]`.
    pub(crate) fn normal_form(&self, m: &Monomial) -> Combination {
        if m.degree() >= self.0.s {
            return Vec::new();
        }
        match self.0.ambient_index.get(m) {
            Some(&i) => self.0.nf[i].clone(),
            None => Vec::new(),
        }
    }

    /// Product of basis elements `i` and `j` as a combination of basis
    /// indices.
    pub(crate) fn basis_product(&self, i: usize, j: usize) -> std::borrow::Cow<'_, [(u32, Coef)]> {
        match &self.0.table {
            Some(t) => std::borrow::Cow::Borrowed(&t[i * self.dim() + j]),
            None => std::borrow::Cow::Owned(self.0.compute_basis_product(i, j)),
        }
    }

    /// Exact product in quotient coordinates, used for structural queries.
    pub(crate) fn mul_exact(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                for (idx, c) in self.basis_product(i, j).iter() {
                    let e = out.entry(*idx as usize).or_insert_with(Rational::zero);
                    *e += x * y * c.to_rational();
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// Smallest `r` with `nil(A)^{r+1} = 0`.
    pub fn height(&self) -> usize {
        *self.0.height.get_or_init(|| self.nil_powers().len())
    }

    /// `dim nil(A) / nil(A)²`.
    pub fn width(&self) -> usize {
        *self.0.width.get_or_init(|| {
            let powers = self.nil_powers();
            let first = powers.first().map_or(0, Echelon::rank);
            let second = powers.get(1).map_or(0, Echelon::rank);
            first - second
        })
    }

    /// `[nil, nil², …]` up to the last nonzero power.
    fn nil_powers(&self) -> Vec<Echelon> {
        let mut nil = Echelon::new();
        for i in 1..self.dim() {
            nil.insert(SparseVec::from([(i, <Rational as num_traits::One>::one())]));
        }
        let mut powers = Vec::new();
        let mut current = nil;
        while current.rank() > 0 {
            let mut next = Echelon::new();
            for (_, row) in current.rows() {
                for g in 1..self.dim() {
                    let prod = self.mul_exact(row, &SparseVec::from([(g, <Rational as num_traits::One>::one())]));
                    if !prod.is_empty() {
                        next.insert(prod);
                    }
                }
            }
            next.finish();
            powers.push(current);
            current = next;
        }
        powers
    }

    /// Image of an ambient element in quotient coordinates.
    pub(crate) fn reduce_ambient<S: crate::scalar::Scalar>(&self, terms: &[(Monomial, S)]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (m, c) in terms {
            for (idx, coef) in self.normal_form(m) {
                let slot = &mut out[idx as usize];
                *slot = slot.clone() + c.clone() * S::from_coef(&coef);
            }
        }
        out
    }

}

impl Inner {
    fn compute_basis_product(&self, i: usize, j: usize) -> Combination {
        match self.basis[i].mul(&self.basis[j]) {
            None => Vec::new(),
            Some((neg, m)) => {
                if m.degree() >= self.s {
                    return Vec::new();
                }
                let comb = self.nf[self.ambient_index[&m]].clone();
                if neg {
                    comb.into_iter().map(|(k, c)| (k, c.negated())).collect()
                } else {
                    comb
                }
            }
        }
    }
}
