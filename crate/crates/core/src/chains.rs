//! Chains of a linear relation: classification, witnesses, class spans, the shifting
//! reduction and chain spaces.
//!
//! A tuple `(x_n, …, x_0)` is a chain of `T` when `{x_j, x_{j-1}} ∈ T` for `j = 1..=n`, and
//! a quasi-Jordan chain when moreover `{x_0, 0} ∈ T`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fieldkit::{Matrix, Scalar, Subspace, Vector};
use crate::relation::LinearRelation;
use crate::{Error, Result};

/// An eigenvalue candidate: a field element or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpectralPoint {
    Finite(Scalar),
    Infinity,
}

impl fmt::Display for SpectralPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralPoint::Finite(s) => write!(f, "{s}"),
            SpectralPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `T − λ` for a finite point, `T^{-1}` at infinity.
pub fn shifted(t: &LinearRelation, at: &SpectralPoint) -> LinearRelation {
    match at {
        SpectralPoint::Finite(l) if l.is_zero() => t.clone(),
        SpectralPoint::Finite(l) => t.scale_shift(l),
        SpectralPoint::Infinity => t.inverse(),
    }
}

/// `(x_n, …, x_0)`, stored head first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainTuple {
    entries: Vec<Vector>,
}

impl ChainTuple {
    pub fn new(entries: Vec<Vector>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::Precondition("a chain needs at least one entry".into()));
        };
        let d = first.len();
        if let Some(bad) = entries.iter().find(|e| e.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.len() });
        }
        Ok(ChainTuple { entries })
    }

    /// The level `n` of `(x_n, …, x_0)`.
    pub fn level(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.entries[0].len()
    }

    /// `x_j`.
    pub fn x(&self, j: usize) -> &Vector {
        &self.entries[self.level() - j]
    }

    pub fn head(&self) -> &Vector {
        &self.entries[0]
    }

    pub fn tail(&self) -> &Vector {
        self.entries.last().expect("nonempty")
    }

    pub fn entries(&self) -> &[Vector] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Scalar::is_zero)
    }

    /// `{x_j, x_{j-1}}` for `j ≥ 1` and `{x_0, 0}` for `j = 0`, as a vector of F^{2d}.
    fn link(&self, j: usize) -> Vector {
        let next = if j == 0 {
            vec![self.x(0)[0].field().zero(); self.ambient()]
        } else {
            self.x(j - 1).clone()
        };
        self.x(j).iter().cloned().chain(next).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainClass {
    pub is_chain: bool,
    pub is_quasi_jordan: bool,
    pub is_singular: bool,
    pub is_jordan: bool,
    /// `n` when the tuple is a Jordan chain.
    pub jordan_level: Option<usize>,
}

fn check_tuple(t: &LinearRelation, tuple: &ChainTuple) -> Result<()> {
    if tuple.ambient() != t.d() {
        return Err(Error::DimensionMismatch { expected: t.d(), found: tuple.ambient() });
    }
    Ok(())
}

fn is_quasi_jordan(t: &LinearRelation, tuple: &ChainTuple) -> bool {
    (0..=tuple.level()).all(|j| t.space().contains(&tuple.link(j)))
}

/// Classifies `tuple` as a chain of `a − λ` (or of `a^{-1}` at infinity).
pub fn classify_chain(a: &LinearRelation, tuple: &ChainTuple, at: &SpectralPoint) -> Result<ChainClass> {
    check_tuple(a, tuple)?;
    let t = shifted(a, at);
    let n = tuple.level();
    let is_chain = (1..=n).all(|j| t.space().contains(&tuple.link(j)));
    let is_quasi_jordan = is_chain && t.space().contains(&tuple.link(0));
    let is_singular = is_quasi_jordan && !tuple.is_zero() && t.mul().contains(tuple.head());
    let is_jordan = is_quasi_jordan && !t.power(n).ker().contains(tuple.head());
    Ok(ChainClass { is_chain, is_quasi_jordan, is_singular, is_jordan, jordan_level: is_jordan.then_some(n) })
}

/// A quasi-Jordan chain `(head, x_{n-1}, …, x_0)` of `a`.
///
/// The links form one linear system in `x_{n-1}, …, x_0` (in that column order); the
/// returned witnesses are its particular solution with every free variable zero.
pub fn extract_jordan_chain(a: &LinearRelation, head: &[Scalar], n: usize) -> Result<ChainTuple> {
    let d = a.d();
    if head.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: head.len() });
    }
    let field = a.field();
    let ann = a.space().annihilator();
    let (left, right) = (ann.columns(0..d), ann.columns(d..2 * d));
    let unknowns = n * d;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // column block of x_j, j < n
    let block = |j: usize| (n - 1 - j) * d;
    for j in (0..=n).rev() {
        for r in 0..ann.rows() {
            let mut row = vec![field.zero(); unknowns];
            let mut b = field.zero();
            // left(r)·x_j + right(r)·x_{j-1} = 0
            if j == n {
                for (c, h) in left.row(r).iter().zip(head) {
                    b = &b - &(c * h);
                }
            } else {
                row[block(j)..block(j) + d].clone_from_slice(left.row(r));
            }
            if j > 0 {
                row[block(j - 1)..block(j - 1) + d].clone_from_slice(right.row(r));
            }
            rows.push(row);
            rhs.push(b);
        }
    }
    let solution = if unknowns == 0 {
        rhs.iter().all(Scalar::is_zero).then(Vec::new)
    } else {
        Matrix::from_rows(field, unknowns, rows)?.solve(&rhs)?
    };
    let Some(sol) = solution else {
        return Err(Error::Precondition(format!("head is not in the kernel of the power {}", n + 1)));
    };
    let mut entries = vec![head.to_vec()];
    entries.extend(sol.chunks(d.max(1)).take(n).map(<[Scalar]>::to_vec));
    ChainTuple::new(entries)
}

/// Both sides of the class-span identity for quasi-Jordan chains of level `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpan {
    /// `dim span{[x_{k,n}]}` in `N(A^{n+1}) / N(A^n)`.
    pub heads: usize,
    /// `dim 𝓛 / (𝓛 ∩ mul A^n)` with `𝓛 = span{x_{k,0}}`.
    pub tails: usize,
}

pub fn class_span_dim(a: &LinearRelation, chains: &[ChainTuple], n: usize) -> Result<ClassSpan> {
    let (field, d) = (a.field(), a.d());
    for c in chains {
        check_tuple(a, c)?;
        if c.level() != n {
            return Err(Error::Precondition(format!("chain of level {} where {n} was expected", c.level())));
        }
        if !is_quasi_jordan(a, c) {
            return Err(Error::Precondition("input tuple is not a quasi-Jordan chain".into()));
        }
    }
    let an = a.power(n);
    let kernel = an.ker();
    let heads = Subspace::span(field, d, &chains.iter().map(|c| c.head().clone()).collect::<Vec<_>>())?;
    let tails = Subspace::span(field, d, &chains.iter().map(|c| c.tail().clone()).collect::<Vec<_>>())?;
    Ok(ClassSpan {
        heads: heads.sum(&kernel)?.dim() - kernel.dim(),
        tails: tails.dim() - tails.intersect(&an.mul())?.dim(),
    })
}

/// Output of [`reduce_chains`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// `m − 1` quasi-Jordan chains of the smaller relation.
    pub chains: Vec<ChainTuple>,
    /// Input indices in the order used; the last one is the chain spent on the others.
    pub order: Vec<usize>,
}

/// Turns `m` quasi-Jordan chains of `a` into `m − 1` quasi-Jordan chains of the
/// codimension-one subrelation `c`.
///
/// The spent chain is the first one whose link leaves `c` at the lowest possible level
/// `h`; every other chain `k` is corrected level by level,
/// `y_{k,j} = x_{k,j} − Σ_{i=h}^{min(j+h,n)} α_{k,i} x_{m,j+h−i}`.
pub fn reduce_chains(a: &LinearRelation, c: &LinearRelation, chains: &[ChainTuple]) -> Result<Reduction> {
    check_extension(a, c)?;
    let Some(first) = chains.first() else {
        return Ok(Reduction { chains: Vec::new(), order: Vec::new() });
    };
    let n = first.level();
    for t in chains {
        check_tuple(a, t)?;
        if t.level() != n {
            return Err(Error::Precondition("chains of unequal length".into()));
        }
        if !is_quasi_jordan(a, t) {
            return Err(Error::Precondition("input tuple is not a quasi-Jordan chain of the larger relation".into()));
        }
    }
    let outside = |k: usize, j: usize| !c.space().contains(&chains[k].link(j));
    let pick = (0..=n).find_map(|j| (0..chains.len()).find(|&k| outside(k, j)).map(|k| (k, j)));
    let Some((spent, h)) = pick else {
        let order: Vec<usize> = (0..chains.len()).collect();
        return Ok(Reduction { chains: chains[..chains.len() - 1].to_vec(), order });
    };
    let mut order: Vec<usize> = (0..chains.len()).filter(|&k| k != spent).collect();
    order.push(spent);

    // a functional vanishing on c and not on the spent link at level h
    let g = chains[spent].link(h);
    let phi = c
        .space()
        .annihilator()
        .row_vectors()
        .find(|r| !dot(r, &g).is_zero())
        .expect("link outside c")
        .to_vec();
    let phi_g = dot(&phi, &g);

    let m = &chains[spent];
    let mut out = Vec::with_capacity(chains.len() - 1);
    for &k in &order[..order.len() - 1] {
        let x = &chains[k];
        let mut alpha: Vec<Scalar> = Vec::with_capacity(n + 1 - h);
        for j in h..=n {
            let mut r = x.link(j);
            for (off, a_i) in alpha.iter().enumerate() {
                let i = h + off;
                axpy(&mut r, a_i, &m.link(j + h - i));
            }
            alpha.push(&dot(&phi, &r) / &phi_g);
        }
        let entries: Vec<Vector> = (0..=n)
            .rev()
            .map(|j| {
                let mut y = x.x(j).clone();
                for i in h..=(j + h).min(n) {
                    axpy(&mut y, &alpha[i - h], m.x(j + h - i));
                }
                y
            })
            .collect();
        out.push(ChainTuple::new(entries)?);
    }
    Ok(Reduction { chains: out, order })
}

/// `v ← v − f·w`.
fn axpy(v: &mut [Scalar], f: &Scalar, w: &[Scalar]) {
    for (a, b) in v.iter_mut().zip(w) {
        a.sub_mul_assign(f, b);
    }
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(a[0].field().zero(), |acc, (x, y)| &acc + &(x * y))
}

fn check_extension(a: &LinearRelation, c: &LinearRelation) -> Result<()> {
    if !c.is_subset_of(a) {
        return Err(Error::Precondition("the smaller relation is not contained in the larger one".into()));
    }
    if a.dim() != c.dim() + 1 {
        return Err(Error::Precondition(format!("codimension {} instead of 1", a.dim() - c.dim())));
    }
    Ok(())
}

/// The space of `m`-tuples `({x_m, x_{m-1}}, …, {x_1, x_0})` of pairs in `t` forming a
/// chain, inside F^{2dm}.
pub fn chainspace(t: &LinearRelation, m: usize) -> Subspace {
    let (d, field) = (t.d(), t.field());
    let width = 2 * d * m;
    let ann = t.space().annihilator();
    let mut rows = Vec::new();
    for i in 0..m {
        for r in ann.row_vectors() {
            let mut v = vec![field.zero(); width];
            v[2 * d * i..2 * d * (i + 1)].clone_from_slice(r);
            rows.push(v);
        }
        // second entry of pair i equals the first entry of pair i + 1
        if i + 1 < m {
            for c in 0..d {
                let mut v = vec![field.zero(); width];
                v[2 * d * i + d + c] = field.one();
                v[2 * d * (i + 1) + c] = -field.one();
                rows.push(v);
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(field, width);
    }
    Matrix::from_rows(field, width, rows).expect("row width").kernel()
}

/// `dim S_m^a − dim S_m^c` for a subrelation `c ⊆ a`.
pub fn chainspace_quotient_dim(a: &LinearRelation, c: &LinearRelation, m: usize) -> Result<usize> {
    if !c.is_subset_of(a) {
        return Err(Error::Precondition("the smaller relation is not contained in the larger one".into()));
    }
    Ok(chainspace(a, m).dim() - chainspace(c, m).dim())
}

/// Whether `a` has a singular chain, decided as `N(a^k) ∩ mul(a^k) ≠ {0}` once both
/// sequences have stopped growing.
///
/// A nonzero `x` in both spaces gives chains `(0, …, x)` and `(x, …, x_0)` with
/// `x_0 ∈ N(a)`; joined at `x` they form a nonzero chain with head `0 ∈ mul a`.
/// Conversely, prepending `0` to a singular chain `(x_n, …, x_0)` shows every entry lies in
/// some `mul(a^i) ∩ N(a^{j})`.
pub fn has_singular_chain(a: &LinearRelation) -> bool {
    let field = a.field();
    let (mut ker, mut mul) = (Subspace::zero(field, a.d()), Subspace::zero(field, a.d()));
    loop {
        let next_ker = a.preimage_of(&ker).expect("same ambient");
        let next_mul = a.image_of(&mul).expect("same ambient");
        if next_ker == ker && next_mul == mul {
            break;
        }
        ker = next_ker;
        mul = next_mul;
    }
    !ker.intersect(&mul).expect("same ambient").is_zero()
}
