//! Linear relations in F^d, stored as subspaces of F^{2d}.
//!
//! The vector `(x | y)` stands for the pair `{x, y}`: the first `d` coordinates are `x`.
//! Range and multivalued part are also written R(·)/ran and M(·)/mul; here they are
//! `ran` and `mul`.

use crate::fieldkit::{FieldTag, Matrix, Scalar, Subspace, Vector};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRelation {
    d: usize,
    space: Subspace,
}

/// Domain, range, kernel and multivalued part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationParts {
    pub dom: Subspace,
    pub ran: Subspace,
    pub ker: Subspace,
    pub mul: Subspace,
}

/// Kernels, multivalued parts and ranges of the powers `A^0, …, A^nmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSpaces {
    pub ker: Vec<Subspace>,
    pub mul: Vec<Subspace>,
    pub ran: Vec<Subspace>,
}

impl PowerSpaces {
    /// `D_n = dim N(A^{n+1}) − dim N(A^n)`; one entry fewer than the tower height.
    pub fn degrees(&self) -> Vec<usize> {
        self.ker.windows(2).map(|w| w[1].dim() - w[0].dim()).collect()
    }
}

impl LinearRelation {
    pub fn new(space: Subspace) -> Result<Self> {
        if !space.ambient().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: space.ambient() + 1, found: space.ambient() });
        }
        Ok(LinearRelation { d: space.ambient() / 2, space })
    }

    /// Span of the given pairs `{x, y}`.
    pub fn from_pairs(field: FieldTag, d: usize, pairs: &[(Vector, Vector)]) -> Result<Self> {
        let mut rows = Vec::with_capacity(pairs.len());
        for (x, y) in pairs {
            for v in [x, y] {
                if v.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: v.len() });
                }
            }
            rows.push(x.iter().chain(y).cloned().collect());
        }
        Ok(LinearRelation { d, space: Subspace::span(field, 2 * d, &rows)? })
    }

    /// The graph `{(x | m·x)}`.
    pub fn from_graph(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        let d = m.rows();
        let rows: Vec<Vector> = (0..d)
            .map(|j| {
                let mut v = vec![m.field().zero(); 2 * d];
                v[j] = m.field().one();
                for i in 0..d {
                    v[d + i] = m.get(i, j).clone();
                }
                v
            })
            .collect();
        Ok(LinearRelation { d, space: Subspace::span(m.field(), 2 * d, &rows)? })
    }

    pub fn identity(field: FieldTag, d: usize) -> Self {
        Self::from_graph(&Matrix::identity(field, d)).expect("square")
    }

    pub fn field(&self) -> FieldTag {
        self.space.field()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Canonical basis split into pairs.
    pub fn pairs(&self) -> Vec<(Vector, Vector)> {
        self.space
            .basis()
            .row_vectors()
            .map(|r| (r[..self.d].to_vec(), r[self.d..].to_vec()))
            .collect()
    }

    pub fn contains_pair(&self, x: &[Scalar], y: &[Scalar]) -> bool {
        let v: Vector = x.iter().chain(y).cloned().collect();
        self.space.contains(&v)
    }

    pub fn is_subset_of(&self, other: &LinearRelation) -> bool {
        self.space.is_subset_of(&other.space)
    }

    pub fn intersect(&self, other: &LinearRelation) -> Result<LinearRelation> {
        Ok(LinearRelation { d: self.d, space: self.space.intersect(&other.space)? })
    }

    pub fn sum(&self, other: &LinearRelation) -> Result<LinearRelation> {
        Ok(LinearRelation { d: self.d, space: self.space.sum(&other.space)? })
    }

    fn check(&self, other: &LinearRelation) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch { expected: self.field(), found: other.field() });
        }
        Ok(())
    }

    pub fn inverse(&self) -> LinearRelation {
        let rows: Vec<Vector> = self
            .space
            .basis()
            .row_vectors()
            .map(|r| r[self.d..].iter().chain(&r[..self.d]).cloned().collect())
            .collect();
        LinearRelation { d: self.d, space: Subspace::span(self.field(), 2 * self.d, &rows).expect("length 2d") }
    }

    /// The product `self·other = {(x | z) : (x | y) ∈ other, (y | z) ∈ self}`.
    ///
    /// Works in F^{3d} with coordinates ordered (x, z, y): membership of (x | y) in `other`
    /// and of (y | z) in `self` are stacked linear constraints, and the middle vector y is
    /// dropped by projecting the solution space onto the first 2d coordinates.
    pub fn compose(&self, other: &LinearRelation) -> Result<LinearRelation> {
        self.check(other)?;
        let (d, field) = (self.d, self.field());
        let mut rows = Vec::new();
        let ann_b = other.space.annihilator();
        for r in ann_b.row_vectors() {
            let mut v = vec![field.zero(); 3 * d];
            v[..d].clone_from_slice(&r[..d]);
            v[2 * d..].clone_from_slice(&r[d..]);
            rows.push(v);
        }
        let ann_a = self.space.annihilator();
        for r in ann_a.row_vectors() {
            let mut v = vec![field.zero(); 3 * d];
            v[2 * d..].clone_from_slice(&r[..d]);
            v[d..2 * d].clone_from_slice(&r[d..]);
            rows.push(v);
        }
        let solutions = Matrix::from_rows(field, 3 * d, rows)?.kernel();
        Ok(LinearRelation { d, space: solutions.project(0..2 * d) })
    }

    /// `A^0 = I`, `A^n = A·A^{n-1}`.
    pub fn power(&self, n: usize) -> LinearRelation {
        self.powers(n).pop().expect("nonempty tower")
    }

    /// `[A^0, A^1, …, A^nmax]`. Once two consecutive powers agree the rest are copies.
    pub fn powers(&self, nmax: usize) -> Vec<LinearRelation> {
        let mut out = vec![LinearRelation::identity(self.field(), self.d)];
        while out.len() <= nmax {
            let last = out.last().expect("nonempty");
            let next = if out.len() >= 2 && out[out.len() - 2] == *last {
                last.clone()
            } else {
                self.compose(last).expect("same shape")
            };
            out.push(next);
        }
        out
    }

    pub fn dom(&self) -> Subspace {
        self.space.project(0..self.d)
    }

    pub fn ran(&self) -> Subspace {
        self.space.project(self.d..2 * self.d)
    }

    /// `{x : (x | 0) ∈ A}`.
    pub fn ker(&self) -> Subspace {
        self.space.annihilator().columns(0..self.d).kernel()
    }

    /// `{y : (0 | y) ∈ A}`.
    pub fn mul(&self) -> Subspace {
        self.space.annihilator().columns(self.d..2 * self.d).kernel()
    }

    pub fn parts(&self) -> RelationParts {
        RelationParts { dom: self.dom(), ran: self.ran(), ker: self.ker(), mul: self.mul() }
    }

    /// `A(S) = {y : (x | y) ∈ A for some x ∈ S}`.
    pub fn image_of(&self, s: &Subspace) -> Result<Subspace> {
        self.lifted(s, true).map(|t| t.project(self.d..2 * self.d))
    }

    /// `A^{-1}(S) = {x : (x | y) ∈ A for some y ∈ S}`.
    pub fn preimage_of(&self, s: &Subspace) -> Result<Subspace> {
        self.lifted(s, false).map(|t| t.project(0..self.d))
    }

    /// `A ∩ (S × F^d)` or `A ∩ (F^d × S)`.
    fn lifted(&self, s: &Subspace, first: bool) -> Result<Subspace> {
        if s.ambient() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: s.ambient() });
        }
        let field = self.field();
        let offset = if first { 0 } else { self.d };
        let mut rows: Vec<Vector> = self.space.annihilator().row_vectors().map(<[Scalar]>::to_vec).collect();
        for r in s.annihilator().row_vectors() {
            let mut v = vec![field.zero(); 2 * self.d];
            v[offset..offset + self.d].clone_from_slice(r);
            rows.push(v);
        }
        Ok(Matrix::from_rows(field, 2 * self.d, rows)?.kernel())
    }

    /// The operator-like sum `{(x | y + z) : (x | y) ∈ A, (x | z) ∈ B}`.
    pub fn op_sum(&self, other: &LinearRelation) -> Result<LinearRelation> {
        self.check(other)?;
        let (d, field) = (self.d, self.field());
        // coordinates (x, y, z)
        let mut rows = Vec::new();
        for r in self.space.annihilator().row_vectors() {
            let mut v = vec![field.zero(); 3 * d];
            v[..2 * d].clone_from_slice(r);
            rows.push(v);
        }
        for r in other.space.annihilator().row_vectors() {
            let mut v = vec![field.zero(); 3 * d];
            v[..d].clone_from_slice(&r[..d]);
            v[2 * d..].clone_from_slice(&r[d..]);
            rows.push(v);
        }
        let solutions = Matrix::from_rows(field, 3 * d, rows)?.kernel();
        let gens: Vec<Vector> = solutions
            .basis()
            .row_vectors()
            .map(|r| r[..d].iter().cloned().chain((0..d).map(|i| &r[d + i] + &r[2 * d + i])).collect())
            .collect();
        Ok(LinearRelation { d, space: Subspace::span(field, 2 * d, &gens)? })
    }

    /// `A − λ = {(x | y − λx) : (x | y) ∈ A}`.
    pub fn scale_shift(&self, lambda: &Scalar) -> LinearRelation {
        let d = self.d;
        let gens: Vec<Vector> = self
            .space
            .basis()
            .row_vectors()
            .map(|r| r[..d].iter().cloned().chain((0..d).map(|i| &r[d + i] - &(lambda * &r[i]))).collect())
            .collect();
        LinearRelation { d, space: Subspace::span(self.field(), 2 * d, &gens).expect("length 2d") }
    }

    /// `N(A^n)`, `mul(A^n)` and `R(A^n)` for `n = 0..=nmax`, by the recursions
    /// `N(A^{n+1}) = A^{-1}(N(A^n))`, `mul(A^{n+1}) = A(mul(A^n))`, `R(A^{n+1}) = A(R(A^n))`.
    pub fn power_spaces(&self, nmax: usize) -> PowerSpaces {
        let field = self.field();
        let mut out = PowerSpaces {
            ker: vec![Subspace::zero(field, self.d)],
            mul: vec![Subspace::zero(field, self.d)],
            ran: vec![Subspace::full(field, self.d)],
        };
        for n in 0..nmax {
            let step = |v: &Vec<Subspace>, f: &dyn Fn(&Subspace) -> Subspace| {
                if n > 0 && v[n] == v[n - 1] {
                    v[n].clone()
                } else {
                    f(&v[n])
                }
            };
            let ker = step(&out.ker, &|s| self.preimage_of(s).expect("same ambient"));
            let mul = step(&out.mul, &|s| self.image_of(s).expect("same ambient"));
            let ran = step(&out.ran, &|s| self.image_of(s).expect("same ambient"));
            out.ker.push(ker);
            out.mul.push(mul);
            out.ran.push(ran);
        }
        out
    }

    /// `D_n = dim N(A^{n+1}) − dim N(A^n)` for `n = 0..=nmax`.
    pub fn jordan_degrees(&self, nmax: usize) -> Vec<usize> {
        let kernels: Vec<usize> = self.powers(nmax + 1).iter().map(|p| p.ker().dim()).collect();
        kernels.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.space.to_strings()
    }
}
