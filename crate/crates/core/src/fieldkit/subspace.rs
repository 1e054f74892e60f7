//! Subspaces of F^n held in canonical form.
//!
//! A subspace stores the reduced row echelon form of any generating set with zero rows
//! dropped. That representative is unique, so structural equality of two `Subspace`
//! values is equality of the subspaces.

use std::ops::Range;

use super::matrix::{kernel_generators, Matrix, Vector};
use super::scalar::FieldTag;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldTag, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: FieldTag, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Smallest subspace of F^ambient containing `vectors`.
    pub fn span(field: FieldTag, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec())?;
        Ok(Self::row_space(&m))
    }

    pub(crate) fn from_generators_unchecked(field: FieldTag, ambient: usize, vectors: Vec<Vector>) -> Self {
        let m = Matrix::from_rows(field, ambient, vectors).expect("generators have the ambient length");
        Self::row_space(&m)
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        let r = m.rref();
        Subspace { ambient: m.cols(), basis: r.canonical, pivots: r.pivots }
    }

    pub fn field(&self) -> FieldTag {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors().map(<[_]>::to_vec).collect()
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch { expected: self.field(), found: other.field() });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` is not in the subspace.
    pub fn coordinates(&self, v: &[crate::Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient, "vector length differs from the ambient dimension");
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = rest[p].clone();
            if !c.is_zero() {
                for (j, b) in self.basis.row(i).iter().enumerate().skip(p) {
                    if !b.is_zero() {
                        rest[j].sub_mul_assign(&c, b);
                    }
                }
            }
            coords.push(c);
        }
        rest.iter().all(|s| s.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[crate::Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subset_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && self.basis.row_vectors().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Rows `c` with `c·x = 0` exactly for the `x` in this subspace.
    pub fn annihilator(&self) -> Matrix {
        let rref = crate::fieldkit::matrix::Rref {
            canonical: self.basis.clone(),
            rank: self.dim(),
            pivots: self.pivots.clone(),
        };
        let gens = kernel_generators(&rref, self.ambient);
        Matrix::from_rows(self.field(), self.ambient, gens).expect("annihilator rows have ambient length")
    }

    /// Intersection, as the null space of the stacked membership constraints of both spaces.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_subset_of(other) {
            return Ok(self.clone());
        }
        if other.is_subset_of(self) {
            return Ok(other.clone());
        }
        Ok(self.annihilator().vstack(&other.annihilator())?.kernel())
    }

    /// Coordinates `range` of every vector, as a subspace of F^{range.len()}.
    pub fn project(&self, range: Range<usize>) -> Subspace {
        let width = range.len();
        let gens = self.basis.row_vectors().map(|r| r[range.clone()].to_vec()).collect();
        Self::from_generators_unchecked(self.field(), width, gens)
    }

    /// `{m·x : x ∈ self}`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        let gens = self
            .basis
            .row_vectors()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.field(), m.rows(), &gens)
    }

    /// `{x : m·x ∈ self}`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: m.rows() });
        }
        Ok(self.annihilator().mul(m)?.kernel())
    }

    /// Vectors from the canonical basis of `sup` that extend `self` to a basis of `sup`,
    /// taken greedily in row order.
    pub fn complement_in(&self, sup: &Subspace) -> Result<Vec<Vector>> {
        self.check(sup)?;
        if !self.is_subset_of(sup) {
            return Err(Error::NotASubspace);
        }
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in sup.basis.row_vectors() {
            if acc.dim() == sup.dim() {
                break;
            }
            if !acc.contains(v) {
                out.push(v.to_vec());
                acc = acc.sum(&Subspace::span(self.field(), self.ambient, &[v.to_vec()])?)?;
            }
        }
        Ok(out)
    }

    /// Every subspace of GF(p)^ambient, enumerated through their RREF bases.
    pub fn enumerate_all(field: FieldTag, ambient: usize) -> Result<Vec<Subspace>> {
        let FieldTag::Gf(p) = field else {
            return Err(Error::Infeasible(format!("subspace enumeration needs a finite field, got {field}")));
        };
        let mut out = Vec::new();
        for k in 0..=ambient {
            for pivots in combinations(ambient, k) {
                // free slots: row i, column j > pivots[i], j not a pivot
                let slots: Vec<(usize, usize)> = (0..k)
                    .flat_map(|i| {
                        let pivots = &pivots;
                        (pivots[i] + 1..ambient).filter(move |j| !pivots.contains(j)).map(move |j| (i, j))
                    })
                    .collect();
                let count = (p as u64).checked_pow(slots.len() as u32).ok_or_else(|| {
                    Error::Infeasible(format!("too many subspaces of GF({p})^{ambient}"))
                })?;
                for code in 0..count {
                    let mut m = Matrix::zeros(field, k, ambient);
                    for (i, &c) in pivots.iter().enumerate() {
                        m.set(i, c, field.one());
                    }
                    let mut rest = code;
                    for &(i, j) in &slots {
                        m.set(i, j, field.from_i64((rest % p as u64) as i64));
                        rest /= p as u64;
                    }
                    out.push(Subspace { ambient, basis: m, pivots: pivots.clone() });
                }
            }
        }
        Ok(out)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.basis.to_strings()
    }
}

/// `dim v − dim u` for `u ⊆ v`.
pub fn quotient_dim(v: &Subspace, u: &Subspace) -> Result<usize> {
    v.check(u)?;
    if !u.is_subset_of(v) {
        return Err(Error::NotASubspace);
    }
    Ok(v.dim() - u.dim())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Q;

    fn e(n: usize, i: usize) -> Vector {
        let mut v = vec![Q.zero(); n];
        v[i] = Q.one();
        v
    }

    fn v(xs: &[i64]) -> Vector {
        Matrix::vec_i64(Q, xs)
    }

    #[test]
    fn span_examples() {
        let s = Subspace::span(Q, 2, &[v(&[1, 0]), v(&[2, 0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s, Subspace::span(Q, 2, &[e(2, 0)]).unwrap());
        assert!(Subspace::span(Q, 2, &[]).unwrap().is_zero());
        assert!(Subspace::span(Q, 2, &[v(&[1, 0]), v(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn canonical_form_is_generator_independent() {
        let a = Subspace::span(Q, 3, &[v(&[1, 2, 3]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(Q, 3, &[v(&[1, 3, 4]), v(&[2, 5, 7]), v(&[0, -2, -2])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn intersections() {
        let x = Subspace::span(Q, 2, &[e(2, 0)]).unwrap();
        let y = Subspace::span(Q, 2, &[e(2, 1)]).unwrap();
        assert!(x.intersect(&y).unwrap().is_zero());
        assert_eq!(x.intersect(&x).unwrap(), x);

        let u = Subspace::span(Q, 3, &[e(3, 0), e(3, 1)]).unwrap();
        let w = Subspace::span(Q, 3, &[e(3, 1), e(3, 2)]).unwrap();
        assert_eq!(u.intersect(&w).unwrap(), Subspace::span(Q, 3, &[e(3, 1)]).unwrap());
        assert!(u.intersect(&Subspace::full(Q, 4)).is_err());
    }

    #[test]
    fn quotient_dims() {
        let x = Subspace::span(Q, 2, &[e(2, 0)]).unwrap();
        assert_eq!(quotient_dim(&Subspace::full(Q, 2), &x).unwrap(), 1);
        assert_eq!(quotient_dim(&x, &x).unwrap(), 0);
        let y = Subspace::span(Q, 2, &[e(2, 1)]).unwrap();
        assert!(matches!(quotient_dim(&x, &y), Err(Error::NotASubspace)));
    }

    #[test]
    fn coordinates_reconstruct() {
        let s = Subspace::span(Q, 3, &[v(&[1, 2, 3]), v(&[0, 1, 1])]).unwrap();
        let x = v(&[2, 7, 9]);
        let c = s.coordinates(&x).unwrap();
        let rebuilt: Vector = (0..3)
            .map(|j| {
                (0..2).fold(Q.zero(), |acc, i| &acc + &(&c[i] * s.basis().get(i, j)))
            })
            .collect();
        assert_eq!(rebuilt, x);
        assert!(s.coordinates(&v(&[0, 0, 1])).is_none());
    }

    #[test]
    fn image_and_preimage() {
        let n2 = Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]);
        let full = Subspace::full(Q, 2);
        assert_eq!(full.image(&n2).unwrap(), Subspace::span(Q, 2, &[e(2, 0)]).unwrap());
        let zero = Subspace::zero(Q, 2);
        assert_eq!(zero.preimage(&n2).unwrap(), n2.kernel());
    }

    #[test]
    fn complement_extends_to_superspace() {
        let sub = Subspace::span(Q, 3, &[v(&[1, 1, 0])]).unwrap();
        let comp = sub.complement_in(&Subspace::full(Q, 3)).unwrap();
        assert_eq!(comp.len(), 2);
        let all = sub.sum(&Subspace::span(Q, 3, &comp).unwrap()).unwrap();
        assert!(all.is_full());
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        // subspaces of GF(2)^3: 1 + 7 + 7 + 1; of GF(3)^2: 1 + 4 + 1
        assert_eq!(Subspace::enumerate_all(FieldTag::Gf(2), 3).unwrap().len(), 16);
        assert_eq!(Subspace::enumerate_all(FieldTag::Gf(3), 2).unwrap().len(), 6);
        let all = Subspace::enumerate_all(FieldTag::Gf(2), 4).unwrap();
        assert_eq!(all.len(), 67);
        for s in &all {
            assert_eq!(&Subspace::row_space(s.basis()), s, "enumerated bases are canonical");
        }
        assert!(Subspace::enumerate_all(Q, 2).is_err());
    }
}
