//! Matrix pencils `sE − F`, their relation `E^{-1}F`, and rank-one perturbations
//! `w(s u* + v*)`.

use serde::{Deserialize, Serialize};

use crate::chains::{has_singular_chain, shifted, SpectralPoint};
use crate::fieldkit::{fraction_free_echelon, FieldTag, Matrix, Poly, Scalar, Subspace, Vector};
use crate::perturb::{perturbation_order, Verdict};
use crate::relation::LinearRelation;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    e: Matrix,
    f: Matrix,
}

impl Pencil {
    pub fn new(e: Matrix, f: Matrix) -> Result<Self> {
        if !e.is_square() {
            return Err(Error::DimensionMismatch { expected: e.rows(), found: e.cols() });
        }
        if f.rows() != e.rows() || f.cols() != e.cols() {
            return Err(Error::DimensionMismatch { expected: e.rows(), found: f.rows().max(f.cols()) });
        }
        if e.field() != f.field() {
            return Err(Error::FieldMismatch { expected: e.field(), found: f.field() });
        }
        Ok(Pencil { e, f })
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn d(&self) -> usize {
        self.e.rows()
    }

    pub fn field(&self) -> FieldTag {
        self.e.field()
    }

    /// `sF − E`.
    pub fn dual(&self) -> Pencil {
        Pencil { e: self.f.clone(), f: self.e.clone() }
    }

    /// `E^{-1}F = {(x | y) : Fx = Ey}`, the kernel of `[F | −E]`.
    pub fn to_relation(&self) -> LinearRelation {
        let block = self.f.hstack(&self.e.neg()).expect("same shape");
        LinearRelation::new(block.kernel()).expect("even ambient")
    }

    pub fn profile(&self) -> Result<PencilProfile> {
        let d = self.d();
        let m = (0..d)
            .map(|i| (0..d).map(|j| Poly::linear(-self.f.get(i, j), self.e.get(i, j).clone())).collect())
            .collect();
        let ech = fraction_free_echelon(self.field(), m)?;
        Ok(PencilProfile { regular: !ech.det.is_zero(), det_poly: ech.det, rank: ech.rank, minor: ech.minor })
    }

    /// Points worth testing: infinity, the roots in the field of the determinant (of a
    /// nonzero maximal minor for singular pencils, together with 0, 1 and −1).
    pub fn eigen_candidates(&self) -> Result<Vec<SpectralPoint>> {
        let profile = self.profile()?;
        let field = self.field();
        let mut out = vec![SpectralPoint::Infinity];
        let roots = if profile.regular { profile.det_poly.roots() } else { profile.minor.roots() };
        let mut push = |s: Scalar| {
            let p = SpectralPoint::Finite(s);
            if !out.contains(&p) {
                out.push(p);
            }
        };
        roots.into_iter().for_each(&mut push);
        if !profile.regular {
            [0, 1, -1].into_iter().for_each(|k| push(field.from_i64(k)));
        }
        Ok(out)
    }

    /// `D_n = dim 𝓛_λ^{n+1} / 𝓛_λ^n` for `n = 0..=nmax`, through the relation `E^{-1}F − λ`
    /// (or `F^{-1}E` at infinity).
    pub fn jordan_dims_at(&self, at: &SpectralPoint, nmax: usize) -> Vec<usize> {
        let t = match at {
            SpectralPoint::Infinity => self.dual().to_relation(),
            finite => shifted(&self.to_relation(), finite),
        };
        t.power_spaces(nmax + 1).degrees()
    }

    /// `𝓛_λ^l` for `l = 0..=lmax`, read off the chain equations
    /// `(F − λE)x_0 = 0`, `(F − λE)x_j = E x_{j−1}` (at infinity `E x_0 = 0`,
    /// `E x_j = F x_{j−1}`) without going through relations.
    ///
    /// A chain of length `k ≤ l` padded with zeros below `x_0` solves the length-`l`
    /// system, so `𝓛_λ^l` is the span of all entries of its solutions.
    pub fn chain_spaces(&self, at: &SpectralPoint, lmax: usize) -> Vec<Subspace> {
        let (d, field) = (self.d(), self.field());
        let (lead, step) = match at {
            SpectralPoint::Finite(l) => (self.f.sub(&self.e.scale(l)).expect("same shape"), self.e.clone()),
            SpectralPoint::Infinity => (self.e.clone(), self.f.clone()),
        };
        let mut out = vec![Subspace::zero(field, d)];
        for l in 1..=lmax {
            // unknowns x_0, …, x_{l-1}
            let mut rows = Vec::new();
            for j in 0..l {
                for i in 0..d {
                    let mut row = vec![field.zero(); l * d];
                    row[j * d..(j + 1) * d].clone_from_slice(lead.row(i));
                    if j > 0 {
                        for (c, s) in step.row(i).iter().enumerate() {
                            row[(j - 1) * d + c] = -s;
                        }
                    }
                    rows.push(row);
                }
            }
            let solutions = Matrix::from_rows(field, l * d, rows).expect("row width").kernel();
            let mut span = Subspace::zero(field, d);
            for j in 0..l {
                span = span.sum(&solutions.project(j * d..(j + 1) * d)).expect("same ambient");
            }
            out.push(span);
        }
        out
    }

    /// Wong sequence of the second kind: `W_0 = {0}`, `W_{i+1} = {x : Ex ∈ F W_i}`.
    pub fn wong(&self, nmax: usize) -> Vec<Subspace> {
        let mut out = vec![Subspace::zero(self.field(), self.d())];
        for i in 0..nmax {
            let image = out[i].image(&self.f).expect("square");
            out.push(image.preimage(&self.e).expect("square"));
        }
        out
    }

    /// `(E + w u*, F + w v*)`.
    pub fn apply_perturbation(&self, q: &RankOnePencil) -> Result<Pencil> {
        if q.w.len() != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), found: q.w.len() });
        }
        let field = self.field();
        Pencil::new(
            self.e.add(&Matrix::outer(field, &q.w, &q.u))?,
            self.f.add(&Matrix::outer(field, &q.w, &q.v))?,
        )
    }

    /// Whether `N[F | −E] ⊆ N[v* | −u*]`, i.e. `v*x = u*y` whenever `Fx = Ey`.
    pub fn satisfies_inclusion(&self, q: &RankOnePencil) -> bool {
        self.to_relation()
            .pairs()
            .iter()
            .all(|(x, y)| &star(&q.v, x) - &star(&q.u, y) == self.field().zero())
    }
}

/// `a* b`.
fn star(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(b[0].field().zero(), |acc, (x, y)| &acc + &(&x.conj() * y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilProfile {
    pub det_poly: Poly,
    pub regular: bool,
    /// Largest size of a minor that is not the zero polynomial.
    pub rank: usize,
    /// One nonzero minor of size `rank`.
    pub minor: Poly,
}

impl PencilProfile {
    /// Degree left in the determinant (the minor, for singular pencils) once the linear
    /// factors of its roots in the field are divided out. Eigenvalues hiding there are never
    /// tested by [`Pencil::eigen_candidates`].
    pub fn untested_spectrum(&self) -> usize {
        let mut rest = if self.regular { self.det_poly.clone() } else { self.minor.clone() };
        let one = rest.field().one();
        for r in rest.roots() {
            let factor = Poly::linear(-&r, one.clone());
            loop {
                let (q, rem) = rest.div_rem(&factor);
                if !rem.is_zero() {
                    break;
                }
                rest = q;
            }
        }
        rest.degree().unwrap_or(0)
    }
}

/// The rank-one pencil `w(s u* + v*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOnePencil {
    u: Vector,
    v: Vector,
    w: Vector,
}

impl RankOnePencil {
    pub fn new(u: Vector, v: Vector, w: Vector) -> Result<Self> {
        let d = w.len();
        for x in [&u, &v] {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.len() });
            }
        }
        if w.iter().all(Scalar::is_zero) {
            return Err(Error::Precondition("w must be nonzero".into()));
        }
        if u.iter().chain(&v).all(Scalar::is_zero) {
            return Err(Error::Precondition("u and v must not both vanish".into()));
        }
        Ok(RankOnePencil { u, v, w })
    }

    pub fn u(&self) -> &Vector {
        &self.u
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    pub fn w(&self) -> &Vector {
        &self.w
    }
}

/// One bound evaluated at a spectral point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointVerdict {
    pub at: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDims {
    pub at: String,
    pub before: Vec<usize>,
    pub after: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub regular_before: bool,
    pub regular_after: bool,
    pub inclusion: bool,
    pub points: Vec<PointDims>,
    pub wong_before: Vec<usize>,
    pub wong_after: Vec<usize>,
    /// Summed [`PencilProfile::untested_spectrum`] of the two pencils.
    pub untested_spectrum: usize,
    pub verdicts: Vec<PointVerdict>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &PointVerdict> {
        self.verdicts.iter().filter(|v| !v.verdict.pass)
    }
}

/// Two-sided bound on `D_n(after) − D_n(before)` by regularity of the two pencils.
pub fn case_bounds(regular_before: bool, regular_after: bool, n: usize) -> (&'static str, i64, i64) {
    let n = n as i64;
    match (regular_before, regular_after) {
        (true, true) => ("regular_regular", -1, 1),
        (true, false) => ("regular_singular", -1 - n, 1),
        (false, true) => ("singular_regular", -1, n + 1),
        (false, false) => ("singular_singular", -1 - n, n + 1),
    }
}

/// Sharper bounds when `N[F | −E] ⊆ N[v* | −u*]`, valid for `n ≥ 1` and at least one
/// singular pencil.
pub fn refined_bounds(regular_before: bool, regular_after: bool, n: usize) -> Option<(&'static str, i64, i64)> {
    let n = n as i64;
    match (regular_before, regular_after) {
        (true, true) => None,
        (true, false) => Some(("refined_regular_singular", -n, 1)),
        (false, true) => Some(("refined_singular_regular", -1, n)),
        (false, false) => Some(("refined_singular_singular", -n, n)),
    }
}

/// Checks the rank-one pencil bounds at every point of `points` (infinity and the
/// candidate eigenvalues of both pencils are added) for `n = 0..=nmax`.
pub fn pencil_bound_report(
    p: &Pencil,
    q: &RankOnePencil,
    points: &[SpectralPoint],
    nmax: usize,
) -> Result<BoundReport> {
    let after = p.apply_perturbation(q)?;
    let (profile, profile_after) = (p.profile()?, after.profile()?);
    let (regular_before, regular_after) = (profile.regular, profile_after.regular);
    let untested_spectrum = profile.untested_spectrum() + profile_after.untested_spectrum();
    let inclusion = p.satisfies_inclusion(q);

    let mut at_points: Vec<SpectralPoint> = Vec::new();
    for x in p.eigen_candidates()?.into_iter().chain(after.eigen_candidates()?).chain(points.iter().cloned()) {
        if !at_points.contains(&x) {
            at_points.push(x);
        }
    }

    let mut verdicts = Vec::new();
    let mut push = |at: &str, v: Verdict| verdicts.push(PointVerdict { at: at.to_string(), verdict: v });

    let (rel, rel_after) = (p.to_relation(), after.to_relation());
    let order = perturbation_order(&rel, &rel_after)? as i64;
    push("-", Verdict::new("rank_one_relation_order", 0, 0, 1, order));
    let dual_order = perturbation_order(&p.dual().to_relation(), &after.dual().to_relation())? as i64;
    push("-", Verdict::new("rank_one_dual_order", 0, 0, 1, dual_order));
    if regular_before {
        push("-", Verdict::new("regular_chain_free", 0, 0, 0, has_singular_chain(&rel) as i64));
    }
    if regular_after {
        push("-", Verdict::new("regular_chain_free_after", 0, 0, 0, has_singular_chain(&rel_after) as i64));
    }
    if inclusion {
        push("-", Verdict::new("relation_inclusion", 0, 1, 1, rel.is_subset_of(&rel_after) as i64));
    }

    let mut dims = Vec::new();
    for x in &at_points {
        let at = x.to_string();
        let (before, later) = (p.jordan_dims_at(x, nmax), after.jordan_dims_at(x, nmax));
        for n in 0..=nmax {
            let diff = later[n] as i64 - before[n] as i64;
            let (name, lo, hi) = case_bounds(regular_before, regular_after, n);
            push(&at, Verdict::new(name, n, lo, hi, diff));
            if inclusion && n >= 1 {
                if let Some((name, lo, hi)) = refined_bounds(regular_before, regular_after, n) {
                    push(&at, Verdict::new(name, n, lo, hi, diff));
                }
            }
        }
        dims.push(PointDims { at, before, after: later });
    }

    let dim_seq = |w: Vec<Subspace>| w.iter().map(Subspace::dim).collect::<Vec<_>>();
    let (wong_before, wong_after) = (dim_seq(p.wong(nmax + 1)), dim_seq(after.wong(nmax + 1)));
    for n in 0..=nmax {
        let diff = (wong_after[n + 1] - wong_after[n]) as i64 - (wong_before[n + 1] - wong_before[n]) as i64;
        let (name, lo, hi) = case_bounds(regular_before, regular_after, n);
        push("wong", Verdict::new(name, n, lo, hi, diff));
    }

    Ok(BoundReport {
        regular_before,
        regular_after,
        inclusion,
        points: dims,
        wong_before,
        wong_after,
        untested_spectrum,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldTag = FieldTag::Q;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(Q, rows)
    }

    fn v(c: &[i64]) -> Vector {
        Matrix::vec_i64(Q, c)
    }

    fn n2_pencil() -> Pencil {
        Pencil::new(Matrix::identity(Q, 2), m(&[&[0, 1], &[0, 0]])).unwrap()
    }

    fn sing() -> Pencil {
        Pencil::new(m(&[&[1, 0], &[0, 0]]), m(&[&[1, 0], &[0, 0]])).unwrap()
    }

    fn wong_pencil() -> Pencil {
        Pencil::new(m(&[&[0, 1], &[0, 0]]), Matrix::identity(Q, 2)).unwrap()
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::new(Q, c.iter().map(|&x| Q.from_i64(x)).collect())
    }

    #[test]
    fn profiles() {
        let p = n2_pencil().profile().unwrap();
        assert_eq!((p.det_poly, p.regular, p.rank), (poly(&[0, 0, 1]), true, 2));
        let p = sing().profile().unwrap();
        assert!(!p.regular && p.det_poly.is_zero());
        assert_eq!(p.rank, 1);
        assert_eq!(p.minor, poly(&[-1, 1]));
        let id = Pencil::new(Matrix::identity(Q, 2), Matrix::identity(Q, 2)).unwrap();
        assert_eq!(id.profile().unwrap().det_poly, poly(&[1, -2, 1]));
        // s N2 − I has determinant 1
        assert_eq!(n2_pencil().dual().profile().unwrap().det_poly, poly(&[1]));
    }

    #[test]
    fn untested_spectrum_counts_irrational_eigenvalues() {
        assert_eq!(n2_pencil().profile().unwrap().untested_spectrum(), 0);
        assert_eq!(sing().profile().unwrap().untested_spectrum(), 0);
        // det = (s − 2)(s² − 2)
        let f = m(&[&[2, 0, 0], &[0, 0, 2], &[0, 1, 0]]);
        let p = Pencil::new(Matrix::identity(Q, 3), f).unwrap();
        assert_eq!(p.profile().unwrap().untested_spectrum(), 2);
        let rot = [[0, -1], [1, 0]];
        let over = |field: FieldTag| {
            let f = Matrix::from_i64(field, &[&rot[0], &rot[1]]);
            Pencil::new(Matrix::identity(field, 2), f).unwrap().profile().unwrap().untested_spectrum()
        };
        assert_eq!(over(Q), 2);
        assert_eq!(over(FieldTag::Qi), 0);
        assert_eq!(over(FieldTag::Gf(5)), 0);
        assert_eq!(over(FieldTag::Gf(3)), 2);
    }

    #[test]
    fn bridge_to_relations() {
        let f = m(&[&[1, 2], &[3, 4]]);
        let p = Pencil::new(Matrix::identity(Q, 2), f.clone()).unwrap();
        assert_eq!(p.to_relation(), LinearRelation::from_graph(&f).unwrap());
        let r = sing().to_relation();
        assert_eq!(r.dim(), 3);
        assert!(r.contains_pair(&v(&[1, 5]), &v(&[1, -2])));
        assert!(!r.contains_pair(&v(&[1, 0]), &v(&[0, 0])));
        let e_graph = LinearRelation::from_graph(p.e()).unwrap();
        let f_graph = LinearRelation::from_graph(p.f()).unwrap();
        assert_eq!(p.to_relation(), e_graph.inverse().compose(&f_graph).unwrap());
        assert_eq!(wong_pencil().dual().to_relation(), LinearRelation::from_graph(wong_pencil().e()).unwrap());
        assert_eq!(n2_pencil().dual().dual(), n2_pencil());
    }

    #[test]
    fn jordan_dimensions() {
        let zero = SpectralPoint::Finite(Q.zero());
        assert_eq!(n2_pencil().jordan_dims_at(&zero, 3), vec![1, 1, 0, 0]);
        assert_eq!(n2_pencil().jordan_dims_at(&SpectralPoint::Infinity, 2), vec![0, 0, 0]);
        // 𝒜(1) = 0 for E = F = diag(1, 0): every vector is an eigenvector
        let one = SpectralPoint::Finite(Q.one());
        assert_eq!(sing().jordan_dims_at(&one, 2)[0], 2);
        for p in [n2_pencil(), sing(), wong_pencil()] {
            for at in [zero.clone(), one.clone(), SpectralPoint::Infinity] {
                let spaces = p.chain_spaces(&at, 4);
                let dims: Vec<usize> = spaces.windows(2).map(|w| w[1].dim() - w[0].dim()).collect();
                assert_eq!(dims, p.jordan_dims_at(&at, 3), "{p:?} at {at}");
            }
        }
    }

    #[test]
    fn wong_sequences() {
        let w = wong_pencil().wong(3);
        assert_eq!(w[1], Subspace::span(Q, 2, &[v(&[1, 0])]).unwrap());
        assert!(w[2].is_full() && w[3].is_full());
        let p = Pencil::new(m(&[&[2, 1], &[0, 3]]), Matrix::identity(Q, 2)).unwrap();
        assert!(p.wong(3).iter().all(Subspace::is_zero));
        let w = sing().wong(2);
        assert_eq!(w[1], Subspace::span(Q, 2, &[v(&[0, 1])]).unwrap());
        assert_eq!(w[2], w[1]);
    }

    #[test]
    fn rank_one_perturbation_of_nilpotent_pencil() {
        let q = RankOnePencil::new(v(&[1, 0]), v(&[0, 0]), v(&[0, 1])).unwrap();
        let p = n2_pencil().apply_perturbation(&q).unwrap();
        assert_eq!(p.e(), &m(&[&[1, 0], &[1, 1]]));
        assert_eq!(p.f(), &m(&[&[0, 1], &[0, 0]]));
        assert_eq!(p.profile().unwrap().det_poly, poly(&[0, 1, 1]));
        let r = pencil_bound_report(&n2_pencil(), &q, &[], 3).unwrap();
        let at0 = r.points.iter().find(|d| d.at == "0").unwrap();
        assert_eq!(at0.after[1] as i64 - at0.before[1] as i64, -1);
        assert!(r.violations().next().is_none());
    }

    #[test]
    fn inclusion_condition() {
        let q = RankOnePencil::new(v(&[1, 0]), v(&[1, 0]), v(&[1, 0])).unwrap();
        assert!(!n2_pencil().satisfies_inclusion(&q));
        // u* = c*E, v* = c*F annihilate every (x | y) with Fx = Ey
        let p = n2_pencil();
        let c = v(&[2, -1]);
        let u = p.e().transpose().mul_vec(&c).unwrap();
        let w = p.f().transpose().mul_vec(&c).unwrap();
        let q = RankOnePencil::new(u, w, v(&[1, 1])).unwrap();
        assert!(p.satisfies_inclusion(&q));
        let after = p.apply_perturbation(&q).unwrap();
        assert!(p.to_relation().is_subset_of(&after.to_relation()));
        // d = 1, E = F = 0: every pair lies in the relation
        let z = Pencil::new(Matrix::zeros(Q, 1, 1), Matrix::zeros(Q, 1, 1)).unwrap();
        let q = RankOnePencil::new(v(&[1]), v(&[0]), v(&[1])).unwrap();
        assert!(!z.satisfies_inclusion(&q));
        assert!(RankOnePencil::new(v(&[0]), v(&[0]), v(&[1])).is_err());
        assert!(RankOnePencil::new(v(&[1]), v(&[0]), v(&[0])).is_err());
    }

    #[test]
    fn singular_pencil_made_regular() {
        // E = F = diag(1, 0) plus w = e2, u = e2, v = 0 gives sI − diag(1, 0)
        let q = RankOnePencil::new(v(&[0, 1]), v(&[0, 0]), v(&[0, 1])).unwrap();
        let r = pencil_bound_report(&sing(), &q, &[SpectralPoint::Finite(Q.one())], 3).unwrap();
        assert!(!r.regular_before && r.regular_after);
        assert!(r.violations().next().is_none());
        assert!(r.verdicts.iter().any(|v| v.verdict.check == "singular_regular"));
    }
}
