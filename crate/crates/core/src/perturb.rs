//! Finite-dimensional perturbations of linear relations: the perturbation order, the
//! singular-chain defect `s_n`, paths of one-dimensional steps and bound checks.

use serde::{Deserialize, Serialize};

use crate::chains::{chainspace_quotient_dim, has_singular_chain};
use crate::fieldkit::{FieldTag, Subspace, Vector};
use crate::relation::{LinearRelation, PowerSpaces};
use crate::{Error, Result};

/// `max(dim a/(a∩b), dim b/(a∩b))`.
pub fn perturbation_order(a: &LinearRelation, b: &LinearRelation) -> Result<usize> {
    let c = a.intersect(b)?;
    Ok((a.dim() - c.dim()).max(b.dim() - c.dim()))
}

/// `K = N(C) ∩ R(C^n)` and `mul(C^n)` for `C = a ∩ b`, plus `mul(a^n)`.
struct DefectSpaces {
    k: Subspace,
    mul_a: Subspace,
    mul_c: Subspace,
}

fn defect_spaces(a: &PowerSpaces, c: &PowerSpaces, n: usize) -> DefectSpaces {
    let k = c.ker[1].intersect(&c.ran[n]).expect("same ambient");
    DefectSpaces { k, mul_a: a.mul[n].clone(), mul_c: c.mul[n].clone() }
}

fn defect_closed_form(s: &DefectSpaces) -> usize {
    let big = s.k.intersect(&s.mul_a).expect("same ambient").dim();
    let small = s.k.intersect(&s.mul_c).expect("same ambient").dim();
    big - small
}

/// `s_n(a, b)`: the largest `dim(𝓛 ∩ mul a^n)` over subspaces `𝓛` of `K = N(C) ∩ R(C^n)`,
/// `C = a ∩ b`, meeting `mul C^n` trivially.
///
/// Since `mul C^n ⊆ mul a^n`, any admissible `𝓛` meets `K ∩ mul a^n` in a space
/// complementary to `K ∩ mul C^n`, and such a complement is itself admissible, so the
/// maximum is `dim(K ∩ mul a^n) − dim(K ∩ mul C^n)`.
pub fn s_n(a: &LinearRelation, b: &LinearRelation, n: usize) -> Result<usize> {
    if n == 0 {
        return Ok(0);
    }
    let c = a.intersect(b)?;
    Ok(defect_closed_form(&defect_spaces(&a.power_spaces(n), &c.power_spaces(n), n)))
}

/// Largest field and dimension of `K` accepted by [`s_n_oracle`].
pub const ORACLE_MAX_PRIME: u32 = 3;
pub const ORACLE_MAX_DIM: usize = 4;

/// `s_n(a, b)` by enumerating every subspace of `K` over a small prime field.
pub fn s_n_oracle(a: &LinearRelation, b: &LinearRelation, n: usize) -> Result<usize> {
    let field = a.field();
    match field {
        FieldTag::Gf(p) if p <= ORACLE_MAX_PRIME => {}
        _ => return Err(Error::Infeasible(format!("subspace enumeration over {field} is not supported"))),
    }
    let c = a.intersect(b)?;
    let s = defect_spaces(&a.power_spaces(n.max(1)), &c.power_spaces(n.max(1)), n);
    oracle_max(field, &s)
}

fn oracle_max(field: FieldTag, s: &DefectSpaces) -> Result<usize> {
    let k = s.k.dim();
    if k > ORACLE_MAX_DIM {
        return Err(Error::Infeasible(format!("dim K = {k} exceeds {ORACLE_MAX_DIM}")));
    }
    let basis = s.k.vectors();
    let mut best = 0;
    for coords in Subspace::enumerate_all(field, k)? {
        let gens: Vec<Vector> = coords
            .vectors()
            .iter()
            .map(|c| {
                let mut v = vec![field.zero(); s.k.ambient()];
                for (ci, bi) in c.iter().zip(&basis) {
                    for (vj, bj) in v.iter_mut().zip(bi) {
                        *vj = &*vj + &(ci * bj);
                    }
                }
                v
            })
            .collect();
        let l = Subspace::span(field, s.k.ambient(), &gens)?;
        if l.intersect(&s.mul_c)?.is_zero() {
            best = best.max(l.intersect(&s.mul_a)?.dim());
        }
    }
    Ok(best)
}

/// `a = C_0, C_1, …, C_p = b` with consecutive relations at most one-dimensional
/// perturbations of each other.
///
/// With `I = a ∩ b`, `a = I ⊕ span{f_1..f_p}` and `b = I ⊕ span{g_1..g_p}` (the shorter
/// list padded with zeros), `C_k = I ⊕ span{f_1..f_{p−k}, g_{p−k+1}..g_p}`. The `f` and `g`
/// are the first canonical basis vectors of `a` and `b` not already spanned.
pub fn decompose_path(a: &LinearRelation, b: &LinearRelation) -> Result<Vec<LinearRelation>> {
    let i = a.intersect(b)?;
    let f = i.space().complement_in(a.space())?;
    let g = i.space().complement_in(b.space())?;
    let p = f.len().max(g.len());
    if p == 0 {
        return Ok(vec![a.clone()]);
    }
    let mut path = vec![a.clone()];
    for k in 1..p {
        let mut gens: Vec<Vector> = i.space().vectors();
        gens.extend(f.iter().take(p - k).cloned());
        gens.extend(g.iter().enumerate().filter(|(idx, _)| *idx >= p - k).map(|(_, v)| v.clone()));
        path.push(LinearRelation::new(Subspace::span(a.field(), 2 * a.d(), &gens)?)?);
    }
    path.push(b.clone());
    Ok(path)
}

/// One evaluated inequality `lower ≤ value ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub n: usize,
    pub lower: i64,
    pub upper: i64,
    pub value: i64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(check: &str, n: usize, lower: i64, upper: i64, value: i64) -> Self {
        Verdict { check: check.to_string(), n, lower, upper, value, pass: lower <= value && value <= upper }
    }

    pub fn abs(check: &str, n: usize, bound: i64, value: i64) -> Self {
        Self::new(check, n, -bound, bound, value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbReport {
    pub order: usize,
    /// `Some(true)` when `a ⊂ b`, `Some(false)` when `b ⊂ a`, `None` otherwise.
    pub nested: Option<bool>,
    pub s_ab: Vec<usize>,
    pub s_ba: Vec<usize>,
    pub s_bracket: Vec<usize>,
    pub d_a: Vec<usize>,
    pub d_b: Vec<usize>,
    pub kernel_a: Vec<usize>,
    pub kernel_b: Vec<usize>,
    pub singular_a: bool,
    pub singular_b: bool,
    pub verdicts: Vec<Verdict>,
}

impl PerturbReport {
    pub fn violations(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }
}

/// Evaluates every applicable perturbation bound for `n = 0..=nmax`.
///
/// One-dimensional bounds apply when the order is at most 1, the order-`p` bounds
/// always, the nested variants when one relation contains the other, and the sharper
/// operator-like bounds when neither relation has a singular chain. Chain-space
/// quotients `dim S_m^x / S_m^{a∩b} ≤ m` are checked for `m = 1..=min(nmax, d)` on the
/// sides where the intersection has codimension one.
///
/// In the nested case with `a ⊂ b`, summing the per-level bounds
/// `−s_k(b,a) ≤ D_k(b) − D_k(a) ≤ 1` gives
/// `−Σ_{k<n} s_k(b,a) ≤ dim N(b^n) − dim N(a^n) ≤ n`; this upper bound `n` is attained
/// without any singular chains, so `Σ_{k<n} s_k(b,a)` alone does not bound the absolute
/// difference.
pub fn check_bounds(a: &LinearRelation, b: &LinearRelation, nmax: usize) -> Result<PerturbReport> {
    let c = a.intersect(b)?;
    let p = (a.dim() - c.dim()).max(b.dim() - c.dim());
    let (pa, pb, pc) = (a.power_spaces(nmax + 1), b.power_spaces(nmax + 1), c.power_spaces(nmax + 1));
    let s = |x: &PowerSpaces, n: usize| if n == 0 { 0 } else { defect_closed_form(&defect_spaces(x, &pc, n)) };
    let s_ab: Vec<usize> = (0..=nmax).map(|n| s(&pa, n)).collect();
    let s_ba: Vec<usize> = (0..=nmax).map(|n| s(&pb, n)).collect();
    let s_bracket: Vec<usize> = s_ab.iter().zip(&s_ba).map(|(x, y)| *x.max(y)).collect();
    let (d_a, d_b) = (pa.degrees(), pb.degrees());
    let kernel_a: Vec<usize> = pa.ker[..=nmax].iter().map(Subspace::dim).collect();
    let kernel_b: Vec<usize> = pb.ker[..=nmax].iter().map(Subspace::dim).collect();
    let (singular_a, singular_b) = (has_singular_chain(a), has_singular_chain(b));
    let nested = if p == 0 {
        None
    } else if a.is_subset_of(b) {
        Some(true)
    } else if b.is_subset_of(a) {
        Some(false)
    } else {
        None
    };

    let (pi, mut v) = (p as i64, Vec::new());
    for n in 0..=nmax {
        let ni = n as i64;
        let diff = d_b[n] as i64 - d_a[n] as i64;
        let kdiff = kernel_b[n] as i64 - kernel_a[n] as i64;
        let sum_bracket: i64 = s_bracket[..n].iter().map(|&x| x as i64).sum();

        v.push(Verdict::abs("order_p", n, (ni + 1) * pi, diff));
        v.push(Verdict::abs("order_p_kernel", n, ni * (ni + 1) / 2 * pi, kdiff));
        if p <= 1 {
            v.push(Verdict::new("defect_at_most_n", n, 0, ni, s_bracket[n] as i64));
            v.push(Verdict::new("one_dim", n, -1 - s_ba[n] as i64, 1 + s_ab[n] as i64, diff));
            v.push(Verdict::abs("one_dim_abs", n, 1 + s_bracket[n] as i64, diff));
            v.push(Verdict::abs("one_dim_kernel", n, ni + sum_bracket, kdiff));
        }
        if let Some(a_inside) = nested {
            // orient as inner ⊂ outer
            let (sign, s_outer) = if a_inside { (1, &s_ba) } else { (-1, &s_ab) };
            let (diff, kdiff) = (sign * diff, sign * kdiff);
            let sum_outer: i64 = s_outer[..n].iter().map(|&x| x as i64).sum();
            if p == 1 {
                v.push(Verdict::new("nested", n, -(s_outer[n] as i64), 1, diff));
                if n >= 1 {
                    v.push(Verdict::abs("nested_abs", n, 1.max(s_outer[n] as i64), diff));
                }
                v.push(Verdict::new("nested_kernel", n, -sum_outer, ni, kdiff));
            }
            if n >= 1 {
                v.push(Verdict::abs("order_p_nested", n, ni * pi, diff));
                v.push(Verdict::abs("order_p_nested_kernel", n, ni.max(ni * (ni - 1) / 2) * pi, kdiff));
            }
        }
        if !singular_a && !singular_b {
            v.push(Verdict::abs("chain_free", n, pi, diff));
            v.push(Verdict::abs("chain_free_kernel", n, ni * pi, kdiff));
            let core = |x: &PowerSpaces| x.ker[1].intersect(&x.ran[n]).expect("same ambient").dim() as i64;
            let (core_a, core_b) = (core(&pa), core(&pb));
            v.push(Verdict::abs("chain_free_core", n, pi, core_b - core_a));
            v.push(Verdict::new("chain_free_identity_a", n, core_a, core_a, d_a[n] as i64));
            v.push(Verdict::new("chain_free_identity_b", n, core_b, core_b, d_b[n] as i64));
        }
    }
    if p == 1 {
        for (name, outer) in [("chainspace_a", a), ("chainspace_b", b)] {
            if outer.dim() == c.dim() + 1 {
                for m in 1..=nmax.min(a.d()) {
                    let q = chainspace_quotient_dim(outer, &c, m)? as i64;
                    v.push(Verdict::new(name, m, 0, m as i64, q));
                }
            }
        }
    }
    Ok(PerturbReport {
        order: p,
        nested,
        s_ab,
        s_ba,
        s_bracket,
        d_a: d_a[..=nmax].to_vec(),
        d_b: d_b[..=nmax].to_vec(),
        kernel_a,
        kernel_b,
        singular_a,
        singular_b,
        verdicts: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldkit::Matrix;

    fn v(f: FieldTag, c: &[i64]) -> Vector {
        Matrix::vec_i64(f, c)
    }

    fn n2(f: FieldTag) -> LinearRelation {
        LinearRelation::from_graph(&Matrix::from_i64(f, &[&[0, 1], &[0, 0]])).unwrap()
    }

    fn ex31(f: FieldTag) -> LinearRelation {
        LinearRelation::from_pairs(
            f,
            2,
            &[(v(f, &[0, 0]), v(f, &[1, 0])), (v(f, &[1, 0]), v(f, &[0, 0])), (v(f, &[0, 1]), v(f, &[1, 0]))],
        )
        .unwrap()
    }

    #[test]
    fn order_of_example_pair() {
        let q = FieldTag::Q;
        assert_eq!(perturbation_order(&ex31(q), &n2(q)).unwrap(), 1);
        assert_eq!(perturbation_order(&ex31(q), &ex31(q)).unwrap(), 0);
    }

    #[test]
    fn defect_of_example_pair() {
        for f in [FieldTag::Q, FieldTag::Gf(2), FieldTag::Gf(3)] {
            let (a, b) = (ex31(f), n2(f));
            assert_eq!(s_n(&a, &b, 0).unwrap(), 0);
            assert_eq!(s_n(&a, &b, 1).unwrap(), 1);
            assert_eq!(s_n(&b, &a, 1).unwrap(), 0);
            if f != FieldTag::Q {
                assert_eq!(s_n_oracle(&a, &b, 1).unwrap(), 1);
                assert_eq!(s_n_oracle(&a, &a, 2).unwrap(), 0);
                assert_eq!(s_n_oracle(&a, &b, 0).unwrap(), 0);
            }
        }
        assert!(matches!(s_n_oracle(&ex31(FieldTag::Q), &n2(FieldTag::Q), 1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn paths_have_unit_steps() {
        let q = FieldTag::Q;
        let (a, b) = (ex31(q), n2(q));
        assert_eq!(decompose_path(&a, &a).unwrap(), vec![a.clone()]);
        assert_eq!(decompose_path(&a, &b).unwrap(), vec![a.clone(), b.clone()]);
        // two-dimensional perturbation: graph(0) vs graph(I)
        let z = LinearRelation::from_graph(&Matrix::zeros(q, 2, 2)).unwrap();
        let id = LinearRelation::identity(q, 2);
        let path = decompose_path(&z, &id).unwrap();
        assert_eq!(path.len(), 3);
        for w in path.windows(2) {
            assert!(perturbation_order(&w[0], &w[1]).unwrap() <= 1);
        }
    }

    #[test]
    fn identical_relations_pass_everything() {
        let a = ex31(FieldTag::Q);
        let r = check_bounds(&a, &a, 4).unwrap();
        assert_eq!(r.order, 0);
        assert!(r.violations().next().is_none());
    }

    #[test]
    fn nested_example_pair() {
        let q = FieldTag::Q;
        let r = check_bounds(&n2(q), &ex31(q), 3).unwrap();
        assert_eq!(r.nested, Some(true));
        assert_eq!(r.d_b[1] as i64 - r.d_a[1] as i64, -1);
        assert_eq!(r.s_ba[1], 1);
        assert!(r.violations().next().is_none(), "{:?}", r.violations().collect::<Vec<_>>());
    }

    #[test]
    fn nested_kernel_gap_can_reach_n_without_singular_chains() {
        let q = FieldTag::Q;
        let a = LinearRelation::from_pairs(q, 2, &[(v(q, &[1, 0]), v(q, &[0, 0]))]).unwrap();
        let b = LinearRelation::from_pairs(q, 2, &[(v(q, &[1, 0]), v(q, &[0, 0])), (v(q, &[0, 1]), v(q, &[0, 0]))])
            .unwrap();
        let r = check_bounds(&a, &b, 2).unwrap();
        assert!(!r.singular_a && !r.singular_b);
        assert_eq!(r.s_ba, vec![0, 0, 0]);
        assert_eq!(r.kernel_b[1] - r.kernel_a[1], 1);
        assert!(r.violations().next().is_none());
    }
}
