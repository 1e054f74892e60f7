//! Named regression instances.

use crate::chains::{classify_chain, ChainTuple, SpectralPoint};
use crate::fieldkit::{FieldTag, Matrix, Scalar, Subspace, Vector};
use crate::pencil::{pencil_bound_report, Pencil, RankOnePencil};
use crate::perturb::{check_bounds, perturbation_order, Verdict};
use crate::relation::LinearRelation;
use crate::{Error, Result};

const Q: FieldTag = FieldTag::Q;

/// Largest SHARP size run by default; bigger ones must be asked for explicitly.
pub const SHARP_DEFAULT_MAX: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    Relation(LinearRelation),
    Pair { a: LinearRelation, b: LinearRelation },
    Pencil(Pencil),
    GraphAndPencil { graph: LinearRelation, pencil: Pencil },
}

pub const NAMES: [&str; 6] = ["EX31", "ID", "N2", "SHARP", "SING", "WONG"];

pub fn fixture(name: &str, n: Option<usize>) -> Result<Fixture> {
    match name.to_ascii_uppercase().as_str() {
        "EX31" => Ok(Fixture::Relation(ex31())),
        "ID" => Ok(Fixture::Relation(LinearRelation::identity(Q, 2))),
        "N2" => Ok(Fixture::GraphAndPencil { graph: n2_graph(), pencil: n2_pencil() }),
        "SHARP" => {
            let (a, b) = sharp(n.unwrap_or(2))?;
            Ok(Fixture::Pair { a, b })
        }
        "SING" => Ok(Fixture::Pencil(sing())),
        "WONG" => Ok(Fixture::Pencil(wong())),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

fn unit(d: usize, i: usize) -> Vector {
    let mut v = vec![Q.zero(); d];
    v[i] = Q.one();
    v
}

pub fn n2_matrix() -> Matrix {
    Matrix::from_i64(Q, &[&[0, 1], &[0, 0]])
}

/// `span{(0|e1), (e1|0), (e2|e1)}` in ℚ².
pub fn ex31() -> LinearRelation {
    let (e1, e2, z) = (unit(2, 0), unit(2, 1), vec![Q.zero(); 2]);
    LinearRelation::from_pairs(Q, 2, &[(z.clone(), e1.clone()), (e1.clone(), z), (e2, e1)]).expect("fixed shape")
}

pub fn n2_graph() -> LinearRelation {
    LinearRelation::from_graph(&n2_matrix()).expect("square")
}

/// `sI − N2`.
pub fn n2_pencil() -> Pencil {
    Pencil::new(Matrix::identity(Q, 2), n2_matrix()).expect("fixed shape")
}

/// `E = F = diag(1, 0)`.
pub fn sing() -> Pencil {
    let m = Matrix::from_i64(Q, &[&[1, 0], &[0, 0]]);
    Pencil::new(m.clone(), m).expect("fixed shape")
}

/// `E = N2`, `F = I`.
pub fn wong() -> Pencil {
    Pencil::new(n2_matrix(), Matrix::identity(Q, 2)).expect("fixed shape")
}

/// Pair of one-dimensional perturbations of each other with
/// `dim N(A^{n+1})/N(A^n) − dim N(B^{n+1})/N(B^n) = n + 1`.
///
/// Ambient space ℚ^{(n+1)²} with basis `x_{i,j}` (`i = 1..n`, `j = 0..n`) followed by
/// `y_1..y_{n+1}`. For `n = 2` this is the nine-vector construction with `x_j = x_{1,j}`,
/// `z_j = x_{2,j}`.
pub fn sharp(n: usize) -> Result<(LinearRelation, LinearRelation)> {
    if n < 2 {
        return Err(Error::Precondition(format!("SHARP needs n >= 2, got {n}")));
    }
    if n == 2 {
        return Ok(sharp_two());
    }
    Ok(sharp_general(n))
}

type Combo = Vec<(usize, i64)>;

fn relation_from(d: usize, pairs: &[(Combo, Combo)]) -> LinearRelation {
    let vec = |c: &Combo| {
        let mut v: Vec<Scalar> = vec![Q.zero(); d];
        for &(i, k) in c {
            v[i] = &v[i] + &Q.from_i64(k);
        }
        v
    };
    let pairs: Vec<(Vector, Vector)> = pairs.iter().map(|(x, y)| (vec(x), vec(y))).collect();
    LinearRelation::from_pairs(Q, d, &pairs).expect("fixed shape")
}

fn sharp_two() -> (LinearRelation, LinearRelation) {
    let (x0, x1, x2, z0, z1, z2, y1, y2, y3) = (0, 1, 2, 3, 4, 5, 6, 7, 8);
    let one = |i: usize| vec![(i, 1)];
    let zero = Vec::new;
    let shared = vec![
        (one(x2), one(x1)),
        (one(x1), one(x0)),
        (one(x0), zero()),
        (one(z2), one(z1)),
        (one(z1), one(z0)),
        (one(z0), zero()),
        (vec![(x2, 1), (y2, -1)], one(y1)),
        (one(y1), zero()),
        (one(z2), one(y2)),
    ];
    let mut a = shared.clone();
    a.push((one(y3), vec![(x2, 1), (y2, -1)]));
    let mut b = shared;
    b.push((one(y2), zero()));
    (relation_from(9, &a), relation_from(9, &b))
}

pub(crate) fn sharp_general(n: usize) -> (LinearRelation, LinearRelation) {
    let d = (n + 1) * (n + 1);
    let x = |i: usize, j: usize| (i - 1) * (n + 1) + j;
    let y = |l: usize| n * (n + 1) + l - 1;
    let one = |i: usize| vec![(i, 1)];
    let diff = |i: usize, j: usize| vec![(i, 1), (j, -1)];

    let mut shared = Vec::new();
    for k in 1..=n {
        for j in 1..=n {
            shared.push((one(x(k, j)), one(x(k, j - 1))));
        }
        shared.push((one(x(k, 0)), Vec::new()));
    }
    for k in 1..=n - 2 {
        shared.push((diff(x(k, n), y(n - k + 1)), diff(x(k + 1, n), y(n - k))));
    }
    shared.push((diff(x(n - 1, n), y(2)), one(y(1))));
    shared.push((one(y(1)), Vec::new()));
    shared.push((one(x(n, n)), one(y(n))));
    for l in 3..=n {
        shared.push((one(y(l)), one(y(l - 1))));
    }
    let mut a = shared.clone();
    a.push((one(y(n + 1)), diff(x(1, n), y(n))));
    let mut b = shared;
    b.push((one(y(2)), Vec::new()));
    (relation_from(d, &a), relation_from(d, &b))
}

/// `dim N(A^k)` and `dim N(B^k)` for `k = 0..=n+1`.
pub const SHARP_KERNEL_TABLES: [(usize, &[usize], &[usize]); 4] = [
    (2, &[0, 3, 6, 9], &[0, 4, 8, 8]),
    (3, &[0, 4, 8, 12, 16], &[0, 5, 10, 15, 15]),
    (4, &[0, 5, 10, 15, 20, 25], &[0, 6, 12, 18, 24, 24]),
    (5, &[0, 6, 12, 18, 24, 30, 36], &[0, 7, 14, 21, 28, 35, 35]),
];
/// `dim N(A^k)`, `k = 0..=3`, for EX31.
pub const EX31_KERNEL_TABLE: [usize; 4] = [0, 2, 2, 2];
/// `dim W_k`, `k = 0..=3`, for WONG.
pub const WONG_TABLE: [usize; 4] = [0, 1, 2, 2];

/// Name, ambient dimension and verdicts of one regression.
pub type Regression = (String, usize, Vec<(Option<String>, Verdict)>);

fn exact(check: &str, n: usize, expected: i64, value: i64) -> (Option<String>, Verdict) {
    (None, Verdict::new(check, n, expected, expected, value))
}

fn holds(check: &str, n: usize, value: bool) -> (Option<String>, Verdict) {
    exact(check, n, 1, value as i64)
}

fn table(check: &str, expected: &[usize], got: &[usize]) -> Vec<(Option<String>, Verdict)> {
    expected.iter().zip(got).enumerate().map(|(k, (&e, &g))| exact(check, k, e as i64, g as i64)).collect()
}

/// The fixture regressions: exact dimension tables and chain classes, plus a clean
/// bound report for each perturbation fixture.
pub fn regressions() -> Vec<Result<Regression>> {
    let mut out: Vec<Result<Regression>> = vec![ex31_regression(), wong_regression(), sing_regression(), n2_regression()];
    out.extend(SHARP_KERNEL_TABLES.iter().map(|&(n, ka, kb)| sharp_regression(n, ka, kb)));
    out
}

fn kernel_dims(t: &LinearRelation, kmax: usize) -> Vec<usize> {
    t.power_spaces(kmax).ker.iter().map(Subspace::dim).collect()
}

fn ex31_regression() -> Result<Regression> {
    let a = ex31();
    let at0 = SpectralPoint::Finite(Q.zero());
    let mut v = table("kernel_dims", &EX31_KERNEL_TABLE, &kernel_dims(&a, 3));
    v.push(holds("ker_is_everything", 1, a.ker().is_full()));
    v.push(holds("mul_is_e1", 1, a.mul() == Subspace::span(Q, 2, &[unit(2, 0)])?));
    let singular = classify_chain(&a, &ChainTuple::new(vec![vec![Q.zero(); 2], unit(2, 0)])?, &at0)?;
    v.push(holds("chain_0_e1_singular", 1, singular.is_singular));
    let qj = classify_chain(&a, &ChainTuple::new(vec![unit(2, 1), unit(2, 0)])?, &at0)?;
    v.push(holds("chain_e2_e1_quasi_jordan_not_jordan", 1, qj.is_quasi_jordan && !qj.is_jordan));
    Ok(("EX31".into(), 2, v))
}

fn wong_regression() -> Result<Regression> {
    let p = wong();
    let w: Vec<usize> = p.wong(3).iter().map(Subspace::dim).collect();
    let mut v = table("wong_dims", &WONG_TABLE, &w);
    v.push(holds("w1_is_e1", 1, p.wong(1)[1] == Subspace::span(Q, 2, &[unit(2, 0)])?));
    let dual = kernel_dims(&p.dual().to_relation(), 3);
    v.extend(table("wong_identity", &WONG_TABLE, &dual));
    Ok(("WONG".into(), 2, v))
}

fn sing_regression() -> Result<Regression> {
    let p = sing();
    let profile = p.profile()?;
    let mut v = vec![holds("singular", 0, !profile.regular), exact("rank", 0, 1, profile.rank as i64)];
    v.push(exact("relation_dim", 0, 3, p.to_relation().dim() as i64));
    // E + e2 e2*, F: the pencil sI − diag(1, 0)
    let q = RankOnePencil::new(unit(2, 1), vec![Q.zero(); 2], unit(2, 1))?;
    let report = pencil_bound_report(&p, &q, &[SpectralPoint::Finite(Q.one())], 3)?;
    v.push(holds("made_regular", 0, report.regular_after));
    v.extend(report.verdicts.into_iter().map(|pv| (Some(pv.at), pv.verdict)));
    Ok(("SING".into(), 2, v))
}

fn n2_regression() -> Result<Regression> {
    let p = n2_pencil();
    let at0 = SpectralPoint::Finite(Q.zero());
    let mut v = table("jordan_dims_at_0", &[1, 1, 0, 0], &p.jordan_dims_at(&at0, 3));
    v.push(holds("graph_matches_pencil", 0, p.to_relation() == n2_graph()));
    // w = e2, u = e1, v = 0 splits the double eigenvalue 0 into 0 and −1
    let q = RankOnePencil::new(unit(2, 0), vec![Q.zero(); 2], unit(2, 1))?;
    let after = p.apply_perturbation(&q)?;
    v.extend(table("perturbed_jordan_dims_at_0", &[1, 0, 0, 0], &after.jordan_dims_at(&at0, 3)));
    let report = pencil_bound_report(&p, &q, &[], 3)?;
    v.extend(report.verdicts.into_iter().map(|pv| (Some(pv.at), pv.verdict)));
    let id = LinearRelation::identity(Q, 2).scale_shift(&Q.one());
    v.push(exact("identity_eigenspace_at_1", 0, 2, id.jordan_degrees(2)[0] as i64));
    Ok(("N2".into(), 2, v))
}

fn sharp_regression(n: usize, ka: &[usize], kb: &[usize]) -> Result<Regression> {
    let (a, b) = sharp(n)?;
    let (na, nb) = (kernel_dims(&a, n + 1), kernel_dims(&b, n + 1));
    let mut v = table("kernel_dims_a", ka, &na);
    v.extend(table("kernel_dims_b", kb, &nb));
    let gap = (na[n + 1] - na[n]) as i64 - (nb[n + 1] - nb[n]) as i64;
    v.push(exact("sharp_gap", n, n as i64 + 1, gap));
    v.push(exact("order", 0, 1, perturbation_order(&a, &b)? as i64));
    v.push(holds("dom_b_is_kernel_of_power", n, b.dom() == b.power_spaces(n).ker[n]));
    v.extend(check_bounds(&a, &b, n)?.verdicts.into_iter().map(|x| (None, x)));
    Ok((format!("SHARP({n})"), a.d(), v))
}
