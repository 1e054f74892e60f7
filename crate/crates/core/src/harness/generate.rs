//! Seeded random instances. Each trial draws from its own ChaCha8 stream seeded with
//! `seed ^ trial`, so trials are reproducible one at a time and in any order.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::campaign::CampaignConfig;
use crate::fieldkit::{FieldTag, Matrix, Scalar, Subspace, Vector};
use crate::pencil::{Pencil, RankOnePencil};
use crate::relation::LinearRelation;

/// Numerators and denominators of random rationals lie in `[-ENTRY_BOUND, ENTRY_BOUND]`.
pub const ENTRY_BOUND: i64 = 9;
/// Probability that a random ℚ or ℚ(i) entry is zero.
const SPARSITY: f64 = 0.3;
const RESAMPLE_LIMIT: usize = 64;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial)
}

fn random_ratio(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.random_range(-ENTRY_BOUND..=ENTRY_BOUND);
    let mut den = 0;
    while den == 0 {
        den = rng.random_range(-ENTRY_BOUND..=ENTRY_BOUND);
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_scalar(field: FieldTag, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        FieldTag::Gf(p) => field.from_i64(rng.random_range(0..p as i64)),
        _ if rng.random_bool(SPARSITY) => field.zero(),
        FieldTag::Q => Scalar::Q(random_ratio(rng)),
        FieldTag::Qi => {
            let re = random_ratio(rng);
            let im = if rng.random_bool(0.5) { random_ratio(rng) } else { BigRational::from_integer(0.into()) };
            field.gaussian(re, im)
        }
    }
}

pub fn random_vector(field: FieldTag, len: usize, rng: &mut ChaCha8Rng) -> Vector {
    (0..len).map(|_| random_scalar(field, rng)).collect()
}

fn random_nonzero_vector(field: FieldTag, len: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v = random_vector(field, len, rng);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn random_matrix(field: FieldTag, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let rows = (0..rows).map(|_| random_vector(field, cols, rng)).collect();
    Matrix::from_rows(field, cols, rows).expect("row width")
}

pub fn random_invertible(field: FieldTag, d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    for _ in 0..RESAMPLE_LIMIT {
        let m = random_matrix(field, d, d, rng);
        if m.rank() == d {
            return m;
        }
    }
    Matrix::identity(field, d)
}

/// A vector of `F^{2d}`, sometimes confined to the `x` or the `y` half so that kernels
/// and multivalued parts show up often.
fn random_pair_vector(field: FieldTag, d: usize, rng: &mut ChaCha8Rng) -> Vector {
    let mut v = random_vector(field, 2 * d, rng);
    match rng.random_range(0..4) {
        0 => v[..d].iter_mut().for_each(|x| *x = field.zero()),
        1 => v[d..].iter_mut().for_each(|x| *x = field.zero()),
        _ => {}
    }
    v
}

fn random_span(field: FieldTag, d: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    (0..count).map(|_| random_pair_vector(field, d, rng)).collect()
}

/// `A = C + span{f_1..f_p}`, `B = C + span{g_1..g_p}` for a random `C`, so the
/// perturbation order is at most `p`. About half of the draws leave one side equal to
/// `C`, giving nested pairs.
pub fn gen_pair(cfg: &CampaignConfig, trial: u64) -> (LinearRelation, LinearRelation) {
    let mut rng = trial_rng(cfg.seed, trial);
    let field = cfg.field;
    let d = rng.random_range(cfg.d_min..=cfg.d_max);
    let p = cfg.order();
    let core = random_span(field, d, rng.random_range(0..=(2 * d).saturating_sub(p)), &mut rng);
    let (fa, fb) = match rng.random_range(0..4) {
        0 => (0, p),
        1 => (p, 0),
        _ => (p, p),
    };
    let mut side = |extra: usize| {
        let mut gens = core.clone();
        gens.extend(random_span(field, d, extra, &mut rng));
        LinearRelation::new(Subspace::span(field, 2 * d, &gens).expect("ambient 2d")).expect("even ambient")
    };
    let a = side(fa);
    let b = side(fb);
    (a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilKind {
    /// Random entries, resampled until regular.
    Regular,
    /// `S (s·diag(I, N) − diag(J, I)) T` with a Jordan block structure at one finite
    /// eigenvalue and at infinity.
    Planted,
    /// Regular core with a zero row or a repeated column, mixed by invertible `S`, `T`.
    Singular,
    /// A singular pencil with the perturbation subtracted, so that perturbing lands on it.
    ReachSingular,
    /// Perturbation built as `u = E*c`, `v = F*c`, satisfying the inclusion hypothesis.
    Inclusion,
}

impl PencilKind {
    pub const ALL: [PencilKind; 5] =
        [PencilKind::Regular, PencilKind::Planted, PencilKind::Singular, PencilKind::ReachSingular, PencilKind::Inclusion];
}

pub fn random_regular_pencil(field: FieldTag, d: usize, rng: &mut ChaCha8Rng) -> Pencil {
    let mut last = None;
    for _ in 0..RESAMPLE_LIMIT {
        let p = Pencil::new(random_matrix(field, d, d, rng), random_matrix(field, d, d, rng)).expect("square");
        if p.profile().expect("same field").regular {
            return p;
        }
        last = Some(p);
    }
    last.expect("at least one draw")
}

fn mixed(field: FieldTag, e: Matrix, f: Matrix, rng: &mut ChaCha8Rng) -> Pencil {
    let d = e.rows();
    let (s, t) = (random_invertible(field, d, rng), random_invertible(field, d, rng));
    let e = s.mul(&e).and_then(|m| m.mul(&t)).expect("square");
    let f = s.mul(&f).and_then(|m| m.mul(&t)).expect("square");
    Pencil::new(e, f).expect("square")
}

pub fn planted_pencil(field: FieldTag, d: usize, rng: &mut ChaCha8Rng) -> Pencil {
    let infinite = rng.random_range(0..=d / 2);
    let lambda = random_scalar(field, rng);
    let (mut e, mut f) = (Matrix::zeros(field, d, d), Matrix::zeros(field, d, d));
    let finite = d - infinite;
    for i in 0..finite {
        e.set(i, i, field.one());
        f.set(i, i, lambda.clone());
        // superdiagonal ones split the block at random places
        if i + 1 < finite && rng.random_bool(0.7) {
            f.set(i, i + 1, field.one());
        }
    }
    for i in finite..d {
        f.set(i, i, field.one());
        if i + 1 < d && rng.random_bool(0.7) {
            e.set(i, i + 1, field.one());
        }
    }
    mixed(field, e, f, rng)
}

/// Two degeneracies survive any rank-one perturbation, one usually does not.
pub fn singular_pencil(field: FieldTag, d: usize, rng: &mut ChaCha8Rng) -> Pencil {
    let core = random_regular_pencil(field, d, rng);
    let (mut e, mut f) = (core.e().clone(), core.f().clone());
    let defects = if d >= 3 && rng.random_bool(0.4) { 2 } else { 1 };
    let rows: Vec<usize> = (0..d).collect();
    for k in 0..defects {
        if d == 1 || rng.random_bool(0.5) {
            let r = rows[(rng.random_range(0..d) + k) % d];
            for j in 0..d {
                e.set(r, j, field.zero());
                f.set(r, j, field.zero());
            }
        } else {
            let src = rng.random_range(0..d);
            let dst = (src + rng.random_range(1..d)) % d;
            for i in 0..d {
                e.set(i, dst, e.get(i, src).clone());
                f.set(i, dst, f.get(i, src).clone());
            }
        }
    }
    mixed(field, e, f, rng)
}

pub fn random_rank_one(field: FieldTag, d: usize, rng: &mut ChaCha8Rng) -> RankOnePencil {
    let w = random_nonzero_vector(field, d, rng);
    loop {
        let mut u = random_vector(field, d, rng);
        let mut v = random_vector(field, d, rng);
        match rng.random_range(0..4) {
            0 => u.iter_mut().for_each(|x| *x = field.zero()),
            1 => v.iter_mut().for_each(|x| *x = field.zero()),
            _ => {}
        }
        if let Ok(q) = RankOnePencil::new(u, v, w.clone()) {
            return q;
        }
    }
}

/// Perturbation with `v*x − u*y = c*(Fx − Ey)`, or `None` if every draw of `c` gives
/// `u = v = 0`.
///
/// These are exactly the perturbations satisfying the inclusion hypothesis, and the
/// perturbed pencil is `(I + wc*)(sE − F)`. With `collapse`, `c` is scaled to
/// `c*w = −1`, the only way the perturbed pencil can differ in structure (it becomes
/// singular).
pub fn inclusion_rank_one(p: &Pencil, collapse: bool, rng: &mut ChaCha8Rng) -> Option<RankOnePencil> {
    let (field, d) = (p.field(), p.d());
    for _ in 0..RESAMPLE_LIMIT {
        let w = random_nonzero_vector(field, d, rng);
        let mut c = random_nonzero_vector(field, d, rng);
        if collapse {
            let cw = c.iter().zip(&w).fold(field.zero(), |acc, (x, y)| &acc + &(&x.conj() * y));
            let Some(inv) = cw.inv() else { continue };
            let alpha = (-inv).conj();
            c = c.iter().map(|x| &alpha * x).collect();
        }
        let u = p.e().adjoint().mul_vec(&c).expect("square");
        let v = p.f().adjoint().mul_vec(&c).expect("square");
        if let Ok(q) = RankOnePencil::new(u, v, w) {
            return Some(q);
        }
    }
    None
}

pub fn gen_pencil(cfg: &CampaignConfig, trial: u64) -> (Pencil, RankOnePencil, PencilKind) {
    let mut rng = trial_rng(cfg.seed, trial);
    let field = cfg.field;
    let d = rng.random_range(cfg.d_min..=cfg.d_max);
    let kind = PencilKind::ALL[rng.random_range(0..PencilKind::ALL.len())];
    match kind {
        PencilKind::Regular => (random_regular_pencil(field, d, &mut rng), random_rank_one(field, d, &mut rng), kind),
        PencilKind::Planted => (planted_pencil(field, d, &mut rng), random_rank_one(field, d, &mut rng), kind),
        PencilKind::Singular => (singular_pencil(field, d, &mut rng), random_rank_one(field, d, &mut rng), kind),
        PencilKind::ReachSingular => {
            let target = singular_pencil(field, d, &mut rng);
            let q = random_rank_one(field, d, &mut rng);
            let back = RankOnePencil::new(q.u().clone(), q.v().clone(), q.w().iter().map(|x| -x).collect())
                .expect("same shape");
            (target.apply_perturbation(&back).expect("same shape"), q, kind)
        }
        PencilKind::Inclusion => {
            let (p, base) = if rng.random_bool(0.5) {
                (random_regular_pencil(field, d, &mut rng), PencilKind::Regular)
            } else {
                (singular_pencil(field, d, &mut rng), PencilKind::Singular)
            };
            let collapse = rng.random_bool(1.0 / 3.0);
            match inclusion_rank_one(&p, collapse, &mut rng) {
                Some(q) => (p, q, kind),
                None => {
                    let q = random_rank_one(field, d, &mut rng);
                    (p, q, base)
                }
            }
        }
    }
}

/// Span of `count` random vectors of `F^{2d}` as a relation.
pub fn random_span_relation(field: FieldTag, d: usize, count: usize, rng: &mut ChaCha8Rng) -> LinearRelation {
    let gens = random_span(field, d, count, rng);
    LinearRelation::new(Subspace::span(field, 2 * d, &gens).expect("ambient 2d")).expect("even ambient")
}
