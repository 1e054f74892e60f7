//! Univariate polynomials over a [`FieldTag`], fraction-free elimination over F[s], and
//! exact root search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{FieldTag, Scalar};
use crate::{Error, Result};

/// Coefficients low to high, without trailing zeros; the zero polynomial has none.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldTag,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: FieldTag) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(c.field(), vec![c])
    }

    /// `a + b·s`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Self::new(a.field(), vec![a, b])
    }

    pub fn new(field: FieldTag, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, c)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = divisor.lead().and_then(Scalar::inv).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().expect("nonempty") * &inv_lead;
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[k + i].sub_mul_assign(&f, b);
            }
            quo[k] = f;
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(self.field, quo), Poly::new(self.field, rem))
    }

    /// Quotient of an exact division; errors when a remainder is left.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor);
        if !r.is_zero() {
            return Err(Error::Precondition("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn monic(&self) -> Poly {
        match self.lead().and_then(Scalar::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Distinct roots lying in the field, ascending for ℚ and in residue order for GF(p).
    ///
    /// Exhaustive over GF(p). Over ℚ, real roots are isolated with a Sturm sequence and each
    /// isolating interval is narrowed until it can hold at most one fraction with the
    /// admissible denominator. Over ℚ(i), the real rational roots are those of the common
    /// factor of the real and imaginary coefficient parts; non-real roots are found only on
    /// the Gaussian-integer grid |re|, |im| ≤ 3.
    pub fn roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        match self.field {
            FieldTag::Gf(_) => self
                .field
                .elements()
                .expect("finite field")
                .into_iter()
                .filter(|x| self.eval(x).is_zero())
                .collect(),
            FieldTag::Q => {
                let q: Vec<BigRational> = self.coeffs.iter().map(|c| c.re().expect("rational").clone()).collect();
                rational_roots(&q).into_iter().map(Scalar::Q).collect()
            }
            FieldTag::Qi => {
                let re: Vec<BigRational> = self.coeffs.iter().map(|c| c.re().expect("gaussian").clone()).collect();
                let im: Vec<BigRational> = self.coeffs.iter().map(|c| c.im().expect("gaussian").clone()).collect();
                let common = rat_gcd(&rat_trim(re), &rat_trim(im));
                let mut out: Vec<Scalar> = rational_roots(&common)
                    .into_iter()
                    .map(|r| Scalar::Qi(r, BigRational::zero()))
                    .collect();
                for a in -3i64..=3 {
                    for b in (-3i64..=3).filter(|&b| b != 0) {
                        let z = Scalar::Qi(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
                        if self.eval(&z).is_zero() {
                            out.push(z);
                        }
                    }
                }
                out
            }
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

/// Summary of fraction-free row reduction of a polynomial matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyEchelon {
    /// Rank over the rational function field F(s).
    pub rank: usize,
    /// The last pivot: a nonzero `rank × rank` minor (the constant 1 for rank 0).
    pub minor: Poly,
    /// The determinant, zero unless the matrix is square of full rank.
    pub det: Poly,
}

/// Fraction-free (Bareiss) row echelon reduction over F[s]. Each intermediate entry is a
/// minor of the input, so every division is exact.
pub fn fraction_free_echelon(field: FieldTag, mut m: Vec<Vec<Poly>>) -> Result<PolyEchelon> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let one = Poly::constant(field.one());
    let mut prev = one.clone();
    let mut negate = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            negate = !negate;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = num.exact_div(&prev)?;
            }
            m[i][c] = Poly::zero(field);
        }
        prev = m[r][c].clone();
        r += 1;
    }
    let det = if r == rows && rows == cols {
        if negate {
            prev.neg()
        } else {
            prev.clone()
        }
    } else {
        Poly::zero(field)
    };
    Ok(PolyEchelon { rank: r, minor: prev, det })
}

fn rat_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn rat_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = r.last().expect("nonempty") / b.last().expect("nonzero divisor");
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &f * c;
        }
        r.pop();
        r = rat_trim(r);
    }
    r
}

fn rat_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let f = r.last().expect("nonempty") / b.last().expect("nonzero divisor");
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &f * c;
        }
        q[k] = f;
        r.pop();
    }
    rat_trim(q)
}

fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn rat_derivative(p: &[BigRational]) -> Vec<BigRational> {
    rat_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = rat_eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Distinct rational roots of a rational polynomial, ascending.
fn rational_roots(p: &[BigRational]) -> Vec<BigRational> {
    let p = rat_trim(p.to_vec());
    if p.len() < 2 {
        return Vec::new();
    }
    let dp = rat_derivative(&p);
    let g = rat_gcd(&p, &dp);
    let sf = rat_div(&p, &g);
    if sf.len() < 2 {
        return Vec::new();
    }
    // admissible denominator: the lead of the primitive integer multiple
    let lcm = sf.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = sf.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let prim: Vec<BigRational> = ints.iter().map(|c| BigRational::from_integer(c / &content)).collect();
    let lead = prim.last().expect("nonempty").to_integer().abs();
    let sf = prim;

    let mut seq = vec![sf.clone(), rat_derivative(&sf)];
    loop {
        let n = seq.len();
        let r = rat_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }

    let top = sf.last().expect("nonempty").abs();
    let bound = sf[..sf.len() - 1]
        .iter()
        .map(|c| c.abs() / &top)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();
    let width_target = BigRational::new(BigInt::one(), lead.clone());
    let two = BigRational::from_integer(2.into());
    let sign = |x: &BigRational| rat_eval(&sf, x).signum();

    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let (va, vb) = (sign_changes(&seq, &a), sign_changes(&seq, &b));
        let count = va.saturating_sub(vb);
        if count == 0 {
            continue;
        }
        if count > 1 {
            let mid = (&a + &b) / &two;
            stack.push((a, mid.clone()));
            stack.push((mid, b));
            continue;
        }
        // one simple root r in (a, b]: f has the sign of f(b) on (r, b] and the
        // opposite sign on (a, r)
        let (mut a, mut b) = (a, b);
        let sb = sign(&b);
        if sb.is_zero() {
            roots.push(b);
            continue;
        }
        while &b - &a >= width_target {
            let mid = (&a + &b) / &two;
            let sm = sign(&mid);
            if sm.is_zero() {
                (a, b) = (mid.clone(), mid);
                break;
            }
            if sm == sb {
                b = mid;
            } else {
                a = mid;
            }
        }
        if a == b {
            roots.push(a);
            continue;
        }
        let k = (&b * BigRational::from_integer(lead.clone())).floor();
        let cand = k / BigRational::from_integer(lead.clone());
        if cand > a && sign(&cand).is_zero() {
            roots.push(cand);
        }
    }
    roots.sort();
    roots
}
