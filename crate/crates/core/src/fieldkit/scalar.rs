//! Exact scalars over ℚ, ℚ(i) and GF(p).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest prime modulus accepted for GF(p).
pub const MAX_PRIME: u32 = 97;

/// The scalar field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    /// Rationals.
    Q,
    /// Gaussian rationals a + bi.
    Qi,
    /// Prime field of the given modulus.
    #[serde(rename = "GF")]
    Gf(u32),
}

impl FieldTag {
    /// Validated GF(p) tag.
    pub fn gf(p: u32) -> Result<Self> {
        if (2..=MAX_PRIME).contains(&p) && is_prime(p) {
            Ok(FieldTag::Gf(p))
        } else {
            Err(Error::InvalidField(format!("GF({p}): modulus must be a prime in [2, {MAX_PRIME}]")))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldTag::Q => Scalar::Q(BigRational::from_integer(v.into())),
            FieldTag::Qi => Scalar::Qi(BigRational::from_integer(v.into()), BigRational::zero()),
            FieldTag::Gf(p) => Scalar::Gf { r: v.rem_euclid(p as i64) as u32, p },
        }
    }

    /// `num/den` embedded in the field. Panics on a zero denominator (or one divisible by p).
    pub fn from_ratio(self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match self {
            FieldTag::Q => Scalar::Q(BigRational::new(num.into(), den.into())),
            FieldTag::Qi => Scalar::Qi(BigRational::new(num.into(), den.into()), BigRational::zero()),
            FieldTag::Gf(_) => self.from_i64(num) / self.from_i64(den),
        }
    }

    /// a + bi over ℚ(i). Only valid for `Qi`.
    pub fn gaussian(self, re: BigRational, im: BigRational) -> Scalar {
        debug_assert_eq!(self, FieldTag::Qi);
        Scalar::Qi(re, im)
    }

    /// Every element of a finite field, in residue order; `None` for the infinite fields.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            FieldTag::Gf(p) => Some((0..p).map(|r| Scalar::Gf { r, p }).collect()),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldTag::Gf(_))
    }

    /// Parse a scalar literal: `a`, `a/b`, `a/b+c/di`, `c/di` (ℚ(i) only) or an integer residue.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar literal".into()));
        }
        match self {
            FieldTag::Q => parse_rational(&t).map(Scalar::Q),
            FieldTag::Gf(_) => {
                let q = parse_rational(&t)?;
                let num = bigint_to_i64(q.numer())?;
                let den = bigint_to_i64(q.denom())?;
                let d = self.from_i64(den);
                if d.is_zero() {
                    return Err(Error::Parse(format!("{s}: denominator vanishes in {self}")));
                }
                Ok(self.from_i64(num) / d)
            }
            FieldTag::Qi => {
                if !t.ends_with('i') {
                    return parse_rational(&t).map(|re| Scalar::Qi(re, BigRational::zero()));
                }
                let body = &t[..t.len() - 1];
                // split at the last sign that is not the leading one
                let split = body
                    .char_indices()
                    .skip(1)
                    .filter(|&(_, c)| c == '+' || c == '-')
                    .map(|(i, _)| i)
                    .last();
                let (re, im) = match split {
                    Some(i) => (parse_rational(&body[..i])?, parse_imag(&body[i..])?),
                    None => (BigRational::zero(), parse_imag(body)?),
                };
                Ok(Scalar::Qi(re, im))
            }
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Qi => write!(f, "Qi"),
            FieldTag::Gf(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

fn bigint_to_i64(v: &BigInt) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Parse(format!("{v} does not fit a residue literal")))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed rational literal `{s}`"));
    let s = s.strip_prefix('+').unwrap_or(s);
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn parse_imag(s: &str) -> Result<BigRational> {
    match s {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(s),
    }
}

/// A field element. All scalars taking part in one operation must share a [`FieldTag`];
/// mixing fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Qi(BigRational, BigRational),
    Gf { r: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Q(_) => FieldTag::Q,
            Scalar::Qi(..) => FieldTag::Qi,
            Scalar::Gf { p, .. } => FieldTag::Gf(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(a) => a.is_zero(),
            Scalar::Qi(a, b) => a.is_zero() && b.is_zero(),
            Scalar::Gf { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(a) => a.is_one(),
            Scalar::Qi(a, b) => a.is_one() && b.is_zero(),
            Scalar::Gf { r, .. } => *r == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Qi(a, b) => {
                let norm = a * a + b * b;
                Scalar::Qi(a / &norm, -(b / &norm))
            }
            Scalar::Gf { r, p } => Scalar::Gf { r: pow_mod(*r, p - 2, *p), p: *p },
        })
    }

    /// Complex conjugate; the identity outside ℚ(i).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Qi(a, b) => Scalar::Qi(a.clone(), -b),
            other => other.clone(),
        }
    }

    /// Real part as a rational (ℚ and ℚ(i) only).
    pub fn re(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(a) | Scalar::Qi(a, _) => Some(a),
            Scalar::Gf { .. } => None,
        }
    }

    /// Imaginary part (ℚ(i) only).
    pub fn im(&self) -> Option<&BigRational> {
        match self {
            Scalar::Qi(_, b) => Some(b),
            _ => None,
        }
    }

    /// `self -= f * x`, the elimination kernel.
    pub fn sub_mul_assign(&mut self, f: &Scalar, x: &Scalar) {
        match (self, f, x) {
            (Scalar::Q(a), Scalar::Q(f), Scalar::Q(x)) => *a -= f * x,
            (Scalar::Gf { r, p }, Scalar::Gf { r: f, .. }, Scalar::Gf { r: x, .. }) => {
                let prod = (*f as u64 * *x as u64 % *p as u64) as u32;
                *r = (*r + *p - prod) % *p;
            }
            (s, f, x) => {
                let prod = f * x;
                *s = &*s - &prod;
            }
        }
    }

    fn mismatch(&self, other: &Scalar) -> ! {
        panic!("field mismatch: {} vs {}", self.field(), other.field())
    }
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u32
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(a) => write!(f, "{a}"),
            Scalar::Qi(a, b) => {
                if b.is_zero() {
                    write!(f, "{a}")
                } else if a.is_zero() {
                    write!(f, "{b}i")
                } else if b.is_negative() {
                    write!(f, "{a}-{}i", -b)
                } else {
                    write!(f, "{a}+{b}i")
                }
            }
            Scalar::Gf { r, .. } => write!(f, "{r}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => Scalar::Qi(a + c, b + d),
            (Scalar::Gf { r: a, p }, Scalar::Gf { r: b, p: q }) if p == q => {
                Scalar::Gf { r: (a + b) % p, p: *p }
            }
            _ => self.mismatch(rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => Scalar::Qi(a - c, b - d),
            (Scalar::Gf { r: a, p }, Scalar::Gf { r: b, p: q }) if p == q => {
                Scalar::Gf { r: (a + p - b) % p, p: *p }
            }
            _ => self.mismatch(rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Qi(a, b), Scalar::Qi(c, d)) => Scalar::Qi(a * c - b * d, a * d + b * c),
            (Scalar::Gf { r: a, p }, Scalar::Gf { r: b, p: q }) if p == q => Scalar::Gf {
                r: (*a as u64 * *b as u64 % *p as u64) as u32,
                p: *p,
            },
            _ => self.mismatch(rhs),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Qi(a, b) => Scalar::Qi(-a, -b),
            Scalar::Gf { r, p } => Scalar::Gf { r: (p - r) % p, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_arithmetic_wraps() {
        let f = FieldTag::gf(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a - &b, f.from_i64(4));
        assert_eq!(&a * &b, f.from_i64(2));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(FieldTag::gf(4).is_err());
        assert!(FieldTag::gf(1).is_err());
        assert!(FieldTag::gf(101).is_err());
        assert!(FieldTag::gf(97).is_ok());
    }

    #[test]
    fn gaussian_inverse() {
        let f = FieldTag::Qi;
        let z = f.parse("1+2i").unwrap();
        let w = z.inv().unwrap();
        assert_eq!(w, f.parse("1/5-2/5i").unwrap());
        assert!((&z * &w).is_one());
        assert_eq!(z.conj(), f.parse("1-2i").unwrap());
    }

    #[test]
    fn literal_round_trip() {
        for (field, lit) in [
            (FieldTag::Q, "-3/4"),
            (FieldTag::Q, "7"),
            (FieldTag::Qi, "1/2-3/4i"),
            (FieldTag::Qi, "-5i"),
            (FieldTag::Qi, "2"),
            (FieldTag::Gf(7), "6"),
        ] {
            let s = field.parse(lit).unwrap();
            assert_eq!(field.parse(&s.to_string()).unwrap(), s, "{lit}");
        }
        assert_eq!(FieldTag::Qi.parse("i").unwrap(), FieldTag::Qi.parse("0+1i").unwrap());
        assert_eq!(FieldTag::Gf(7).parse("1/2").unwrap(), FieldTag::Gf(7).from_i64(4));
        assert!(FieldTag::Q.parse("1/0").is_err());
        assert!(FieldTag::Q.parse("x").is_err());
        assert!(FieldTag::Gf(3).parse("1/3").is_err());
    }

    #[test]
    fn sub_mul_assign_matches_ops() {
        for f in [FieldTag::Q, FieldTag::Qi, FieldTag::Gf(7)] {
            let mut a = f.from_ratio(2, 3);
            let b = f.from_i64(5);
            let c = f.from_ratio(-1, 2);
            let expect = &a - &(&b * &c);
            a.sub_mul_assign(&b, &c);
            assert_eq!(a, expect);
        }
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &FieldTag::Q.one() + &FieldTag::Gf(3).one();
    }
}
