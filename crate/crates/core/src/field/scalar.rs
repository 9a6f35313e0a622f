use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation: the rationals or a prime field `F_p`.
///
/// Characteristic 2 is never admitted; the symmetric matrix attached to a
/// quadric has `2 a_ii` on its diagonal.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `F_p`, rejecting composites, `p = 2`, and moduli too wide for
    /// single-word multiplication.
    pub fn prime(p: u64) -> Result<Self> {
        if !(3..1 << 32).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Scalar::Mod {
                    value: r.to_u64().expect("residue fits in u64"),
                    p,
                }
            }
        }
    }

    /// `F_p` residue `value mod p`; for `Q` this is the integer `value`.
    pub fn from_u64(self, value: u64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(value))),
            Field::Prime(p) => Scalar::Mod { value: value % p, p },
        }
    }

    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parses a scalar literal `int` or `int/uint`. Fractions are only
    /// accepted over `Q`.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        let not_in = || Error::CoefficientNotInField {
            coeff: t.to_string(),
            field: self,
        };
        let parse_int = |s: &str| -> Result<BigInt> {
            let body = s.strip_prefix('-').unwrap_or(s);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Format(format!("`{t}` is not a scalar literal")));
            }
            BigInt::from_str(s).map_err(|_| Error::Format(format!("`{t}` is not a scalar literal")))
        };
        match t.split_once('/') {
            None => Ok(self.from_bigint(&parse_int(t)?)),
            Some((n, d)) => {
                if d.starts_with('-') {
                    return Err(Error::Format(format!("`{t}`: denominator must be unsigned")));
                }
                let (n, d) = (parse_int(n)?, parse_int(d)?);
                if self != Field::Rational {
                    return Err(not_in());
                }
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
        }
    }

    /// All elements of `F_p` in residue order. Panics over `Q`.
    pub fn elements(self) -> impl Iterator<Item = Scalar> {
        let p = match self {
            Field::Prime(p) => p,
            Field::Rational => panic!("Q has no finite element list"),
        };
        (0..p).map(move |value| Scalar::Mod { value, p })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "p{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q` or `p<prime>` (as on the command line).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(Field::Rational);
        }
        let digits = s.strip_prefix('p').or_else(|| s.strip_prefix("F_")).unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Format(format!("unknown field `{s}`; use Q or p<prime>")))?;
        Field::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    /// Accepts `"Q"`, `"p101"`, or `{"p": 101}`.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Prime { p: u64 },
        }
        match Repr::deserialize(d)? {
            Repr::Tag(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Prime { p } => Field::prime(p).map_err(serde::de::Error::custom),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms by
/// `BigRational`; residues are always reduced into `[0, p)`.
///
/// The arithmetic operators panic when the operands live in different
/// fields. Containers (`Matrix`, `MultiPoly`, `ProjPoint`) check domains at
/// construction so the operators never see mixed input from them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::DomainMismatch(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: inv_mod(*value, *p),
                p: *p,
            },
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Residue in `[0, p)`; `None` over `Q`.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    /// Negative for `Q` values below zero; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    /// Reduces a rational into `F_p`; fails when `p` divides the denominator.
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar> {
        let target = Field::prime(p)?;
        match self {
            Scalar::Mod { p: q, .. } if *q == p => Ok(self.clone()),
            Scalar::Mod { .. } => Err(Error::DomainMismatch(self.field(), target)),
            Scalar::Rational(r) => {
                let den = target.from_bigint(r.denom());
                if den.is_zero() {
                    return Err(Error::BadReduction { p });
                }
                target.from_bigint(r.numer()).checked_div(&den)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch in scalar arithmetic: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                let s = a + b;
                Scalar::Mod {
                    value: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: if a >= b { a - b } else { a + p - b },
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: mul_mod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
