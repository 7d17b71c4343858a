//! Coefficient domains: the prime field F_p, the integers and the rationals.
//!
//! A domain value carries whatever runtime data its arithmetic needs (only
//! the modulus, for F_p). Polynomials are generic over [`CoefficientRing`],
//! so a product over F_p never touches a bignum.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{structural, FglError, Result};

/// Serializable description of a coefficient domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Fp { p: u64 },
    Z,
    Q,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Fp { p } => write!(f, "F_{p}"),
            Domain::Z => f.write_str("Z"),
            Domain::Q => f.write_str("Q"),
        }
    }
}

/// Exact commutative coefficient arithmetic.
pub trait CoefficientRing: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn descriptor(&self) -> Domain;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Decimal string form; rationals as `num/den`.
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// True when `a` is negative in its printed form.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field with `p` elements; elements are canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(FglError::InvalidParameter(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(FglError::InvalidParameter(format!(
                "prime {p} exceeds the supported range (< 2^32)"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // Fermat
        Some(self.pow(a, self.p - 2))
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl CoefficientRing for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> Domain {
        Domain::Fp { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        self.reduce_bigint(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn add_assign(&self, a: &mut u64, b: &u64) {
        *a += b;
        if *a >= self.p {
            *a -= self.p;
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let v: u64 = s
            .parse()
            .map_err(|_| FglError::Parse(format!("bad F_{} element {s:?}", self.p)))?;
        if v >= self.p {
            return Err(FglError::Parse(format!(
                "F_{} element {v} is not a canonical residue",
                self.p
            )));
        }
        Ok(v)
    }
}

/// Arbitrary-precision integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Integers;

impl CoefficientRing for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> Domain {
        Domain::Z
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_str_radix(10)
    }
    fn parse(&self, s: &str) -> Result<BigInt> {
        BigInt::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| FglError::Parse(format!("bad integer {s:?}")))
    }
    fn is_negative(&self, a: &BigInt) -> bool {
        a.is_negative()
    }
}

/// Arbitrary-precision rationals, always in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl CoefficientRing for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> Domain {
        Domain::Q
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_str_radix(10)
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let bad = || FglError::Parse(format!("bad rational {s:?}"));
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(
                BigInt::parse_bytes(s.as_bytes(), 10).ok_or_else(bad)?,
            )),
            Some((n, d)) => {
                let n = BigInt::parse_bytes(n.as_bytes(), 10).ok_or_else(bad)?;
                let d = BigInt::parse_bytes(d.as_bytes(), 10).ok_or_else(bad)?;
                if d.is_zero() {
                    return Err(FglError::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(n, d))
            }
        }
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

/// Coefficientwise homomorphism from `self` into `T`.
pub trait CoefficientMap<T: CoefficientRing>: CoefficientRing {
    fn map_elem(&self, a: &Self::Elem, target: &T) -> Result<T::Elem>;
}

impl CoefficientMap<PrimeField> for Integers {
    fn map_elem(&self, a: &BigInt, target: &PrimeField) -> Result<u64> {
        Ok(target.from_bigint(a))
    }
}

impl CoefficientMap<PrimeField> for Rationals {
    fn map_elem(&self, a: &BigRational, target: &PrimeField) -> Result<u64> {
        let den = target.from_bigint(a.denom());
        let inv = target.inverse(den).ok_or_else(|| FglError::Integrality {
            coefficient: self.format(a),
            p: target.characteristic(),
        })?;
        Ok(target.mul(&target.from_bigint(a.numer()), &inv))
    }
}

impl CoefficientMap<Rationals> for Integers {
    fn map_elem(&self, a: &BigInt, _target: &Rationals) -> Result<BigRational> {
        Ok(BigRational::from_integer(a.clone()))
    }
}

impl CoefficientMap<Integers> for Integers {
    fn map_elem(&self, a: &BigInt, _target: &Integers) -> Result<BigInt> {
        Ok(a.clone())
    }
}

impl CoefficientMap<PrimeField> for PrimeField {
    fn map_elem(&self, a: &u64, target: &PrimeField) -> Result<u64> {
        if self.p != target.p {
            return Err(structural(format!(
                "cannot map F_{} into F_{}",
                self.p, target.p
            )));
        }
        Ok(*a)
    }
}
