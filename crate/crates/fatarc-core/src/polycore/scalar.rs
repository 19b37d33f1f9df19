//! Coefficient fields and their elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::{Error, Result};

/// The coefficient field: ℚ (characteristic 0) or 𝔽ₚ for a prime p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Field {
    ch: u64,
}

impl Field {
    /// The rational numbers.
    pub fn rationals() -> Self {
        Field { ch: 0 }
    }

    /// The prime field 𝔽ₚ. Errors unless `p` is prime.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Field { ch: p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// 0 for ℚ, p for 𝔽ₚ.
    pub fn characteristic(&self) -> u64 {
        self.ch
    }

    pub fn zero(&self) -> Scalar {
        match self.ch {
            0 => Scalar::Rat(BigRational::zero()),
            _ => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self.ch {
            0 => Scalar::Rat(BigRational::one()),
            _ => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.ch {
            0 => Scalar::Rat(BigRational::from_integer(v.clone())),
            p => {
                let m = v % BigInt::from(p);
                let m = if m.is_negative() { m + BigInt::from(p) } else { m };
                // The remainder fits in u64 by construction.
                let digits = m.to_u64_digits().1;
                Scalar::Mod(digits.first().copied().unwrap_or(0))
            }
        }
    }

    /// Reduce a rational into this field; errors when the denominator
    /// vanishes modulo p.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self.ch {
            0 => Ok(Scalar::Rat(v.clone())),
            p => {
                let den = self.from_bigint(v.denom());
                if den.is_zero() {
                    return Err(Error::BadReduction(p));
                }
                let num = self.from_bigint(v.numer());
                Ok(self.mul(&num, &self.inv(&den)?))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(addm(*x, *y, self.ch)),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod(x) => Scalar::Mod(if *x == 0 { 0 } else { self.ch - x }),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mulm(*x, *y, self.ch)),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Mod(x) => Scalar::Mod(invm(*x, self.ch)),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, n: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

/// An exact field element; the variant must match the ambient [`Field`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Mod(x) => *x == 1,
        }
    }

    /// True for negative rationals; 𝔽ₚ elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_negative(),
            Scalar::Mod(_) => false,
        }
    }

    /// The rational value, when this is a ℚ scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(x) => Some(x),
            Scalar::Mod(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 * b as u128) % p as u128;
    s as u64
}

fn invm(a: u64, p: u64) -> u64 {
    // Extended Euclid on (a, p), p prime, a ≠ 0 mod p.
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of non-unit");
    let m = s0.rem_euclid(p as i128);
    m as u64
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
