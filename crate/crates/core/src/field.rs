//! Exact scalar fields: the rationals and prime fields.
//!
//! Scalars are always stored as [`BigRational`]. Over a prime field a scalar
//! is kept in reduced form, an integer in `0..p` with denominator one, so that
//! structural equality coincides with field equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExactField {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ExactField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::Field(format!("prime {p} is too large")));
        }
        Ok(ExactField::PrimeField(p))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.reduce(&Scalar::from_integer(BigInt::from(v)))
    }

    /// Brings `x` into canonical form. Panics over `F_p` if the denominator
    /// of `x` is divisible by `p`; use [`ExactField::try_reduce`] for input.
    pub fn reduce(&self, x: &Scalar) -> Scalar {
        self.try_reduce(x)
            .unwrap_or_else(|| panic!("{x} has no image in {self}"))
    }

    pub fn try_reduce(&self, x: &Scalar) -> Option<Scalar> {
        match *self {
            ExactField::Rationals => Some(x.clone()),
            ExactField::PrimeField(p) => {
                let p = BigInt::from(p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return None;
                }
                let inv = mod_inverse(&den, &p);
                Some(Scalar::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.canon(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.canon(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.canon(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.canon(-a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match *self {
            ExactField::Rationals => Some(a.recip()),
            ExactField::PrimeField(p) => {
                let p = BigInt::from(p);
                Some(Scalar::from_integer(mod_inverse(&a.to_integer(), &p)))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Number of elements for a prime field, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match *self {
            ExactField::Rationals => None,
            ExactField::PrimeField(p) => Some(p),
        }
    }

    /// All field elements in increasing order; only for prime fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.order().map(|p| (0..p as i64).map(|v| self.from_int(v)).collect())
    }

    /// Parses `"a"` or `"a/b"` into the field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let raw = match text.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| Error::Field(format!("bad numerator in {text:?}")))?;
                let d = BigInt::from_str(d.trim()).map_err(|_| Error::Field(format!("bad denominator in {text:?}")))?;
                if d.is_zero() {
                    return Err(Error::Field(format!("zero denominator in {text:?}")));
                }
                Scalar::new(n, d)
            }
            None => {
                Scalar::from_integer(BigInt::from_str(text).map_err(|_| Error::Field(format!("bad scalar {text:?}")))?)
            }
        };
        self.try_reduce(&raw)
            .ok_or_else(|| Error::Field(format!("{text} is not defined in {self}")))
    }

    /// Canonical `"num/den"` (or `"num"`) encoding.
    pub fn format_scalar(&self, x: &Scalar) -> String {
        if x.is_integer() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }

    fn canon(&self, x: Scalar) -> Scalar {
        match self {
            ExactField::Rationals => x,
            ExactField::PrimeField(_) => self.reduce(&x),
        }
    }
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rationals => write!(f, "Q"),
            ExactField::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for ExactField {
    type Err = Error;

    /// Accepts `Q` or `fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(ExactField::Rationals);
        }
        let p = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("Fp:"))
            .or_else(|| s.strip_prefix("F"))
            .ok_or_else(|| Error::Field(format!("unknown field {s:?} (expected Q or fp:<p>)")))?;
        let p: u64 = p.parse().map_err(|_| Error::Field(format!("bad prime in {s:?}")))?;
        ExactField::prime(p)
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.abs().is_one());
    e.x.mod_floor(p)
}

/// Small integer view of a scalar, when it has one.
pub fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic_wraps() {
        let f = ExactField::prime(7).unwrap();
        let a = f.from_int(5);
        let b = f.from_int(4);
        assert_eq!(f.add(&a, &b), f.from_int(2));
        assert_eq!(f.mul(&a, &b), f.from_int(6));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.from_int(-1), f.from_int(6));
    }

    #[test]
    fn rationals_parse_and_format() {
        let q = ExactField::Rationals;
        let x = q.parse_scalar("-6/4").unwrap();
        assert_eq!(q.format_scalar(&x), "-3/2");
        assert!(q.parse_scalar("1/0").is_err());
    }

    #[test]
    fn prime_field_rejects_bad_denominators() {
        let f = ExactField::prime(5).unwrap();
        assert!(f.parse_scalar("1/5").is_err());
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_int(3));
    }

    #[test]
    fn field_names_parse() {
        assert_eq!("Q".parse::<ExactField>().unwrap(), ExactField::Rationals);
        assert_eq!("fp:101".parse::<ExactField>().unwrap(), ExactField::PrimeField(101));
        assert!("fp:100".parse::<ExactField>().is_err());
    }
}
