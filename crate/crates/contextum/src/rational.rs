//! Exact rational arithmetic.
//!
//! Every probability, eigenvalue and matrix entry in this crate is carried by
//! [`Rational`]; nothing is ever rounded and no check uses a tolerance.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An arbitrary-precision rational number, always kept in reduced form with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("decimal `{0}` not allowed here (no snap tolerance in effect)")]
    DecimalNotAllowed(String),
    #[error("decimal `{0}` has no rational with denominator <= {1} within the snap tolerance")]
    NoSnap(String, u64),
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self, ParseRationalError> {
        if denom.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(numer.to_string()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Approximate value as `f64`, for display purposes only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Best rational approximation of `self` with denominator at most
    /// `max_denom`, computed from the continued-fraction expansion.
    pub fn best_approximation(&self, max_denom: u64) -> Self {
        let max_denom = BigInt::from(max_denom.max(1));
        if *self.denom() <= max_denom {
            return self.clone();
        }
        // Walk the continued fraction, keeping the last two convergents.
        let mut p_prev = BigInt::from(1);
        let mut q_prev = BigInt::from(0);
        let mut p = self.0.floor().to_integer();
        let mut q = BigInt::from(1);
        let mut frac = &self.0 - BigRational::from_integer(p.clone());
        while !frac.is_zero() {
            let inv = frac.recip();
            let a = inv.floor().to_integer();
            frac = inv - BigRational::from_integer(a.clone());
            let p_next = &a * &p + &p_prev;
            let q_next = &a * &q + &q_prev;
            if q_next > max_denom {
                // Best semiconvergent: largest t with q_prev + t*q <= max_denom.
                let t = (&max_denom - &q_prev) / &q;
                let cand_p = &p_prev + &t * &p;
                let cand_q = &q_prev + &t * &q;
                let conv = Rational(BigRational::new(p.clone(), q.clone()));
                if cand_q.is_zero() {
                    return conv;
                }
                let semi = Rational(BigRational::new(cand_p, cand_q));
                let d_semi = (&semi - self).abs();
                let d_conv = (&conv - self).abs();
                return if d_semi < d_conv { semi } else { conv };
            }
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
        }
        Rational(BigRational::new(p, q))
    }

    /// Parse a decimal literal such as `0.25` or `-1.5` into the exact
    /// rational it denotes.
    pub fn from_decimal_str(s: &str) -> Result<Self, ParseRationalError> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some(parts) => parts,
            None => return Err(ParseRationalError::Invalid(s.to_string())),
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Invalid(s.to_string()));
        }
        let negative = int_part.starts_with('-');
        let digits: String = int_part
            .trim_start_matches(['-', '+'])
            .chars()
            .chain(frac_part.chars())
            .collect();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Invalid(s.to_string()));
        }
        let numer: BigInt = digits
            .parse()
            .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
        let numer = if negative { -numer } else { numer };
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        Rational::from_big(numer, denom)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        if s.contains('.') {
            return Err(ParseRationalError::DecimalNotAllowed(s.to_string()));
        }
        match s.split_once('/') {
            None => {
                let n: BigInt = s
                    .parse()
                    .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
                Ok(Rational(BigRational::from_integer(n)))
            }
            Some((num, den)) => {
                let n: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
                let d: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

/// Parse a probability-like literal. Plain `p/q` strings are always accepted;
/// decimal strings are accepted only when `snap` is given, in which case the
/// decimal is snapped to the closest rational with denominator at most
/// `max_denom` provided it lies within the tolerance.
pub fn parse_rational_snapped(
    s: &str,
    snap: Option<&Rational>,
    max_denom: u64,
) -> Result<Rational, ParseRationalError> {
    let trimmed = s.trim();
    if !trimmed.contains('.') {
        return trimmed.parse();
    }
    let tol = match snap {
        Some(t) => t,
        None => return Err(ParseRationalError::DecimalNotAllowed(trimmed.to_string())),
    };
    let exact = Rational::from_decimal_str(trimmed)?;
    let snapped = exact.best_approximation(max_denom);
    if (&snapped - &exact).abs() <= *tol {
        Ok(snapped)
    } else {
        Err(ParseRationalError::NoSnap(trimmed.to_string(), max_denom))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}
