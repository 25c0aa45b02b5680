use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{ParseRationalError, Rational};

/// A complex number with rational real and imaginary parts. Field arithmetic
/// is exact, which is what makes exact Born-rule computations possible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::real(Rational::int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        GaussianRational::real(Rational::new(n, d))
    }

    pub fn zero() -> Self {
        GaussianRational::real(Rational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        GaussianRational {
            re: &self.re * factor,
            im: &self.im * factor,
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl GaussianRational {
    /// Parses `a/b`, `c/di`, `a/b+c/di` or `a/b-c/di`, delegating each
    /// scalar part to `parse_part` (which is what lets the file layer accept
    /// snapped decimals in either part).
    pub fn parse_with<E: From<ParseRationalError>>(
        s: &str,
        parse_part: impl Fn(&str) -> Result<Rational, E>,
    ) -> Result<Self, E> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty.into());
        }
        if let Some(body) = s.strip_suffix('i') {
            // Split into real part and imaginary coefficient at the last
            // +/- that is neither a leading sign nor part of a fraction or
            // decimal exponent position.
            let chars: Vec<char> = body.chars().collect();
            let mut split_at = None;
            for (idx, &c) in chars.iter().enumerate().skip(1).rev() {
                if (c == '+' || c == '-') && chars[idx - 1] != '/' {
                    split_at = Some(idx);
                    break;
                }
            }
            return match split_at {
                Some(idx) => {
                    let re = parse_part(&chars[..idx].iter().collect::<String>())?;
                    let sign = chars[idx];
                    let im_body: String = chars[idx + 1..].iter().collect();
                    let im_mag = if im_body.is_empty() {
                        Rational::one()
                    } else {
                        parse_part(&im_body)?
                    };
                    let im = if sign == '-' { -im_mag } else { im_mag };
                    Ok(GaussianRational::new(re, im))
                }
                None => {
                    let im = if body.is_empty() {
                        Rational::one()
                    } else if body == "-" {
                        -Rational::one()
                    } else {
                        parse_part(body)?
                    };
                    Ok(GaussianRational::new(Rational::zero(), im))
                }
            };
        }
        Ok(GaussianRational::real(parse_part(s)?))
    }
}

impl FromStr for GaussianRational {
    type Err = ParseRationalError;

    /// Accepts `a/b`, `c/di`, `a/b+c/di` and `a/b-c/di` (each part an
    /// integer or a fraction).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaussianRational::parse_with(s, |part| part.parse::<Rational>())
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(Rational::new(re.0, re.1), Rational::new(im.0, im.1))
    }

    #[test]
    fn multiplication_mixes_parts() {
        let a = gr((0, 1), (1, 1)); // i
        assert_eq!(&a * &a, GaussianRational::from_int(-1));
        let b = gr((1, 2), (1, 2));
        let c = &b * &b.conj();
        assert_eq!(c, GaussianRational::from_ratio(1, 2));
    }

    #[test]
    fn display_and_parse_roundtrip() {
        for value in [
            GaussianRational::zero(),
            GaussianRational::one(),
            GaussianRational::i(),
            gr((1, 2), (0, 1)),
            gr((0, 1), (-1, 2)),
            gr((1, 2), (1, 3)),
            gr((-1, 2), (-1, 3)),
        ] {
            let text = value.to_string();
            let back: GaussianRational = text.parse().unwrap();
            assert_eq!(back, value, "roundtrip through `{text}`");
        }
    }

    #[test]
    fn parse_accepts_bare_i_forms() {
        assert_eq!("i".parse::<GaussianRational>().unwrap(), GaussianRational::i());
        assert_eq!(
            "-i".parse::<GaussianRational>().unwrap(),
            &GaussianRational::zero() - &GaussianRational::i()
        );
        assert_eq!(
            "1/2i".parse::<GaussianRational>().unwrap(),
            gr((0, 1), (1, 2))
        );
    }
}
