//! Exact non-negative rationals for the balance parameter `q`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A non-negative rational `num / den` kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational (expected \"a/b\" or a decimal)")]
    Malformed(String),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        let g = gcd(num, den).max(1);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(self * x)` for an integer `x`.
    pub fn mul_floor(self, x: u64) -> u64 {
        ((self.num as u128 * x as u128) / self.den as u128) as u64
    }

    /// `ceil(self * x)` for an integer `x`.
    pub fn mul_ceil(self, x: u64) -> u64 {
        ((self.num as u128 * x as u128).div_ceil(self.den as u128)) as u64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Malformed(s.to_string());
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return Rational::new(a, b);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty()) || frac.len() > 18 {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        Rational::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal() {
        let a: Rational = "9/20".parse().unwrap();
        let b: Rational = "0.45".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!((a.num(), a.den()), (9, 20));
        assert_eq!("1".parse::<Rational>().unwrap(), Rational::new(1, 1).unwrap());
        assert_eq!(".5".parse::<Rational>().unwrap(), Rational::new(1, 2).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
        assert!("-0.3".parse::<Rational>().is_err());
        assert_eq!("1/0".parse::<Rational>(), Err(RationalError::ZeroDenominator));
    }

    #[test]
    fn floor_and_ceil() {
        let q = Rational::new(9, 20).unwrap();
        assert_eq!(q.mul_floor(100), 45);
        assert_eq!(q.mul_ceil(100), 45);
        assert_eq!(q.mul_floor(101), 45);
        assert_eq!(q.mul_ceil(101), 46);
    }
}
