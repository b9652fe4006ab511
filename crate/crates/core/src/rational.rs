//! Positive rationals kept in factored form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith;

/// A positive rational number stored as `prime -> exponent`, with zero
/// exponents never stored. Serializes as a JSON object such as `{"2": -1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactoredRational {
    factors: BTreeMap<u64, i64>,
}

impl FactoredRational {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn prime_power(p: u64, e: i64) -> Self {
        let mut out = Self::one();
        out.mul_prime_power(p, e);
        out
    }

    /// Factor a positive integer. Panics on zero.
    pub fn from_u64(n: u64) -> Self {
        assert!(n > 0, "FactoredRational::from_u64(0)");
        let mut out = Self::one();
        let mut n = n;
        let mut d = 2u64;
        while d * d <= n {
            while n.is_multiple_of(d) {
                out.mul_prime_power(d, 1);
                n /= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.mul_prime_power(n, 1);
        }
        out
    }

    pub fn mul_prime_power(&mut self, p: u64, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.factors.entry(p).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&p);
        }
    }

    /// Exponent of `p`; zero when absent.
    pub fn ord(&self, p: u64) -> i64 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        Self {
            factors: self.factors.iter().map(|(&p, &k)| (p, k * e)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    /// The p-part `p^{ord_p}` of this rational.
    pub fn p_part(&self, p: u64) -> Self {
        Self::prime_power(p, self.ord(p))
    }

    /// `true` when every stored key is a prime (checks deserialized input).
    pub fn is_well_formed(&self) -> bool {
        self.factors.iter().all(|(&p, &e)| e != 0 && arith::is_prime(p))
    }

    /// Numerator and denominator as big integers.
    pub fn to_fraction(&self) -> (BigUint, BigUint) {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&p, &e) in &self.factors {
            let pe = BigUint::from(p).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        (num, den)
    }
}

impl Mul for &FactoredRational {
    type Output = FactoredRational;
    fn mul(self, rhs: &FactoredRational) -> FactoredRational {
        let mut out = self.clone();
        for (&p, &e) in &rhs.factors {
            out.mul_prime_power(p, e);
        }
        out
    }
}

impl Mul for FactoredRational {
    type Output = FactoredRational;
    fn mul(self, rhs: FactoredRational) -> FactoredRational {
        &self * &rhs
    }
}

impl Div for &FactoredRational {
    type Output = FactoredRational;
    fn div(self, rhs: &FactoredRational) -> FactoredRational {
        self * &rhs.inverse()
    }
}

impl std::iter::Product for FactoredRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.to_fraction();
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = FactoredRational::from_u64(12);
        assert_eq!(a.ord(2), 2);
        assert_eq!(a.ord(3), 1);
        let b = FactoredRational::prime_power(2, -2);
        let c = &a * &b;
        assert_eq!(c, FactoredRational::from_u64(3));
        assert_eq!(format!("{}", b), "1/4");
        assert_eq!(format!("{}", a.pow(-1)), "1/12");
        assert!((&a / &a).is_one());
    }

    #[test]
    fn json_is_prime_keyed() {
        let x = FactoredRational::prime_power(7, 2) * FactoredRational::prime_power(2, -1);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"2":-1,"7":2}"#);
        let back: FactoredRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
