//! Arbitrary-precision rationals in canonical form.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number. The denominator is always positive and
/// coprime to the numerator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
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

    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    /// Nearest double. Huge values saturate to infinity.
    pub fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => self.0.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Converts a finite double exactly (every finite double is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// Returns `k` when `self == 2^k` exactly.
    pub fn dyadic_log(&self) -> Option<i64> {
        if !self.is_positive() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let is_pow2 = |b: &BigInt| {
            let (_, mag) = b.clone().into_parts();
            mag.count_ones() == 1
        };
        if d.is_one() && is_pow2(n) {
            Some(n.bits() as i64 - 1)
        } else if n.is_one() && is_pow2(d) {
            Some(-(d.bits() as i64 - 1))
        } else {
            None
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
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
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts an integer literal or `p/q` with `q > 0`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let err = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        match t.split_once('/') {
            None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err()),
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
                let q_str = q.trim();
                if q_str.starts_with('+') || q_str.starts_with('-') {
                    return Err(err());
                }
                let q = BigInt::from_str(q_str).map_err(|_| err())?;
                if !q.is_positive() {
                    return Err(err());
                }
                Ok(Rational::new(p, q))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `"p/q"` strings and plain integers.
impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }
        }
        d.deserialize_any(V)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational($tr::$m(self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("4/6").to_string(), "2/3");
        assert_eq!(r("-3").to_string(), "-3");
        assert_eq!(r(" 10/5 ").to_string(), "2");
        assert_eq!(r("-1/2"), Rational::new(-1, 2));
        for bad in ["", "1/0", "1/-2", "a", "1/", "/2", "1.5"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn dyadic_log_exact_powers_only() {
        assert_eq!(r("8").dyadic_log(), Some(3));
        assert_eq!(r("1").dyadic_log(), Some(0));
        assert_eq!(r("1/4").dyadic_log(), Some(-2));
        assert_eq!(r("6").dyadic_log(), None);
        assert_eq!(r("3/4").dyadic_log(), None);
        assert_eq!(r("-2").dyadic_log(), None);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..50).prop_map(|(p, q)| Rational::new(p, q))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert!(a.denom().is_positive());
            prop_assert_eq!(r(&a.to_string()), a);
        }

        #[test]
        fn order_agrees_with_subtraction(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!(a < b, (&b - &a).is_positive());
        }
    }
}
