//! Exact rational numbers.
//!
//! [`Rat`] wraps a GMP rational, which keeps every value in lowest terms with
//! a positive denominator after each operation.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(Rational);

/// Binary operation selector for [`rat_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Rat {
    pub fn zero() -> Self {
        Rat(Rational::new())
    }

    pub fn one() -> Self {
        Rat(Rational::from(1))
    }

    pub fn from_int<T: Into<Integer>>(n: T) -> Self {
        Rat(Rational::from(n.into()))
    }

    /// `num / den`; fails when `den` is zero.
    pub fn new<N: Into<Integer>, D: Into<Integer>>(num: N, den: D) -> Result<Self> {
        let den = den.into();
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(Rational::from((num.into(), den))))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0().is_eq()
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0().is_lt()
    }

    pub fn abs(&self) -> Self {
        Rat(Rational::from(self.0.abs_ref()))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(Rational::from(self.0.recip_ref())))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(Rational::from(&self.0 / &rhs.0)))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 {
            return self.recip()?.pow(-exp);
        }
        Ok(Rat(Rational::from(rug::ops::Pow::pow(&self.0, exp as u32))))
    }

    /// Floor of the value as an integer.
    pub fn floor(&self) -> Integer {
        Integer::from(self.0.floor_ref())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Nearest binary float with `prec` bits of mantissa.
    pub fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.0)
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }
}

impl From<Rational> for Rat {
    fn from(r: Rational) -> Self {
        Rat(r)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Self {
        Rat::from_int(n)
    }
}

impl From<Integer> for Rat {
    fn from(n: Integer) -> Self {
        Rat(Rational::from(n))
    }
}

/// Exact `a op b`.
pub fn rat_arith(a: &Rat, b: &Rat, op: ArithOp) -> Result<Rat> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// `(2j - 1)!!`, the product of the odd numbers up to `2j - 1`; `(-1)!! = 1`.
pub fn double_factorial(j: u32) -> Rat {
    let mut acc = Integer::from(1);
    for odd in (1..2 * j).step_by(2) {
        acc *= odd;
    }
    Rat::from(acc)
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Rising factorial `x (x + 1) ... (x + n - 1)`.
pub fn rising_factorial(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += &Rat::one();
    }
    acc
}

impl fmt::Display for Rat {
    /// `p/q` with the denominator omitted when it is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<Integer> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MalformedRational(whole.to_string()));
    }
    Integer::from_str_radix(s, 10).map_err(|_| Error::MalformedRational(whole.to_string()))
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p`, `-p`, `p/q` and `-p/q` with decimal digits and `q > 0`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let (negative, unsigned) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body),
        };
        let (num, den) = match unsigned.split_once('/') {
            Some((p, q)) => (parse_digits(p, s)?, parse_digits(q, s)?),
            None => (parse_digits(unsigned, s)?, Integer::from(1)),
        };
        if den == 0 {
            return Err(Error::MalformedRational(s.to_string()));
        }
        let num = if negative { -num } else { num };
        Rat::new(num, den)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(Rational::from(&self.0 $op &rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    /// Panics on division by zero; use [`Rat::checked_div`] for a fallible form.
    fn div(self, rhs: &Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        &self / &rhs
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(Rational::from(-&self.0))
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn canonical(r: &Rat) -> bool {
        let g = Integer::from(r.numer().gcd_ref(r.denom()));
        *r.denom() > 0 && (r.is_zero() && *r.denom() == 1 || g == 1)
    }

    #[test]
    fn additive_inverse_is_zero() {
        let sum = rat_arith(&Rat::frac(1, 6), &Rat::frac(-1, 6), ArithOp::Add).unwrap();
        assert!(sum.is_zero());
        assert!(canonical(&sum));
    }

    #[test]
    fn multiplicative_identity() {
        let x = Rat::frac(-1, 2835);
        assert_eq!(rat_arith(&x, &Rat::one(), ArithOp::Mul).unwrap(), x);
    }

    #[test]
    fn lcm_sum_of_appendix_terms() {
        // lcm(37800, 64800) = 453600; -12/453600 + 7/453600 = -5/453600
        let got = rat_arith(&Rat::frac(-1, 37800), &Rat::frac(1, 64800), ArithOp::Add).unwrap();
        assert_eq!(got, Rat::frac(-1, 90720));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            rat_arith(&Rat::one(), &Rat::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        assert!(Rat::new(1, 0).is_err());
        assert!(Rat::zero().recip().is_err());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(0), Rat::one());
        assert_eq!(double_factorial(1), Rat::one());
        assert_eq!(double_factorial(2), Rat::from(3u32));
        assert_eq!(double_factorial(4), Rat::from(7 * 5 * 3u32));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Rat::frac(-13, 1120).to_string(), "-13/1120");
        assert_eq!(Rat::frac(4, 2).to_string(), "2");
        assert_eq!("-13/1120".parse::<Rat>().unwrap(), Rat::frac(-13, 1120));
        assert_eq!(" 6/4 ".parse::<Rat>().unwrap(), Rat::frac(3, 2));
        for bad in ["", "1/0", "1/-2", "--1", "1.5", "a/b", "1/", "/2", "+3", "1 /2"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} should be rejected");
        }
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(p, q)| Rat::frac(p, q))
    }

    proptest! {
        #[test]
        fn operations_stay_canonical(a in arb_rat(), b in arb_rat()) {
            for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
                if let Ok(r) = rat_arith(&a, &b, op) {
                    prop_assert!(canonical(&r));
                }
            }
        }

        #[test]
        fn add_then_sub_is_identity(a in arb_rat(), b in arb_rat()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn display_round_trips(a in arb_rat()) {
            prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
        }
    }
}
