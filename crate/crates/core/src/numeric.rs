//! Exact integers, reduced rationals, digit strings and integer logarithms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A fraction in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidQuery("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `1 / b^n`.
    pub fn inv_pow(b: u64, n: u64) -> Self {
        Rational(BigRational::new(BigInt::one(), pow(b, n)))
    }

    pub fn num(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn den(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.0.is_zero() {
            return Err(Error::InvalidQuery("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    /// `1 - self`, the reflection used to mirror left and right.
    pub fn reflect(&self) -> Self {
        Rational::one() - self
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

    pub fn in_unit_open(&self) -> bool {
        !self.is_negative() && !self.is_zero() && *self < Rational::one()
    }

    /// Length of the interleaved encoding of the pair (num, den).
    pub fn bit_len(&self) -> u64 {
        pair_bits(self.num(), self.den())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d).map_err(|_| bad())
            }
            None => Ok(Rational::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// An open interval with rational endpoints, `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct OpenInterval {
    lo: Rational,
    hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, Error> {
        if lo >= hi {
            return Err(Error::InvalidQuery(format!("empty interval ({lo}, {hi})")));
        }
        Ok(OpenInterval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.lo < *r && *r < self.hi
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

impl FromStr for OpenInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("not an interval: {s:?}")))?;
        let (lo, hi) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("not an interval: {s:?}")))?;
        OpenInterval::new(lo.parse()?, hi.parse()?)
    }
}

/// Digits `D1 D2 ... Dn` of a base-`b` expansion.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DigitString {
    base: u64,
    digits: Vec<u64>,
}

impl DigitString {
    pub fn new(base: u64, digits: Vec<u64>) -> Result<Self, Error> {
        if base < 2 {
            return Err(Error::InvalidQuery(format!("base {base} < 2")));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidQuery(format!("digit {d} not below base {base}")));
        }
        Ok(DigitString { base, digits })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// The rational `(0.D1...Dn)_b`.
    pub fn value(&self) -> Rational {
        let b = BigInt::from(self.base);
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for &d in &self.digits {
            num = num * &b + d;
            den *= &b;
        }
        Rational::new(num, den).expect("positive denominator")
    }

    pub fn parse(base: u64, s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a base-{base} digit string: {s:?}"));
        let digits = if base <= 36 {
            s.trim().chars().map(|c| c.to_digit(36).map(u64::from).ok_or_else(bad)).collect::<Result<Vec<_>, _>>()?
        } else if s.trim().is_empty() {
            Vec::new()
        } else {
            s.trim().split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?
        };
        DigitString::new(base, digits)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base <= 36 {
            for &d in &self.digits {
                let c = std::char::from_digit(d as u32, 36).expect("digit below 36");
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(u64::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The least `k` such that `b^k` is divisible by `a`, or `None` when some
/// prime of `a` does not divide `b`.
pub fn base_transition_factor(a: u64, b: u64) -> Option<u64> {
    assert!(a >= 2 && b >= 2, "bases must be at least 2");
    let fb = factorize(b);
    let mut k = 1;
    for (p, j) in factorize(a) {
        let i = fb.iter().find(|(q, _)| *q == p)?.1;
        k = k.max(u64::from(j.div_ceil(i)));
    }
    Some(k)
}

/// First `n` base-`b` digits of `r ∈ [0,1)`.
pub fn digits_of_rational(r: &Rational, base: u64, n: usize) -> Result<DigitString, Error> {
    if base < 2 {
        return Err(Error::InvalidQuery(format!("base {base} < 2")));
    }
    if r.is_negative() || *r >= Rational::one() {
        return Err(Error::InvalidQuery(format!("{r} is not in [0,1)")));
    }
    let b = BigInt::from(base);
    let den = r.den();
    let mut rem = r.num().clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let (d, m) = (rem * &b).div_rem(den);
        digits.push(d.to_u64().expect("digit below base"));
        rem = m;
    }
    DigitString::new(base, digits)
}

/// `(a+c)/(b+d)`, computed on the lowest-terms components.
pub fn mediant(left: &Rational, right: &Rational) -> Rational {
    Rational::new(left.num() + right.num(), left.den() + right.den()).expect("positive denominator")
}

pub fn pow(b: u64, n: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), n as usize)
}

/// Number of binary digits of `|x|`; zero takes one digit.
pub fn bit_len(x: &BigInt) -> u64 {
    x.bits().max(1)
}

/// Length of the interleaved encoding of an integer pair, plus one sign bit
/// per negative component.
pub fn pair_bits(x: &BigInt, y: &BigInt) -> u64 {
    let sign = u64::from(x.sign() == Sign::Minus) + u64::from(y.sign() == Sign::Minus);
    2 * bit_len(x).max(bit_len(y)) + sign
}

/// Bit length of a single integer, plus one sign bit when negative.
pub fn int_bits(x: &BigInt) -> u64 {
    bit_len(x) + u64::from(x.sign() == Sign::Minus)
}

/// Least `k ≥ 0` with `b^k ≥ x`.
pub fn ceil_log(b: u64, x: &BigInt) -> u64 {
    assert!(b >= 2);
    let mut k = 0;
    let mut p = BigInt::one();
    while p < *x {
        p *= b;
        k += 1;
    }
    k
}

/// Least `k ≥ 0` with `b^k ≥ x` for a rational `x`.
pub fn ceil_log_rat(b: u64, x: &Rational) -> u64 {
    ceil_log(b, &x.ceil())
}
