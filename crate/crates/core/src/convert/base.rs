//! Base-b expansions, Gray code and sum approximations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{digit_term, expect_kind, mirrored, split_term, Memo, Side, Source};
use crate::error::Error;
use crate::numeric::{base_transition_factor, ceil_log, pow, Rational};
use crate::reps::{index_arg, Oracle, OracleExt, RepKind, Value};

fn base_of(src: &dyn Oracle, wanted: &str) -> Result<u64, Error> {
    match src.kind() {
        RepKind::BaseExpansion(b) if wanted == "base" => Ok(b),
        RepKind::SumBelow(b) | RepKind::SumAbove(b) if wanted == "sum" => Ok(b),
        _ => Err(expect_kind(src, false, wanted).unwrap_err()),
    }
}

fn factor(a: u64, b: u64) -> Result<u64, Error> {
    base_transition_factor(a, b).ok_or(Error::MissingTransitionFactor { a, b })
}

/// `(0.D1…Dk)_b` scaled by `b^k`, from `k` digit queries.
fn prefix(src: &dyn Oracle, b: u64, k: u64) -> Result<BigInt, Error> {
    let mut x = BigInt::zero();
    for i in 1..=k {
        x = x * b + src.ask_digit(Value::int(i), b)?;
    }
    Ok(x)
}

/// `C(n) = (0.D1…Dn)_b`.
pub struct BaseToCauchy {
    src: Source,
    base: u64,
}

impl BaseToCauchy {
    pub fn new(src: Source) -> Result<Self, Error> {
        let base = base_of(&*src, "base")?;
        Ok(BaseToCauchy { src, base })
    }
}

impl Oracle for BaseToCauchy {
    fn kind(&self) -> RepKind {
        RepKind::Cauchy
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        Ok(Value::Rat(Rational::new(prefix(&*self.src, self.base, n)?, pow(self.base, n))?))
    }
}

/// Base-`a` digits from base-`b` digits; digit `n` reads `kn` source digits.
pub struct BaseToBase {
    src: Source,
    a: u64,
    b: u64,
    k: u64,
}

impl BaseToBase {
    pub fn new(src: Source, a: u64) -> Result<Self, Error> {
        let b = base_of(&*src, "base")?;
        let k = factor(a, b)?;
        Ok(BaseToBase { src, a, b, k })
    }

    pub fn factor(&self) -> u64 {
        self.k
    }
}

impl Oracle for BaseToBase {
    fn kind(&self) -> RepKind {
        RepKind::BaseExpansion(self.a)
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let x = prefix(&*self.src, self.b, self.k * n)?;
        let p = (x * pow(self.a, n)).div_floor(&pow(self.b, self.k * n));
        Ok(Value::Int(p.mod_floor(&BigInt::from(self.a))))
    }
}

/// `E(1) = G(0)`, `E(n+1) = E(n) xor G(n)`.
pub struct GrayToBase2 {
    src: Source,
}

impl GrayToBase2 {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::GrayCode, "Gray code")?;
        Ok(GrayToBase2 { src })
    }
}

impl Oracle for GrayToBase2 {
    fn kind(&self) -> RepKind {
        RepKind::BaseExpansion(2)
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let mut e = false;
        for i in 0..n {
            e ^= self.src.ask_bit(Value::int(i))?;
        }
        Ok(Value::int(u8::from(e)))
    }
}

/// `G(0) = E(1)`, `G(n) = E(n) xor E(n+1)`.
pub struct Base2ToGray {
    src: Source,
}

impl Base2ToGray {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::BaseExpansion(2), "base-2")?;
        Ok(Base2ToGray { src })
    }
}

impl Oracle for Base2ToGray {
    fn kind(&self) -> RepKind {
        RepKind::GrayCode
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let next = self.src.ask_bit(Value::int(n + 1))?;
        let here = if n == 0 { false } else { self.src.ask_bit(Value::int(n))? };
        Ok(Value::int(u8::from(here ^ next)))
    }
}

/// The Gray code of the first `n` bits.
pub fn base2_to_gray(bits: &[u8]) -> Vec<u8> {
    let mut prev = 0;
    bits.iter()
        .map(|&b| {
            let g = prev ^ b;
            prev = b;
            g
        })
        .collect()
}

/// Base-`a` sum approximation from base-`b` terms on the same side.
pub fn sum_to_sum(src: Source, a: u64) -> Result<Source, Error> {
    let b = base_of(&*src, "sum")?;
    let k = factor(a, b)?;
    let side = if matches!(src.kind(), RepKind::SumBelow(_)) { Side::LeftOrBelow } else { Side::RightOrAbove };
    mirrored(side, src, |s| Ok(Box::new(SumBelowToSumBelow { src: s, a, b, k })))
}

struct SumBelowToSumBelow {
    src: Source,
    a: u64,
    b: u64,
    k: u64,
}

impl SumBelowToSumBelow {
    /// The next nonzero base-`a` digit after position `p`, as `(D, position)`.
    fn next(&self, src: &dyn Oracle, sums: &mut PartialSums<'_>, p: u64) -> Result<(u64, u64), Error> {
        let (k, a, b) = (self.k, self.a, self.b);
        let q = Value::int(k * p + 1);
        let (_, l) = split_term(&src.ask_rat(q.clone())?, b, &q)?;
        let m = ceil_log(a, &BigInt::from(b));
        let r = sums.through(k * l * m)?;
        for pos in p + 1..=l * m {
            let d = (r.num() * pow(a, pos) / r.den()).mod_floor(&BigInt::from(a));
            if !d.is_zero() {
                return Ok((d.to_u64().expect("digit"), pos));
            }
        }
        Err(Error::malformed(q, format!("no nonzero base-{a} digit found by position {}", l * m)))
    }
}

/// Running sums of a sum approximation, extended on demand.
struct PartialSums<'a> {
    src: &'a dyn Oracle,
    b: u64,
    next: u64,
    last: u64,
    sum: Rational,
    pending: Option<(u64, u64)>,
}

impl<'a> PartialSums<'a> {
    fn new(src: &'a dyn Oracle, b: u64) -> Self {
        PartialSums { src, b, next: 1, last: 0, sum: Rational::zero(), pending: None }
    }

    /// The sum of all terms with exponent at most `reach`.
    fn through(&mut self, reach: u64) -> Result<Rational, Error> {
        loop {
            if let Some((d, e)) = self.pending {
                if e > reach {
                    break;
                }
                self.sum = &self.sum + &digit_term(d, self.b, e);
                self.pending = None;
            }
            if self.last >= reach {
                break;
            }
            let q = Value::int(self.next);
            self.next += 1;
            let (d, e) = split_term(&self.src.ask_rat(q.clone())?, self.b, &q)?;
            if e <= self.last {
                return Err(Error::malformed(q, "term exponents must increase"));
            }
            self.last = e;
            self.pending = Some((d, e));
        }
        Ok(self.sum.clone())
    }
}

impl Oracle for SumBelowToSumBelow {
    fn kind(&self) -> RepKind {
        RepKind::SumBelow(self.a)
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let memo = Memo::new(&*self.src);
        let mut sums = PartialSums::new(&memo, self.b);
        let mut term = Rational::zero();
        let mut p = 0;
        for _ in 0..n {
            let (d, pos) = self.next(&memo, &mut sums, p)?;
            term = digit_term(d, self.a, pos);
            p = pos;
        }
        Ok(Value::Rat(term))
    }
}

/// Base-`a` digits from a base-`b` sum approximation; at most `kn` calls.
pub fn sum_to_base(src: Source, a: u64) -> Result<Source, Error> {
    let b = base_of(&*src, "sum")?;
    let k = factor(a, b)?;
    let side = if matches!(src.kind(), RepKind::SumBelow(_)) { Side::LeftOrBelow } else { Side::RightOrAbove };
    mirrored(side, src, |s| Ok(Box::new(SumBelowToBase { src: s, a, b, k })))
}

struct SumBelowToBase {
    src: Source,
    a: u64,
    b: u64,
    k: u64,
}

impl Oracle for SumBelowToBase {
    fn kind(&self) -> RepKind {
        RepKind::BaseExpansion(self.a)
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let r = PartialSums::new(&*self.src, self.b).through(self.k * n)?;
        let p = r.num() * pow(self.a, n) / r.den();
        Ok(Value::Int(p.mod_floor(&BigInt::from(self.a))))
    }
}

/// Base-`b` digits read off a general base expansion.
pub struct GeneralBaseToBase {
    src: Source,
    base: u64,
}

impl GeneralBaseToBase {
    pub fn new(src: Source, base: u64) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::GeneralBase, "general base")?;
        Ok(GeneralBaseToBase { src, base })
    }
}

impl Oracle for GeneralBaseToBase {
    fn kind(&self) -> RepKind {
        RepKind::BaseExpansion(self.base)
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        Ok(Value::int(self.src.ask_digit(Value::pair(self.base, n), self.base)?))
    }
}

/// Base-`b` sum terms read off a general sum approximation.
pub struct GenSumToSum {
    src: Source,
    base: u64,
    below: bool,
}

impl GenSumToSum {
    pub fn new(src: Source, base: u64) -> Result<Self, Error> {
        let below = match src.kind() {
            RepKind::GeneralSumBelow => true,
            RepKind::GeneralSumAbove => false,
            _ => return Err(expect_kind(&*src, false, "general sum").unwrap_err()),
        };
        Ok(GenSumToSum { src, base, below })
    }
}

impl Oracle for GenSumToSum {
    fn kind(&self) -> RepKind {
        if self.below {
            RepKind::SumBelow(self.base)
        } else {
            RepKind::SumAbove(self.base)
        }
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        if n == 0 {
            return Ok(Value::Rat(Rational::zero()));
        }
        Ok(Value::Rat(self.src.ask_rat(Value::pair(self.base, n))?))
    }
}
