//! Cauchy sequences, fuzzy cuts, signed digits and converging base sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{expect_kind, Source};
use crate::error::Error;
use crate::numeric::{ceil_log, pow, OpenInterval, Rational};
use crate::reps::{index_arg, Oracle, OracleExt, RepKind, Value};

/// Intervals `(C(n) - 1/n, C(n) + 1/n)`.
pub struct CauchyToWeihrauch {
    src: Source,
}

impl CauchyToWeihrauch {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Cauchy, "Cauchy")?;
        Ok(CauchyToWeihrauch { src })
    }
}

impl Oracle for CauchyToWeihrauch {
    fn kind(&self) -> RepKind {
        RepKind::Weihrauch
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        if n == 0 {
            return Ok(Value::Interval(OpenInterval::new(Rational::zero(), Rational::one())?));
        }
        let c = self.src.ask_rat_at(n)?;
        let w = Rational::new(1, n)?;
        Ok(Value::Interval(OpenInterval::new(&c - &w, &c + &w)?))
    }
}

/// `D(p, q) = 0` iff `C(q) ≤ p/q`.
pub struct CauchyToFuzzy {
    src: Source,
}

impl CauchyToFuzzy {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Cauchy, "Cauchy")?;
        Ok(CauchyToFuzzy { src })
    }
}

impl Oracle for CauchyToFuzzy {
    fn kind(&self) -> RepKind {
        RepKind::FuzzyCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let (p, den) = match q {
            Value::Pair(p, d) if *d >= BigInt::one() => (p, d),
            _ => return Err(Error::InvalidQuery(format!("expected (p, q) with q ≥ 1, got {q}"))),
        };
        let n = index_arg(&Value::Int(den.clone()), 1)?;
        let c = self.src.ask_rat_at(n)?;
        let r = Rational::new(p.clone(), den.clone())?;
        Ok(Value::int(u8::from(c > r)))
    }
}

/// Where the signed-digit construction stands after `n` digits:
/// `a / 2^n` lies within `2^-n` of the number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedState {
    pub n: u64,
    pub a: BigInt,
}

impl SignedState {
    pub fn start() -> Self {
        SignedState { n: 1, a: BigInt::one() }
    }

    pub fn sum(&self) -> Rational {
        Rational::new(self.a.clone(), pow(2, self.n)).expect("nonzero")
    }

    /// Three fuzzy queries decide the next digit.
    pub fn step(&mut self, fuzzy: &dyn Oracle) -> Result<i8, Error> {
        let a = &self.a;
        let d = |p: BigInt, k: u64| fuzzy.ask_bit(Value::Pair(p, pow(2, k)));
        let mid = d(a * 2, self.n + 1)?;
        let lo = d(a * 4 - 1, self.n + 2)?;
        let hi = d(a * 4 + 1, self.n + 2)?;
        if !lo && hi {
            return Err(Error::malformed(
                Value::Pair(a * 4 + 1, pow(2, self.n + 2)),
                "fuzzy cut puts the number both below and above the same point",
            ));
        }
        let digit = match (mid, lo, hi) {
            (false, false, _) => -1,
            (false, true, _) => 0,
            (true, _, true) => 1,
            (true, _, false) => 0,
        };
        self.a = a * 2 + digit;
        self.n += 1;
        Ok(digit)
    }
}

/// Signed binary digits from a fuzzy cut, `3(n-1)` calls for digit `n`.
pub struct FuzzyToSigned {
    src: Source,
}

impl FuzzyToSigned {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::FuzzyCut, "fuzzy cut")?;
        Ok(FuzzyToSigned { src })
    }

    /// The digits `S(1..=n)` in one pass.
    pub fn digits(&self, n: u64) -> Result<Vec<i8>, Error> {
        let mut st = SignedState::start();
        let mut out = vec![1];
        while st.n < n {
            out.push(st.step(&*self.src)?);
        }
        out.truncate(n as usize);
        Ok(out)
    }
}

impl Oracle for FuzzyToSigned {
    fn kind(&self) -> RepKind {
        RepKind::SignedDigit
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let d = self.digits(n)?;
        Ok(Value::int(d[n as usize - 1]))
    }
}

/// `C(n) = Σ_{i ≤ ⌈log₂ n⌉} S(i) 2^-i`.
pub struct SignedToCauchy {
    src: Source,
}

impl SignedToCauchy {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::SignedDigit, "signed-digit")?;
        Ok(SignedToCauchy { src })
    }
}

impl Oracle for SignedToCauchy {
    fn kind(&self) -> RepKind {
        RepKind::Cauchy
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let k = ceil_log(2, &BigInt::from(n));
        let mut a = BigInt::zero();
        for i in 1..=k {
            let s = self.src.ask_index(i)?;
            if s.magnitude() > &One::one() {
                return Err(Error::malformed(Value::int(i), format!("{s} is not a signed digit")));
            }
            a = a * 2 + s;
        }
        Ok(Value::Rat(Rational::new(a, pow(2, k))?))
    }
}

/// `Ĉ(n) = C(2^(n+2)) - 2^-(n+2) - 2^-(n+1)`.
pub struct CauchyToIncreasing {
    src: Source,
}

impl CauchyToIncreasing {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Cauchy, "Cauchy")?;
        Ok(CauchyToIncreasing { src })
    }
}

impl Oracle for CauchyToIncreasing {
    fn kind(&self) -> RepKind {
        RepKind::IncreasingCauchy
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let c = self.src.ask_rat(Value::Int(pow(2, n + 2)))?;
        Ok(Value::Rat(c - Rational::inv_pow(2, n + 2) - Rational::inv_pow(2, n + 1)))
    }
}

/// `C(n) = A(n) b^-n`.
pub struct ConvbaseToCauchy {
    src: Source,
    base: u64,
}

impl ConvbaseToCauchy {
    pub fn new(src: Source) -> Result<Self, Error> {
        let base = match src.kind() {
            RepKind::ConvergingBase(b) => b,
            _ => return Err(expect_kind(&*src, false, "converging base").unwrap_err()),
        };
        Ok(ConvbaseToCauchy { src, base })
    }
}

impl Oracle for ConvbaseToCauchy {
    fn kind(&self) -> RepKind {
        RepKind::Cauchy
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let a = self.src.ask_index(n)?;
        Ok(Value::Rat(Rational::new(a, pow(self.base, n))?))
    }
}

/// Long division of `p/q` in base `b`: after `n` steps
/// `p/q = X b^-n + Y b^-n / q` with `0 ≤ Y < q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExtract {
    pub x: BigInt,
    pub y: BigInt,
    pub n: u64,
    q: BigInt,
}

impl DigitExtract {
    pub fn new(r: &Rational) -> Self {
        let (x, y) = r.num().div_mod_floor(r.den());
        DigitExtract { x, y, n: 0, q: r.den().clone() }
    }

    pub fn step(&mut self, b: u64) {
        let (d, y) = (&self.y * b).div_mod_floor(&self.q);
        self.x = &self.x * b + d;
        self.y = y;
        self.n += 1;
    }

    /// `X b^-n + Y b^-n / q`.
    pub fn value(&self, b: u64) -> Rational {
        let bn = pow(b, self.n);
        Rational::new(&self.x * &self.q + &self.y, bn * &self.q).expect("nonzero")
    }
}

/// `A(n) = X_k b^(n-k)` where `X_k b^-k` truncates `C(2n)` to
/// `k = ⌈log_b 2n⌉` places.
pub struct CauchyToConvbase {
    src: Source,
    base: u64,
}

impl CauchyToConvbase {
    pub fn new(src: Source, base: u64) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Cauchy, "Cauchy")?;
        if base < 2 {
            return Err(Error::InvalidQuery(format!("base {base} below 2")));
        }
        Ok(CauchyToConvbase { src, base })
    }
}

impl Oracle for CauchyToConvbase {
    fn kind(&self) -> RepKind {
        RepKind::ConvergingBase(self.base)
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let c = self.src.ask_rat_at(2 * n)?;
        let k = ceil_log(self.base, &BigInt::from(2 * n));
        let mut ex = DigitExtract::new(&c);
        for _ in 0..k {
            ex.step(self.base);
        }
        Ok(Value::Int(ex.x * pow(self.base, n - k)))
    }
}
