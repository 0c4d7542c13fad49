//! The oracle abstraction, representation kinds and call instrumentation.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::farey::Position;
use crate::numeric::{int_bits, pair_bits, OpenInterval, Rational};

mod validate;

pub use validate::{validate, Report, Violation};

/// A query or an answer.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Value {
    Int(BigInt),
    Rat(Rational),
    Pair(BigInt, BigInt),
    Bits(Position),
    Interval(OpenInterval),
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Self {
        Value::Int(n.into())
    }

    pub fn pair(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Value::Pair(a.into(), b.into())
    }

    /// Length of the canonical binary encoding.
    pub fn bit_len(&self) -> u64 {
        match self {
            Value::Int(n) => int_bits(n),
            Value::Rat(r) => r.bit_len(),
            Value::Pair(a, b) => pair_bits(a, b),
            Value::Bits(p) => p.len() as u64,
            Value::Interval(i) => i.lo().bit_len() + i.hi().bit_len(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Rat(r) => write!(f, "{r}"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
            Value::Bits(p) => write!(f, "\"{p}\""),
            Value::Interval(i) => write!(f, "{i}"),
        }
    }
}

/// The shape of a representation's queries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QueryShape {
    /// Natural-number queries starting at the given index.
    Index(u64),
    /// Rational queries.
    Rational,
    /// Integer pairs `(p, q)` with `q ≥ 1`.
    Fraction,
    /// Pairs `(b, n)` of a base `b ≥ 2` and an index `n ≥ 1`.
    BaseIndex,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum RepKind {
    DedekindCut,
    Cauchy,
    IncreasingCauchy,
    ConvergingBase(u64),
    FuzzyCut,
    SignedDigit,
    Weihrauch,
    BaseExpansion(u64),
    GrayCode,
    SumBelow(u64),
    SumAbove(u64),
    GeneralBase,
    GeneralSumBelow,
    GeneralSumAbove,
    Beatty,
    Hurwitz,
    LeftBest,
    RightBest,
    CompleteLeftBest,
    CompleteRightBest,
    StandardBaire,
    DualBaire,
    Egyptian,
    FareyEgyptian,
    ContinuedFraction,
    TraceFunction,
    Contractor,
}

const PLAIN_TOKENS: &[(&str, RepKind)] = &[
    ("dedekind", RepKind::DedekindCut),
    ("cauchy", RepKind::Cauchy),
    ("increasing-cauchy", RepKind::IncreasingCauchy),
    ("fuzzy", RepKind::FuzzyCut),
    ("signed", RepKind::SignedDigit),
    ("weihrauch", RepKind::Weihrauch),
    ("gray", RepKind::GrayCode),
    ("generalbase", RepKind::GeneralBase),
    ("gensum-below", RepKind::GeneralSumBelow),
    ("gensum-above", RepKind::GeneralSumAbove),
    ("beatty", RepKind::Beatty),
    ("hurwitz", RepKind::Hurwitz),
    ("left-best", RepKind::LeftBest),
    ("right-best", RepKind::RightBest),
    ("complete-left", RepKind::CompleteLeftBest),
    ("complete-right", RepKind::CompleteRightBest),
    ("baire", RepKind::StandardBaire),
    ("dual-baire", RepKind::DualBaire),
    ("egyptian", RepKind::Egyptian),
    ("farey-egyptian", RepKind::FareyEgyptian),
    ("cf", RepKind::ContinuedFraction),
    ("trace", RepKind::TraceFunction),
    ("contractor", RepKind::Contractor),
];

type Based = fn(u64) -> RepKind;

const BASED_TOKENS: &[(&str, Based)] = &[
    ("convbase", RepKind::ConvergingBase),
    ("base", RepKind::BaseExpansion),
    ("sumbelow", RepKind::SumBelow),
    ("sumabove", RepKind::SumAbove),
];

impl RepKind {
    /// Parse a token such as `cf`, `base10` or `sumbelow2`. A parameterized
    /// token without a number takes `default_base`.
    pub fn parse(token: &str, default_base: Option<u64>) -> Result<Self, Error> {
        let t = token.trim().to_ascii_lowercase();
        if let Some((_, k)) = PLAIN_TOKENS.iter().find(|(s, _)| *s == t) {
            return Ok(*k);
        }
        for (prefix, make) in BASED_TOKENS {
            if let Some(rest) = t.strip_prefix(prefix) {
                let b = if rest.is_empty() {
                    default_base.ok_or_else(|| Error::Parse(format!("{token} needs a base")))?
                } else {
                    match rest.parse::<u64>() {
                        Ok(b) => b,
                        Err(_) => continue,
                    }
                };
                if b < 2 {
                    return Err(Error::Parse(format!("base {b} < 2 in {token}")));
                }
                return Ok(make(b));
            }
        }
        Err(Error::Parse(format!("unknown representation {token:?}")))
    }

    pub fn token(&self) -> String {
        match self {
            RepKind::ConvergingBase(b) => format!("convbase{b}"),
            RepKind::BaseExpansion(b) => format!("base{b}"),
            RepKind::SumBelow(b) => format!("sumbelow{b}"),
            RepKind::SumAbove(b) => format!("sumabove{b}"),
            k => PLAIN_TOKENS.iter().find(|(_, p)| p == k).expect("every plain kind has a token").0.to_string(),
        }
    }

    /// Every kind, with parameterized kinds instantiated at the given bases.
    pub fn catalogue(bases: &[u64]) -> Vec<RepKind> {
        let mut out = Vec::new();
        for (_, k) in PLAIN_TOKENS {
            out.push(*k);
        }
        for (_, make) in BASED_TOKENS {
            for &b in bases {
                out.push(make(b));
            }
        }
        out
    }

    pub fn base(&self) -> Option<u64> {
        match *self {
            RepKind::ConvergingBase(b) | RepKind::BaseExpansion(b) | RepKind::SumBelow(b) | RepKind::SumAbove(b) => {
                Some(b)
            }
            _ => None,
        }
    }

    pub fn query_shape(&self) -> QueryShape {
        use RepKind::*;
        match self {
            DedekindCut | TraceFunction | Contractor => QueryShape::Rational,
            FuzzyCut => QueryShape::Fraction,
            GeneralBase | GeneralSumBelow | GeneralSumAbove => QueryShape::BaseIndex,
            Cauchy | IncreasingCauchy | ConvergingBase(_) | SignedDigit | BaseExpansion(_) | Beatty | Egyptian
            | FareyEgyptian | ContinuedFraction => QueryShape::Index(1),
            Weihrauch | GrayCode | SumBelow(_) | SumAbove(_) | Hurwitz | LeftBest | RightBest | CompleteLeftBest
            | CompleteRightBest | StandardBaire | DualBaire => QueryShape::Index(0),
        }
    }

    /// Whether the number determines the oracle uniquely.
    pub fn is_unique(&self) -> bool {
        use RepKind::*;
        !matches!(
            self,
            Cauchy
                | IncreasingCauchy
                | ConvergingBase(_)
                | FuzzyCut
                | SignedDigit
                | Weihrauch
                | LeftBest
                | RightBest
                | TraceFunction
                | Contractor
        )
    }

    /// The kind of the same oracle read as a representation of `1 - α`.
    pub fn mirror(&self) -> Option<RepKind> {
        use RepKind::*;
        Some(match *self {
            DedekindCut => DedekindCut,
            BaseExpansion(b) => BaseExpansion(b),
            SumBelow(b) => SumAbove(b),
            SumAbove(b) => SumBelow(b),
            GeneralSumBelow => GeneralSumAbove,
            GeneralSumAbove => GeneralSumBelow,
            LeftBest => RightBest,
            RightBest => LeftBest,
            CompleteLeftBest => CompleteRightBest,
            CompleteRightBest => CompleteLeftBest,
            StandardBaire => DualBaire,
            DualBaire => StandardBaire,
            TraceFunction => TraceFunction,
            Contractor => Contractor,
            _ => return None,
        })
    }

    pub(crate) fn reflect_query(&self, q: &Value) -> Value {
        match (self, q) {
            (RepKind::DedekindCut | RepKind::TraceFunction | RepKind::Contractor, Value::Rat(r)) => {
                Value::Rat(r.reflect())
            }
            _ => q.clone(),
        }
    }

    pub(crate) fn reflect_answer(&self, a: Value) -> Value {
        use RepKind::*;
        match (self, a) {
            (DedekindCut, Value::Int(b)) => Value::Int(BigInt::one() - b),
            (BaseExpansion(base), Value::Int(d)) => Value::Int(BigInt::from(*base - 1) - d),
            (
                LeftBest | RightBest | CompleteLeftBest | CompleteRightBest | TraceFunction | Contractor,
                Value::Rat(r),
            ) => Value::Rat(r.reflect()),
            (_, a) => a,
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// A total function from queries to answers representing some irrational.
pub trait Oracle {
    fn kind(&self) -> RepKind;
    fn query(&self, q: &Value) -> Result<Value, Error>;
}

impl<T: Oracle + ?Sized> Oracle for Box<T> {
    fn kind(&self) -> RepKind {
        (**self).kind()
    }
    fn query(&self, q: &Value) -> Result<Value, Error> {
        (**self).query(q)
    }
}

impl<T: Oracle + ?Sized> Oracle for &T {
    fn kind(&self) -> RepKind {
        (**self).kind()
    }
    fn query(&self, q: &Value) -> Result<Value, Error> {
        (**self).query(q)
    }
}

impl<T: Oracle + ?Sized> Oracle for Rc<T> {
    fn kind(&self) -> RepKind {
        (**self).kind()
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        (**self).query(q)
    }
}

/// The index in an index query, checked against the first valid index.
pub fn index_arg(q: &Value, min: u64) -> Result<u64, Error> {
    match q {
        Value::Int(n) => n
            .to_u64()
            .filter(|&n| n >= min)
            .ok_or_else(|| Error::InvalidQuery(format!("index {n} outside the domain (from {min})"))),
        _ => Err(Error::InvalidQuery(format!("expected an index, got {q}"))),
    }
}

/// Like [`index_arg`], for kinds defined at every natural number however large.
pub fn big_index_arg(q: &Value, min: u64) -> Result<BigInt, Error> {
    match q {
        Value::Int(n) if *n >= BigInt::from(min) => Ok(n.clone()),
        Value::Int(n) => Err(Error::InvalidQuery(format!("index {n} outside the domain (from {min})"))),
        _ => Err(Error::InvalidQuery(format!("expected an index, got {q}"))),
    }
}

/// The rational in a rational query.
pub fn rational_arg(q: &Value) -> Result<&Rational, Error> {
    match q {
        Value::Rat(r) => Ok(r),
        _ => Err(Error::InvalidQuery(format!("expected a rational, got {q}"))),
    }
}

/// The `(base, index)` of a general-base query.
pub fn base_index_arg(q: &Value) -> Result<(BigInt, u64), Error> {
    match q {
        Value::Pair(b, n) => {
            let b = Some(b.clone()).filter(|b| *b >= BigInt::from(2));
            let n = n.to_u64().filter(|&n| n >= 1);
            b.zip(n).ok_or_else(|| Error::InvalidQuery(format!("expected (base >= 2, index >= 1), got {q}")))
        }
        _ => Err(Error::InvalidQuery(format!("expected (base, index), got {q}"))),
    }
}

/// Typed queries that check the local shape of each answer.
pub trait OracleExt: Oracle {
    fn ask_int(&self, q: Value) -> Result<BigInt, Error> {
        match self.query(&q)? {
            Value::Int(n) => Ok(n),
            a => Err(Error::malformed(&q, format!("expected an integer, got {a}"))),
        }
    }

    fn ask_index(&self, n: u64) -> Result<BigInt, Error> {
        self.ask_int(Value::int(n))
    }

    fn ask_bit(&self, q: Value) -> Result<bool, Error> {
        let n = self.ask_int(q.clone())?;
        if n.is_zero() {
            Ok(false)
        } else if n.is_one() {
            Ok(true)
        } else {
            Err(Error::malformed(&q, format!("expected a bit, got {n}")))
        }
    }

    /// A digit in `0..base`.
    fn ask_digit(&self, q: Value, base: u64) -> Result<u64, Error> {
        let n = self.ask_int(q.clone())?;
        n.to_u64().filter(|&d| d < base).ok_or_else(|| Error::malformed(&q, format!("{n} is not a base-{base} digit")))
    }

    fn ask_rat(&self, q: Value) -> Result<Rational, Error> {
        match self.query(&q)? {
            Value::Rat(r) => Ok(r),
            a => Err(Error::malformed(&q, format!("expected a rational, got {a}"))),
        }
    }

    fn ask_rat_at(&self, n: u64) -> Result<Rational, Error> {
        self.ask_rat(Value::int(n))
    }

    fn ask_bits(&self, q: Value) -> Result<Position, Error> {
        match self.query(&q)? {
            Value::Bits(p) => Ok(p),
            a => Err(Error::malformed(&q, format!("expected a bit string, got {a}"))),
        }
    }

    fn ask_interval(&self, q: Value) -> Result<OpenInterval, Error> {
        match self.query(&q)? {
            Value::Interval(i) => Ok(i),
            a => Err(Error::malformed(&q, format!("expected an interval, got {a}"))),
        }
    }

    /// Dedekind query: `true` when `r` lies above the number.
    fn above(&self, r: &Rational) -> Result<bool, Error> {
        self.ask_bit(Value::Rat(r.clone()))
    }
}

impl<T: Oracle + ?Sized> OracleExt for T {}

/// The same oracle read as a representation of `1 - α`.
pub struct Reflected<O> {
    inner: O,
    kind: RepKind,
}

impl<O: Oracle> Reflected<O> {
    pub fn new(inner: O) -> Result<Self, Error> {
        let kind = inner
            .kind()
            .mirror()
            .ok_or_else(|| Error::InvalidQuery(format!("{} has no mirror image", inner.kind())))?;
        Ok(Reflected { inner, kind })
    }
}

impl<O: Oracle> Oracle for Reflected<O> {
    fn kind(&self) -> RepKind {
        self.kind
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let src = self.inner.kind();
        let a = self.inner.query(&src.reflect_query(q))?;
        Ok(src.reflect_answer(a))
    }
}

/// Oracle-call accounting for one conversion run.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OracleStats {
    pub calls: u64,
    pub distinct_calls: u64,
    pub max_query_bits: u64,
    pub max_answer_bits: u64,
}

impl OracleStats {
    /// Combined accounting of several sources.
    pub fn merge(&self, other: &OracleStats) -> OracleStats {
        OracleStats {
            calls: self.calls + other.calls,
            distinct_calls: self.distinct_calls + other.distinct_calls,
            max_query_bits: self.max_query_bits.max(other.max_query_bits),
            max_answer_bits: self.max_answer_bits.max(other.max_answer_bits),
        }
    }
}

#[derive(Default)]
struct Record {
    stats: OracleStats,
    seen: HashSet<Value>,
    memo: Option<HashMap<Value, Value>>,
}

/// A shared view of an instrumented oracle's accounting.
#[derive(Clone)]
pub struct StatsHandle(Rc<RefCell<Record>>);

impl StatsHandle {
    pub fn stats(&self) -> OracleStats {
        self.0.borrow().stats
    }

    /// Start a fresh run: zero the counters and forget memoized answers.
    pub fn reset(&self) {
        let mut r = self.0.borrow_mut();
        r.stats = OracleStats::default();
        r.seen.clear();
        if let Some(m) = r.memo.as_mut() {
            m.clear();
        }
    }
}

/// Wraps an oracle and counts every query put to it.
pub struct InstrumentedOracle {
    inner: Box<dyn Oracle>,
    record: Rc<RefCell<Record>>,
}

pub fn instrument(o: impl Oracle + 'static, memoize: bool) -> InstrumentedOracle {
    InstrumentedOracle::new(Box::new(o), memoize)
}

impl InstrumentedOracle {
    pub fn new(inner: Box<dyn Oracle>, memoize: bool) -> Self {
        let record = Record { memo: memoize.then(HashMap::new), ..Record::default() };
        InstrumentedOracle { inner, record: Rc::new(RefCell::new(record)) }
    }

    pub fn stats(&self) -> OracleStats {
        self.record.borrow().stats
    }

    pub fn handle(&self) -> StatsHandle {
        StatsHandle(Rc::clone(&self.record))
    }

    pub fn reset(&self) {
        self.handle().reset();
    }
}

impl Oracle for InstrumentedOracle {
    fn kind(&self) -> RepKind {
        self.inner.kind()
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        {
            let mut r = self.record.borrow_mut();
            r.stats.calls += 1;
            r.stats.max_query_bits = r.stats.max_query_bits.max(q.bit_len());
            if r.seen.insert(q.clone()) {
                r.stats.distinct_calls += 1;
            }
            if let Some(a) = r.memo.as_ref().and_then(|m| m.get(q)) {
                let a = a.clone();
                r.stats.max_answer_bits = r.stats.max_answer_bits.max(a.bit_len());
                return Ok(a);
            }
        }
        let a = self.inner.query(q)?;
        let mut r = self.record.borrow_mut();
        r.stats.max_answer_bits = r.stats.max_answer_bits.max(a.bit_len());
        if let Some(m) = r.memo.as_mut() {
            m.insert(q.clone(), a.clone());
        }
        Ok(a)
    }
}
