//! Checking an oracle against the defining condition of its kind.

#![allow(clippy::result_large_err)]

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Oracle, RepKind, Value};
use crate::farey::{locate, node_at, Endpoint, FareyPair};
use crate::numeric::{pow, Rational};
use crate::reference::Surd;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub query: Value,
    pub answer: Option<Value>,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub kind: RepKind,
    pub checked: u64,
    pub violation: Option<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "{}: pass ({} queries)", self.kind, self.checked),
            Some(v) => {
                write!(f, "{}: fail at {}", self.kind, v.query)?;
                if let Some(a) = &v.answer {
                    write!(f, " (answer {a})")?;
                }
                write!(f, ": {}", v.reason)
            }
        }
    }
}

type Check = Result<(), Violation>;
type Answered<T> = (Vec<Value>, Vec<Value>, Vec<T>);

struct Checker<'a> {
    oracle: &'a dyn Oracle,
    checked: u64,
}

fn fail(query: &Value, answer: &Value, reason: impl Into<String>) -> Violation {
    Violation { query: query.clone(), answer: Some(answer.clone()), reason: reason.into() }
}

fn frac(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

impl Checker<'_> {
    fn ask(&mut self, q: Value) -> Result<(Value, Value), Violation> {
        self.checked += 1;
        match self.oracle.query(&q) {
            Ok(a) => Ok((q, a)),
            Err(e) => Err(Violation { query: q, answer: None, reason: e.to_string() }),
        }
    }

    fn int(&mut self, q: Value) -> Result<(Value, Value, BigInt), Violation> {
        let (q, a) = self.ask(q)?;
        match &a {
            Value::Int(n) => {
                let n = n.clone();
                Ok((q, a, n))
            }
            _ => Err(fail(&q, &a, "expected an integer")),
        }
    }

    fn rat(&mut self, q: Value) -> Result<(Value, Value, Rational), Violation> {
        let (q, a) = self.ask(q)?;
        match &a {
            Value::Rat(r) => {
                let r = r.clone();
                Ok((q, a, r))
            }
            _ => Err(fail(&q, &a, "expected a rational")),
        }
    }
}

/// Rationals `p/q` in `[0,1]` with `q ≤ upto`, in lowest terms, ordered by
/// denominator then numerator.
pub(crate) fn unit_rationals(upto: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=upto.max(1) {
        for p in 0..=q {
            if p.gcd(&q) == 1 {
                out.push(frac(p, q));
            }
        }
    }
    out
}

fn bases(upto: u64) -> std::ops::RangeInclusive<u64> {
    2..=upto.clamp(2, 10)
}

/// Inside `(lo, hi)`.
fn inside(alpha: &Surd, lo: &Rational, hi: &Rational) -> bool {
    alpha.below(lo) && !alpha.below(hi)
}

/// `r` is a left best approximant of `alpha`.
fn is_left_best(alpha: &Surd, r: &Rational) -> bool {
    if r.is_zero() {
        return true;
    }
    if !r.in_unit_open() {
        return false;
    }
    let (pos, _) = locate(r, Endpoint::Left, None).expect("r in (0,1)");
    let node = node_at(&pos);
    inside(alpha, &node.left, &node.right)
}

/// Checks a sum approximation from below; `terms[0]` is the value at 0.
fn check_sum_below(
    alpha: &Surd,
    b: u64,
    queries: &[Value],
    answers: &[Value],
    terms: &[Rational],
    first: usize,
) -> Check {
    let mut sum = Rational::zero();
    let mut last = 0u64;
    for (i, t) in terms.iter().enumerate() {
        let (q, a) = (&queries[i], &answers[i]);
        if i + first == 0 {
            if !t.is_zero() {
                return Err(fail(q, a, "the value at 0 must be 0"));
            }
            continue;
        }
        if !t.is_positive() || *t >= Rational::one() {
            return Err(fail(q, a, "a term must lie in (0,1)"));
        }
        let mut m = 0u64;
        while (t * Rational::from_int(pow(b, m))) < Rational::one() {
            m += 1;
        }
        let scaled = t * Rational::from_int(pow(b, m));
        if !scaled.is_integer() || scaled >= Rational::from_int(b) {
            return Err(fail(q, a, format!("not of the form D·{b}^-m with 1 ≤ D < {b}")));
        }
        if m <= last {
            return Err(fail(q, a, "term positions must strictly increase"));
        }
        if alpha.below(&(&sum + Rational::inv_pow(b, m - 1))) {
            return Err(fail(q, a, "skips a nonzero digit"));
        }
        sum = sum + t;
        if !inside(alpha, &sum, &(&sum + Rational::inv_pow(b, m))) {
            return Err(fail(q, a, "partial sum is not a prefix of the expansion"));
        }
        last = m;
    }
    Ok(())
}

/// Checks `0 = r0 < r1 < …` are left best approximants, and consecutive ones
/// Farey neighbours when `complete`.
fn check_left_best(alpha: &Surd, queries: &[Value], answers: &[Value], rs: &[Rational], complete: bool) -> Check {
    for (i, r) in rs.iter().enumerate() {
        let (q, a) = (&queries[i], &answers[i]);
        if i == 0 {
            if !r.is_zero() {
                return Err(fail(q, a, "the first approximant must be the trivial one"));
            }
            continue;
        }
        let prev = &rs[i - 1];
        if r <= prev {
            return Err(fail(q, a, "approximants must strictly improve"));
        }
        if !is_left_best(alpha, r) {
            return Err(fail(q, a, "not a best approximant"));
        }
        if complete && FareyPair::new(prev.clone(), r.clone()).is_err() {
            return Err(fail(q, a, "an approximant in between is missing"));
        }
    }
    Ok(())
}

/// `|alpha - t| < |alpha - r|`.
fn closer(alpha: &Surd, t: &Rational, r: &Rational) -> bool {
    match (alpha.below(r), alpha.below(t)) {
        (true, true) => t > r,
        (false, false) => t < r,
        (true, false) => alpha.below(&((t + r) / Rational::from_int(2))),
        (false, true) => !alpha.below(&((t + r) / Rational::from_int(2))),
    }
}

fn index_queries(start: u64, upto: u64) -> Vec<Value> {
    (start..=upto.max(start)).map(Value::int).collect()
}

/// Checks the defining condition of `o`'s kind at every query of a canonical
/// enumeration up to `upto`, stopping at the first violation.
pub fn validate(o: &dyn Oracle, alpha: &Surd, upto: u64) -> Report {
    let kind = o.kind();
    let mut c = Checker { oracle: o, checked: 0 };
    let result = run(&mut c, kind, alpha, upto);
    Report { kind, checked: c.checked, violation: result.err() }
}

fn rationals(c: &mut Checker<'_>, queries: Vec<Value>) -> Result<Answered<Rational>, Violation> {
    let mut qs = Vec::new();
    let mut as_ = Vec::new();
    let mut rs = Vec::new();
    for q in queries {
        let (q, a, r) = c.rat(q)?;
        qs.push(q);
        as_.push(a);
        rs.push(r);
    }
    Ok((qs, as_, rs))
}

fn run(c: &mut Checker<'_>, kind: RepKind, alpha: &Surd, upto: u64) -> Check {
    use RepKind::*;
    match kind {
        DedekindCut => {
            for r in unit_rationals(upto) {
                let (q, a, bit) = c.int(Value::Rat(r.clone()))?;
                let want = BigInt::from(u8::from(!alpha.below(&r)));
                if bit != want {
                    return Err(fail(&q, &a, format!("should be {want}")));
                }
            }
        }
        Cauchy | IncreasingCauchy | ConvergingBase(_) => {
            let mut prev: Option<Rational> = None;
            for n in 1..=upto {
                let (q, a, x) = match kind {
                    ConvergingBase(b) => {
                        let (q, a, m) = c.int(Value::int(n))?;
                        (q, a, Rational::new(m, pow(b, n)).expect("nonzero"))
                    }
                    _ => c.rat(Value::int(n))?,
                };
                let w = frac(1, n);
                if !inside(alpha, &(&x - &w), &(&x + &w)) {
                    return Err(fail(&q, &a, format!("not within 1/{n}")));
                }
                if kind == IncreasingCauchy && prev.as_ref().is_some_and(|p| *p >= x) {
                    return Err(fail(&q, &a, "not strictly increasing"));
                }
                prev = Some(x);
            }
        }
        FuzzyCut => {
            for den in 1..=upto.max(1) {
                for p in -1..=(den as i64 + 1) {
                    let (q, a, bit) = c.int(Value::pair(p, den))?;
                    let ok = if bit.is_zero() {
                        !alpha.below(&frac(p + 1, den))
                    } else if bit.is_one() {
                        alpha.below(&frac(p - 1, den))
                    } else {
                        return Err(fail(&q, &a, "not a bit"));
                    };
                    if !ok {
                        return Err(fail(&q, &a, "violates the fuzzy cut implication"));
                    }
                }
            }
        }
        SignedDigit => {
            let mut s = Rational::zero();
            for n in 1..=upto {
                let (q, a, d) = c.int(Value::int(n))?;
                if d.abs() > BigInt::one() {
                    return Err(fail(&q, &a, "not a signed digit"));
                }
                s = s + Rational::new(d, pow(2, n)).expect("nonzero");
                let w = Rational::inv_pow(2, n);
                if !inside(alpha, &(&s - &w), &(&s + &w)) {
                    return Err(fail(&q, &a, "partial sum is too far from the number"));
                }
            }
        }
        Weihrauch => {
            for q in index_queries(0, upto) {
                let (q, a) = c.ask(q)?;
                match &a {
                    Value::Interval(i) if inside(alpha, i.lo(), i.hi()) => {}
                    Value::Interval(_) => return Err(fail(&q, &a, "interval misses the number")),
                    _ => return Err(fail(&q, &a, "expected an interval")),
                }
            }
        }
        BaseExpansion(b) => check_digits(c, alpha, b, upto, Value::int)?,
        GeneralBase => {
            for b in bases(upto) {
                check_digits(c, alpha, b, upto, |n| Value::pair(b, n))?;
            }
        }
        GrayCode => {
            for i in 0..upto.max(1) {
                let (q, a, g) = c.int(Value::int(i))?;
                let m: BigInt = (alpha.floor_pow(2, i + 1) + BigInt::one()).div_floor(&BigInt::from(2));
                let lo = Rational::new(&m * 2 - 1, pow(2, i + 1)).expect("nonzero");
                let hi = Rational::new(&m * 2 + 1, pow(2, i + 1)).expect("nonzero");
                debug_assert!(inside(alpha, &lo, &hi));
                if g != m.mod_floor(&BigInt::from(2)) {
                    return Err(fail(&q, &a, "wrong parity"));
                }
            }
        }
        SumBelow(b) | SumAbove(b) => {
            let (qs, as_, ts) = rationals(c, index_queries(0, upto))?;
            let target = if matches!(kind, SumBelow(_)) { alpha.clone() } else { alpha.reflect() };
            check_sum_below(&target, b, &qs, &as_, &ts, 0)?;
        }
        GeneralSumBelow | GeneralSumAbove => {
            let target = if kind == GeneralSumBelow { alpha.clone() } else { alpha.reflect() };
            for b in bases(upto) {
                let (qs, as_, ts) = rationals(c, (1..=upto.max(1)).map(|n| Value::pair(b, n)).collect())?;
                check_sum_below(&target, b, &qs, &as_, &ts, 1)?;
            }
        }
        Beatty => {
            for n in 1..=upto {
                let (q, a, m) = c.int(Value::int(n))?;
                if !inside(
                    alpha,
                    &Rational::new(m.clone(), n).expect("nonzero"),
                    &Rational::new(m + 1, n).expect("nonzero"),
                ) {
                    return Err(fail(&q, &a, "not the floor of n·α"));
                }
            }
        }
        Hurwitz => {
            let mut prev = crate::farey::Position::empty();
            for n in 0..=upto {
                let (q, a) = c.ask(Value::int(n))?;
                let Value::Bits(pos) = &a else {
                    return Err(fail(&q, &a, "expected a bit string"));
                };
                if pos.len() as u64 != n || !pos.starts_with(&prev) {
                    return Err(fail(&q, &a, "not an extension of the previous path"));
                }
                let node = node_at(pos);
                if !inside(alpha, &node.left, &node.right) {
                    return Err(fail(&q, &a, "node does not contain the number"));
                }
                prev = pos.clone();
            }
        }
        LeftBest | CompleteLeftBest | RightBest | CompleteRightBest => {
            let (qs, as_, rs) = rationals(c, index_queries(0, upto))?;
            let complete = matches!(kind, CompleteLeftBest | CompleteRightBest);
            if matches!(kind, LeftBest | CompleteLeftBest) {
                check_left_best(alpha, &qs, &as_, &rs, complete)?;
            } else {
                let rs: Vec<_> = rs.iter().map(Rational::reflect).collect();
                check_left_best(&alpha.reflect(), &qs, &as_, &rs, complete)?;
            }
        }
        FareyEgyptian => {
            let (qs, as_, us) = rationals(c, index_queries(1, upto))?;
            let mut sums = vec![Rational::zero()];
            for (i, u) in us.iter().enumerate() {
                if !u.is_positive() || !u.num().is_one() {
                    return Err(fail(&qs[i], &as_[i], "not a unit fraction"));
                }
                sums.push(sums.last().expect("nonempty") + u);
            }
            let mut q2 = vec![Value::int(0)];
            q2.extend(qs);
            let mut a2 = vec![Value::Rat(Rational::zero())];
            a2.extend(as_);
            check_left_best(alpha, &q2, &a2, &sums, true)?;
        }
        StandardBaire | DualBaire => {
            let mut node = FareyPair::root();
            for n in 0..=upto {
                let (q, a, f) = c.int(Value::int(n))?;
                if f.is_negative() {
                    return Err(fail(&q, &a, "negative run length"));
                }
                let k = Rational::from_int(f);
                let (l, r) = (node.left.clone(), node.right.clone());
                let jump = |x: &Rational, y: &Rational| {
                    Rational::new(x.num() + k.num() * y.num(), x.den() + k.num() * y.den()).expect("nonzero")
                };
                node = if kind == StandardBaire {
                    let l2 = jump(&l, &r);
                    FareyPair { right: crate::numeric::mediant(&l2, &r), left: l2 }
                } else {
                    let r2 = jump(&r, &l);
                    FareyPair { left: crate::numeric::mediant(&l, &r2), right: r2 }
                };
                if !inside(alpha, &node.left, &node.right) {
                    return Err(fail(&q, &a, "interval does not contain the number"));
                }
            }
        }
        Egyptian => {
            let mut sum = Rational::zero();
            let mut den = BigInt::one();
            let mut prev = BigInt::one();
            for n in 1..=upto {
                let (q, a, m) = c.int(Value::int(n))?;
                if m < prev || m < BigInt::from(2) {
                    return Err(fail(&q, &a, "terms must be at least 2 and non-decreasing"));
                }
                let next = &sum + Rational::new(1, &den * &m).expect("nonzero");
                let bigger = &sum + Rational::new(1, &den * (&m - 1)).expect("nonzero");
                if !alpha.below(&next) || alpha.below(&bigger) {
                    return Err(fail(&q, &a, "not the greedy term"));
                }
                sum = next;
                den *= &m;
                prev = m;
            }
        }
        ContinuedFraction => {
            let (mut p0, mut q0, mut p1, mut q1) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
            for n in 1..=upto {
                let (q, a, t) = c.int(Value::int(n))?;
                if !t.is_positive() {
                    return Err(fail(&q, &a, "partial quotients are positive"));
                }
                let (p2, q2) = (&t * &p1 + &p0, &t * &q1 + &q0);
                let x = Rational::new(p2.clone(), q2.clone()).expect("nonzero");
                let y = Rational::new(&p2 + &p1, &q2 + &q1).expect("nonzero");
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                if !inside(alpha, &lo, &hi) {
                    return Err(fail(&q, &a, "convergents do not bracket the number"));
                }
                (p0, q0, p1, q1) = (p1, q1, p2, q2);
            }
        }
        TraceFunction | Contractor => {
            let rs = unit_rationals(upto);
            let mut images = Vec::with_capacity(rs.len());
            for r in &rs {
                let (q, a, t) = c.rat(Value::Rat(r.clone()))?;
                if t == *r {
                    return Err(fail(&q, &a, "fixed point"));
                }
                if !closer(alpha, &t, r) {
                    return Err(fail(&q, &a, "image is not closer to the number"));
                }
                images.push((q, a, t));
            }
            if kind == Contractor {
                for i in 0..rs.len() {
                    for j in i + 1..rs.len() {
                        if (&images[i].2 - &images[j].2).abs() >= (&rs[i] - &rs[j]).abs() {
                            let (q, a, _) = &images[j];
                            return Err(fail(q, a, format!("does not contract distance to {}", rs[i])));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_digits(c: &mut Checker<'_>, alpha: &Surd, b: u64, upto: u64, query: impl Fn(u64) -> Value) -> Check {
    let mut prefix = Rational::zero();
    for n in 1..=upto.max(1) {
        let (q, a, d) = c.int(query(n))?;
        if d.is_negative() || d >= BigInt::from(b) {
            return Err(fail(&q, &a, format!("not a base-{b} digit")));
        }
        prefix = prefix + Rational::new(d, pow(b, n)).expect("nonzero");
        if !inside(alpha, &prefix, &(&prefix + Rational::inv_pow(b, n))) {
            return Err(fail(&q, &a, "prefix does not bound the number"));
        }
    }
    Ok(())
}
