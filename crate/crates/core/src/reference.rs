//! Quadratic surds as exact ground truth, and their canonical oracles.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::farey::{descend, Endpoint, FareyPair, Position};
use crate::numeric::{pow, OpenInterval, Rational};
use crate::reps::{base_index_arg, big_index_arg, index_arg, Oracle, RepKind, Value};

/// Which side of the number a rational falls on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Cut {
    Below,
    Above,
}

/// Sign of `a + b·√d` for non-square `d > 0`.
fn surd_sign(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let zero = BigInt::zero();
    if b.is_zero() {
        return a.cmp(&zero);
    }
    match (a.cmp(&zero), b.cmp(&zero)) {
        (Ordering::Greater | Ordering::Equal, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less | Ordering::Equal, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * d)),
        (Ordering::Less, Ordering::Greater) => (b * b * d).cmp(&(a * a)),
        (_, Ordering::Equal) => unreachable!(),
    }
}

/// `⌊(x + y·√d) / z⌋` for non-square `d > 0` and `z ≠ 0`.
fn floor_surd(x: &BigInt, y: &BigInt, d: &BigInt, z: &BigInt) -> BigInt {
    let (x, y, z) = if z.is_negative() { (-x, -y, -z) } else { (x.clone(), y.clone(), z.clone()) };
    let t = (&y * &y * d).sqrt();
    let whole = match y.sign() {
        num_bigint::Sign::NoSign => x,
        num_bigint::Sign::Plus => x + t,
        num_bigint::Sign::Minus => x - t - 1,
    };
    whole.div_floor(&z)
}

#[derive(Clone, Debug)]
struct CfExpansion {
    terms: Vec<BigInt>,
    period_start: usize,
}

fn expand_cf(p: &BigInt, q: &BigInt, d: &BigInt, r: &BigInt) -> CfExpansion {
    let mut dd = q * q * d;
    let (mut pp, mut qq) = if q.is_positive() { (p.clone(), r.clone()) } else { (-p, -r) };
    if !(&dd - &pp * &pp).is_multiple_of(&qq) {
        let s = qq.abs();
        pp *= &s;
        dd *= &s * &s;
        qq *= &s;
    }
    let step = |pp: &BigInt, qq: &BigInt, a: &BigInt| {
        let np = a * qq - pp;
        let nq = (&dd - &np * &np) / qq;
        (np, nq)
    };
    let a0 = floor_surd(&pp, &BigInt::one(), &dd, &qq);
    (pp, qq) = step(&pp, &qq, &a0);
    let mut seen = HashMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&i) = seen.get(&(pp.clone(), qq.clone())) {
            return CfExpansion { terms, period_start: i };
        }
        seen.insert((pp.clone(), qq.clone()), terms.len());
        let a = floor_surd(&pp, &BigInt::one(), &dd, &qq);
        (pp, qq) = step(&pp, &qq, &a);
        terms.push(a);
    }
}

/// The quadratic irrational `(p + q·√d) / r`, strictly between 0 and 1.
#[derive(Clone, Debug)]
pub struct Surd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
    cf: CfExpansion,
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (&self.p, &self.q, &self.d, &self.r) == (&other.p, &other.q, &other.d, &other.r)
    }
}

impl Eq for Surd {}

impl Surd {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self, Error> {
        let (p, q, d, r) = (p.into(), q.into(), d.into(), r.into());
        if q.is_zero() {
            return Err(Error::InvalidQuery("surd coefficient of the root is zero".into()));
        }
        if !r.is_positive() {
            return Err(Error::InvalidQuery("surd denominator must be positive".into()));
        }
        if !d.is_positive() || d.sqrt().pow(2) == d {
            return Err(Error::InvalidQuery(format!("{d} is not a positive non-square")));
        }
        let mut s = Surd { p, q, d, r, cf: CfExpansion { terms: Vec::new(), period_start: 0 } };
        if s.compare(&Rational::zero()) != Cut::Below || s.compare(&Rational::one()) != Cut::Above {
            return Err(Error::InvalidQuery(format!("{s} is not in (0,1)")));
        }
        s.cf = expand_cf(&s.p, &s.q, &s.d, &s.r);
        Ok(s)
    }

    pub fn sqrt2_minus_1() -> Self {
        Surd::new(-1, 1, 2, 1).expect("valid surd")
    }

    pub fn golden() -> Self {
        Surd::new(-1, 1, 5, 2).expect("valid surd")
    }

    pub fn sqrt3_minus_1() -> Self {
        Surd::new(-1, 1, 3, 1).expect("valid surd")
    }

    pub fn sqrt7_minus_2() -> Self {
        Surd::new(-2, 1, 7, 1).expect("valid surd")
    }

    pub fn inv_sqrt2() -> Self {
        Surd::new(0, 1, 2, 2).expect("valid surd")
    }

    /// The fixed test panel with its short names.
    pub fn panel() -> Vec<(&'static str, Surd)> {
        vec![
            ("sqrt2m1", Surd::sqrt2_minus_1()),
            ("golden", Surd::golden()),
            ("sqrt3m1", Surd::sqrt3_minus_1()),
            ("sqrt7m2", Surd::sqrt7_minus_2()),
            ("invsqrt2", Surd::inv_sqrt2()),
        ]
    }

    pub fn by_name(name: &str) -> Option<Surd> {
        Surd::panel().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
    }

    /// `1 - α`.
    pub fn reflect(&self) -> Surd {
        Surd::new(&self.r - &self.p, -&self.q, self.d.clone(), self.r.clone()).expect("reflection stays in (0,1)")
    }

    /// Below iff `x < α`.
    pub fn compare(&self, x: &Rational) -> Cut {
        let (n, m) = (x.num(), x.den());
        let a = &self.p * m - n * &self.r;
        let b = &self.q * m;
        match surd_sign(&a, &b, &self.d) {
            Ordering::Greater => Cut::Below,
            _ => Cut::Above,
        }
    }

    pub fn below(&self, x: &Rational) -> bool {
        self.compare(x) == Cut::Below
    }

    /// `⌊kα⌋`.
    pub fn floor_mul(&self, k: &BigInt) -> BigInt {
        floor_surd(&(k * &self.p), &(k * &self.q), &self.d, &self.r)
    }

    /// `⌊b^n α⌋`.
    pub fn floor_pow(&self, b: u64, n: u64) -> BigInt {
        self.floor_mul(&pow(b, n))
    }

    /// The n-th base-`b` digit, `n ≥ 1`.
    pub fn digit(&self, b: u64, n: u64) -> u64 {
        self.big_digit(&BigInt::from(b), n).to_u64().expect("digit below base")
    }

    /// The n-th digit in a base of any size.
    pub fn big_digit(&self, b: &BigInt, n: u64) -> BigInt {
        self.floor_mul(&num_traits::pow(b.clone(), n as usize)).mod_floor(b)
    }

    /// Partial quotient `a_n` of `α = [0; a1, a2, …]`, `n ≥ 1`.
    pub fn cf_term(&self, n: u64) -> BigInt {
        assert!(n >= 1, "continued fraction terms start at index 1");
        let i = (n - 1) as usize;
        let terms = &self.cf.terms;
        if i < terms.len() {
            return terms[i].clone();
        }
        let start = self.cf.period_start;
        terms[start + (i - start) % (terms.len() - start)].clone()
    }

    /// The period of the continued fraction as (pre-period length, period length).
    pub fn cf_period(&self) -> (usize, usize) {
        (self.cf.period_start, self.cf.terms.len() - self.cf.period_start)
    }

    /// The first `n` bits of the path to α, by comparison-driven descent.
    pub fn path_prefix(&self, n: usize) -> (Position, FareyPair) {
        let mut node = FareyPair::root();
        let mut pos = Position::empty();
        for _ in 0..n {
            let bit = self.below(&node.mediant());
            pos.push(bit);
            node = descend(&node, bit);
        }
        (pos, node)
    }

    /// Lengths of the runs of the path: `a1 - 1` zeros, then `a2` ones, then
    /// `a3` zeros, and so on.
    pub fn path_runs(&self) -> impl Iterator<Item = (bool, u64)> + '_ {
        (1u64..).map(move |k| {
            let a = self.cf_term(k).to_u64().expect("partial quotient fits in u64");
            let len = if k == 1 { a - 1 } else { a };
            (k % 2 == 0, len)
        })
    }

    /// The complete left (or right) best approximants in order, starting at
    /// `0/1` (or `1/1`).
    pub fn endpoints(&self, side: Endpoint) -> Endpoints<'_> {
        Endpoints {
            runs: Box::new(self.path_runs()),
            side,
            left: (BigInt::zero(), BigInt::one()),
            right: (BigInt::one(), BigInt::one()),
            run: None,
            started: false,
        }
    }

    pub fn complete_best(&self, side: Endpoint, n: u64) -> Rational {
        self.endpoints(side).nth(n as usize).expect("endpoint sequence is infinite")
    }

    /// Greedy Egyptian expansion terms `E(1..=n)`.
    pub fn egyptian(&self, n: usize) -> Vec<BigInt> {
        // α − Σ = x / den with x = (a + b√d)/r; the next term is ⌊den/x⌋ + 1.
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for _ in 0..n {
            let a = &den * &self.p - &num * &self.r;
            let b = &den * &self.q;
            let norm = &a * &a - &b * &b * &self.d;
            let m = floor_surd(&(&self.r * &a), &(-(&self.r * &b)), &self.d, &norm) + 1;
            num = &num * &m + 1;
            den *= &m;
            out.push(m);
        }
        out
    }

    /// The n-th term (n ≥ 1) of the base-`b` sum approximation from below.
    pub fn sum_below_term(&self, b: impl Into<BigInt>, n: u64) -> Rational {
        let b = b.into();
        if n == 0 {
            return Rational::zero();
        }
        let mut width = 2 * n;
        loop {
            // Digits 1..=width, least significant first.
            let mut f = self.floor_mul(&num_traits::pow(b.clone(), width as usize));
            let mut digits = Vec::with_capacity(width as usize);
            for _ in 0..width {
                let (q, d) = f.div_mod_floor(&b);
                digits.push(d);
                f = q;
            }
            let hit = digits.iter().rev().enumerate().filter(|(_, d)| !d.is_zero()).nth(n as usize - 1);
            if let Some((i, d)) = hit {
                return Rational::new(d.clone(), num_traits::pow(b.clone(), i + 1)).expect("nonzero");
            }
            width *= 2;
        }
    }

    /// The Farey path written as `1^f(0) 0 1^f(1) 0 …`; returns `f(n)`.
    pub fn standard_baire(&self, n: u64) -> u64 {
        self.baire_blocks(false).nth(n as usize).expect("infinite")
    }

    /// The Farey path written as `0^f(0) 1 0^f(1) 1 …`; returns `f(n)`.
    pub fn dual_baire(&self, n: u64) -> u64 {
        self.baire_blocks(true).nth(n as usize).expect("infinite")
    }

    /// Lengths of the maximal runs of `!sep` each terminated by `sep`.
    fn baire_blocks(&self, sep: bool) -> impl Iterator<Item = u64> + '_ {
        let mut pending = 0u64;
        self.path_runs().flat_map(move |(bit, len)| {
            if bit == sep {
                if len == 0 {
                    return Vec::new();
                }
                let first = std::iter::once(pending);
                pending = 0;
                first.chain(std::iter::repeat_n(0, len as usize - 1)).collect::<Vec<_>>()
            } else {
                pending += len;
                Vec::new()
            }
        })
    }

    /// The best-approximation contractor evaluated at `x ∈ [0,1]`.
    pub fn contractor(&self, x: &Rational) -> Rational {
        let side = if self.below(x) { Endpoint::Left } else { Endpoint::Right };
        let past = |e: &Rational| match side {
            Endpoint::Left => e > x,
            Endpoint::Right => e < x,
        };
        let mut it = self.endpoints(side);
        let mut r0 = it.next().expect("infinite");
        let mut r1 = it.next().expect("infinite");
        while !past(&r1) {
            r0 = r1;
            r1 = it.next().expect("infinite");
        }
        let r2 = it.next().expect("infinite");
        let k = (&r2 - &r1) / (&r1 - &r0);
        &r1 + k * (x - &r0)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, self.q.abs(), self.d, self.r)
    }
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(alpha) = Surd::by_name(&t) {
            return Ok(alpha);
        }
        let bad = || Error::Parse(format!("not a surd (expected \"(p+q*sqrt(d))/r\" or an alias): {s:?}"));
        let int = |x: &str| x.parse::<BigInt>().map_err(|_| bad());
        let (body, r) = match t.rfind(')') {
            Some(i) if i + 1 < t.len() => {
                let rest = t[i + 1..].strip_prefix('/').ok_or_else(bad)?;
                (&t[..=i], int(rest)?)
            }
            Some(_) => (t.as_str(), BigInt::one()),
            None => return Err(bad()),
        };
        let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
        let at = inner.find("sqrt(").ok_or_else(bad)?;
        let d = int(inner[at + 5..].strip_suffix(')').ok_or_else(bad)?)?;
        let head = &inner[..at];
        let (p, q) = match head.strip_suffix('*') {
            Some(h) => match h[1.min(h.len())..].rfind(['+', '-']).map(|i| i + 1.min(h.len())) {
                Some(i) => (int(&h[..i])?, int(h[i..].trim_start_matches('+'))?),
                None => (BigInt::zero(), int(h.trim_start_matches('+'))?),
            },
            None => match head.chars().last() {
                None => (BigInt::zero(), BigInt::one()),
                Some(c @ ('+' | '-')) => {
                    let p = &head[..head.len() - 1];
                    let p = if p.is_empty() { BigInt::zero() } else { int(p)? };
                    (p, if c == '-' { -BigInt::one() } else { BigInt::one() })
                }
                Some(_) => return Err(bad()),
            },
        };
        Surd::new(p, q, d, r)
    }
}

/// Successive endpoints on one side of the path to α.
pub struct Endpoints<'a> {
    runs: Box<dyn Iterator<Item = (bool, u64)> + 'a>,
    side: Endpoint,
    left: (BigInt, BigInt),
    right: (BigInt, BigInt),
    run: Option<(bool, u64)>,
    started: bool,
}

fn frac(p: &(BigInt, BigInt)) -> Rational {
    Rational::new(p.0.clone(), p.1.clone()).expect("positive denominator")
}

impl Iterator for Endpoints<'_> {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let wanted = self.side == Endpoint::Left;
        if !self.started {
            self.started = true;
            return Some(frac(if wanted { &self.left } else { &self.right }));
        }
        loop {
            match self.run {
                Some((bit, left)) if left > 0 && bit == wanted => {
                    self.run = Some((bit, left - 1));
                    if bit {
                        self.left = (&self.left.0 + &self.right.0, &self.left.1 + &self.right.1);
                        return Some(frac(&self.left));
                    }
                    self.right = (&self.left.0 + &self.right.0, &self.left.1 + &self.right.1);
                    return Some(frac(&self.right));
                }
                Some((bit, left)) if left > 0 => {
                    let k = BigInt::from(left);
                    if bit {
                        self.left = (&self.left.0 + &k * &self.right.0, &self.left.1 + &k * &self.right.1);
                    } else {
                        self.right = (&self.right.0 + &k * &self.left.0, &self.right.1 + &k * &self.left.1);
                    }
                    self.run = None;
                }
                _ => self.run = self.runs.next(),
            }
        }
    }
}

/// Longest Farey walk a ground-truth oracle will take to answer one query.
pub const MAX_WALK: u64 = 1 << 14;

fn walk(n: u64) -> Result<u64, Error> {
    if n > MAX_WALK {
        return Err(Error::InvalidQuery(format!("index {n} exceeds the reference walk limit {MAX_WALK}")));
    }
    Ok(n)
}

/// The canonical oracle of a representation kind for a surd.
#[derive(Clone, Debug)]
pub struct GroundTruth {
    alpha: Surd,
    kind: RepKind,
}

pub fn ground_truth(alpha: &Surd, kind: RepKind) -> Result<GroundTruth, Error> {
    if kind.base().is_some_and(|b| b < 2) {
        return Err(Error::InvalidQuery(format!("{kind}: base below 2")));
    }
    Ok(GroundTruth { alpha: alpha.clone(), kind })
}

impl GroundTruth {
    pub fn alpha(&self) -> &Surd {
        &self.alpha
    }

    fn cauchy(&self, n: u64) -> Rational {
        let f = self.alpha.floor_mul(&BigInt::from(n));
        Rational::new(2 * f + 1, 2 * n).expect("nonzero")
    }
}

impl Oracle for GroundTruth {
    fn kind(&self) -> RepKind {
        self.kind
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        use RepKind::*;
        let a = &self.alpha;
        let int = |n: BigInt| Ok(Value::Int(n));
        let rat = |r: Rational| Ok(Value::Rat(r));
        match self.kind {
            DedekindCut => match q {
                Value::Rat(r) => int(BigInt::from(u8::from(!a.below(r)))),
                _ => Err(Error::InvalidQuery(format!("expected a rational, got {q}"))),
            },
            Cauchy => rat(self.cauchy(index_arg(q, 1)?)),
            IncreasingCauchy => {
                let n = index_arg(q, 1)?;
                let x = Rational::new(a.floor_pow(2, n + 1), pow(2, n + 1)).expect("nonzero");
                rat(x - Rational::inv_pow(2, n + 1))
            }
            ConvergingBase(b) => int(a.floor_pow(b, index_arg(q, 1)?)),
            FuzzyCut => match q {
                Value::Pair(p, den) if den.is_positive() => {
                    let r = Rational::new(p.clone(), den.clone())?;
                    int(BigInt::from(u8::from(a.below(&r))))
                }
                _ => Err(Error::InvalidQuery(format!("expected (p, q) with q ≥ 1, got {q}"))),
            },
            SignedDigit => int(BigInt::from(a.digit(2, index_arg(q, 1)?))),
            Weihrauch => {
                let n = index_arg(q, 0)?;
                let i = if n == 0 {
                    OpenInterval::new(Rational::zero(), Rational::one())?
                } else {
                    let c = self.cauchy(n);
                    let w = Rational::new(1, n).expect("nonzero");
                    OpenInterval::new(&c - &w, &c + &w)?
                };
                Ok(Value::Interval(i))
            }
            BaseExpansion(b) => int(BigInt::from(a.digit(b, index_arg(q, 1)?))),
            GrayCode => {
                let i = index_arg(q, 0)?;
                let m: BigInt = (a.floor_pow(2, i + 1) + BigInt::one()).div_floor(&BigInt::from(2));
                int(m.mod_floor(&BigInt::from(2)))
            }
            SumBelow(b) => rat(a.sum_below_term(b, index_arg(q, 0)?)),
            SumAbove(b) => rat(a.reflect().sum_below_term(b, index_arg(q, 0)?)),
            GeneralBase => {
                let (b, n) = base_index_arg(q)?;
                int(a.big_digit(&b, n))
            }
            GeneralSumBelow => {
                let (b, n) = base_index_arg(q)?;
                rat(a.sum_below_term(b, n))
            }
            GeneralSumAbove => {
                let (b, n) = base_index_arg(q)?;
                rat(a.reflect().sum_below_term(b, n))
            }
            Beatty => int(a.floor_mul(&big_index_arg(q, 1)?)),
            Hurwitz => Ok(Value::Bits(a.path_prefix(walk(index_arg(q, 0)?)? as usize).0)),
            LeftBest => rat(a.complete_best(Endpoint::Left, walk(2 * index_arg(q, 0)?)?)),
            RightBest => rat(a.complete_best(Endpoint::Right, walk(2 * index_arg(q, 0)?)?)),
            CompleteLeftBest => rat(a.complete_best(Endpoint::Left, walk(index_arg(q, 0)?)?)),
            CompleteRightBest => rat(a.complete_best(Endpoint::Right, walk(index_arg(q, 0)?)?)),
            StandardBaire => int(BigInt::from(a.standard_baire(walk(index_arg(q, 0)?)?))),
            DualBaire => int(BigInt::from(a.dual_baire(walk(index_arg(q, 0)?)?))),
            Egyptian => {
                let n = walk(index_arg(q, 1)?)?;
                int(a.egyptian(n as usize).pop().expect("n ≥ 1"))
            }
            FareyEgyptian => {
                let n = walk(index_arg(q, 1)?)?;
                let mut it = a.endpoints(Endpoint::Left).skip(n as usize - 1);
                let lo = it.next().expect("infinite");
                let hi = it.next().expect("infinite");
                rat(hi - lo)
            }
            ContinuedFraction => int(a.cf_term(index_arg(q, 1)?)),
            TraceFunction | Contractor => match q {
                Value::Rat(x) if !x.is_negative() && *x <= Rational::one() => rat(a.contractor(x)),
                _ => Err(Error::InvalidQuery(format!("expected a rational in [0,1], got {q}"))),
            },
        }
    }
}
