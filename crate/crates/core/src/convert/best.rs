//! Best approximations and the representations equivalent to them: general
//! sum approximations, Baire sequences, Egyptian and Farey-Egyptian expansions.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dedekind::outside_unit;
use super::{expect_kind, least_true, mirrored, simplest_above, Memo, Side, Source};
use crate::error::Error;
use crate::farey::{locate, nodes_along, Endpoint, FareyPair};
use crate::numeric::Rational;
use crate::reps::{base_index_arg, index_arg, rational_arg, Oracle, OracleExt, RepKind, Value};

fn side_of(src: &dyn Oracle) -> Result<Side, Error> {
    use RepKind::*;
    match src.kind() {
        LeftBest | CompleteLeftBest | GeneralSumBelow | DualBaire => Ok(Side::LeftOrBelow),
        RightBest | CompleteRightBest | GeneralSumAbove | StandardBaire => Ok(Side::RightOrAbove),
        k => Err(Error::InvalidQuery(format!("{k} is not one-sided"))),
    }
}

fn bit(above: bool) -> Value {
    Value::int(u8::from(above))
}

/// `⌈log_b x⌉` for a base of any size: the least `k` with `b^k ≥ x`.
fn ceil_log_big(b: &BigInt, x: &BigInt) -> u64 {
    let mut k = 0;
    let mut p = BigInt::one();
    while &p < x {
        p *= b;
        k += 1;
    }
    k
}

/// `r_i` of a left best approximation, checked to lie in `[0, 1)`.
fn left_at(src: &dyn Oracle, i: impl Into<BigInt>) -> Result<Rational, Error> {
    let q = Value::Int(i.into());
    let r = src.ask_rat(q.clone())?;
    if r.is_negative() || r >= Rational::one() {
        return Err(Error::NotAnApproximant(format!("{r} at {q} lies outside [0, 1)")));
    }
    Ok(r)
}

/// The complete left best approximation from any left best approximation:
/// locate `L(n)` in the tree and read off the left endpoints on the way.
pub struct BestToComplete {
    src: Source,
}

impl Oracle for BestToComplete {
    fn kind(&self) -> RepKind {
        RepKind::CompleteLeftBest
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let r = left_at(&*self.src, n)?;
        if r.is_zero() {
            return if n == 0 {
                Ok(Value::Rat(r))
            } else {
                Err(Error::NotAnApproximant(format!("L({n}) = 0 does not increase")))
            };
        }
        let depth = (r.num() + r.den()).try_into().unwrap_or(usize::MAX);
        let (pos, _) = locate(&r, Endpoint::Left, Some(depth))?;
        let mut seen: Vec<Rational> = Vec::new();
        for node in nodes_along(&pos) {
            if seen.last() != Some(&node.left) {
                seen.push(node.left);
            }
        }
        seen.into_iter()
            .nth(n as usize)
            .map(Value::Rat)
            .ok_or_else(|| Error::NotAnApproximant(format!("{r} has fewer than {n} left best approximants below it")))
    }
}

/// Complete a best approximation on its own side, one call per query.
pub fn bestapprox_to_complete(src: Source) -> Result<Source, Error> {
    use RepKind::*;
    expect_kind(
        &*src,
        matches!(src.kind(), LeftBest | RightBest | CompleteLeftBest | CompleteRightBest),
        "best approximation",
    )?;
    let side = side_of(&*src)?;
    mirrored(side, src, |s| {
        let s: Source = match s.kind() {
            CompleteLeftBest => Box::new(super::Relabel::new(s, LeftBest)?),
            _ => s,
        };
        Ok(Box::new(BestToComplete { src: s }))
    })
}

/// `p/q` is below the number iff `p/q ≤ L(q)`.
pub struct BestToDedekind {
    src: Source,
}

impl Oracle for BestToDedekind {
    fn kind(&self) -> RepKind {
        RepKind::DedekindCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let r = rational_arg(q)?;
        if let Some(b) = outside_unit(r) {
            return Ok(bit(b));
        }
        let l = left_at(&*self.src, r.den().clone())?;
        Ok(bit(*r > l))
    }
}

/// The Dedekind cut from a best approximation on either side, one call.
pub fn bestapprox_to_dedekind(src: Source) -> Result<Source, Error> {
    use RepKind::*;
    expect_kind(
        &*src,
        matches!(src.kind(), LeftBest | RightBest | CompleteLeftBest | CompleteRightBest),
        "best approximation",
    )?;
    let side = side_of(&*src)?;
    mirrored(side, src, |s| Ok(Box::new(BestToDedekind { src: s })))
}

/// How the best-approximation to general-sum conversion finds an
/// approximant with denominator beyond a bound `x`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Probe {
    /// Ask for `L(x)` itself: two calls per term, but indices grow very fast.
    Direct,
    /// Ask for `L(1), L(2), L(4), …` until the denominator passes `x`,
    /// never beyond index `x`.
    #[default]
    Galloping,
}

pub struct BestToGenSum {
    src: Source,
    probe: Probe,
}

/// A left best approximant with denominator above `x`.
fn beyond(src: &dyn Oracle, probe: Probe, x: &BigInt) -> Result<Rational, Error> {
    match probe {
        Probe::Direct => {
            let r = left_at(src, x.clone())?;
            if r.den() <= x {
                return Err(Error::NotAnApproximant(format!("L({x}) = {r} has denominator at most {x}")));
            }
            Ok(r)
        }
        Probe::Galloping => {
            let mut i = BigInt::one();
            loop {
                let idx = if &i > x { x.clone() } else { i.clone() };
                let r = left_at(src, idx.clone())?;
                if r.den() > x {
                    return Ok(r);
                }
                if &idx == x {
                    return Err(Error::NotAnApproximant(format!("L({x}) = {r} has denominator at most {x}")));
                }
                i *= 2;
            }
        }
    }
}

impl Oracle for BestToGenSum {
    fn kind(&self) -> RepKind {
        RepKind::GeneralSumBelow
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let (b, n) = base_index_arg(q)?;
        let memo = Memo::new(&*self.src);
        let mut sum = Rational::zero();
        let mut d = BigInt::one();
        let mut term = Rational::zero();
        for _ in 0..n {
            let first = beyond(&memo, self.probe, &d)?;
            if first <= sum {
                return Err(Error::NotAnApproximant(format!("{first} does not lie above {sum}")));
            }
            let m = ceil_log_big(&b, &(&d * first.den()));
            let bm = num_traits::pow(b.clone(), m as usize);
            let x = beyond(&memo, self.probe, &bm)?;
            let gap = &x - &sum;
            if !gap.is_positive() {
                return Err(Error::NotAnApproximant(format!("{x} does not lie above {sum}")));
            }
            let k = ceil_log_big(&b, &gap.recip()?.ceil());
            d = num_traits::pow(b.clone(), k as usize);
            let digit = (&gap * Rational::from_int(d.clone())).floor();
            term = Rational::new(digit, d.clone())?;
            sum = sum + &term;
        }
        Ok(Value::Rat(term))
    }
}

/// The general sum approximation on the side of a best approximation.
pub fn bestapprox_to_gensum(src: Source, probe: Probe) -> Result<Source, Error> {
    use RepKind::*;
    expect_kind(
        &*src,
        matches!(src.kind(), LeftBest | RightBest | CompleteLeftBest | CompleteRightBest),
        "best approximation",
    )?;
    let side = side_of(&*src)?;
    mirrored(side, src, |s| Ok(Box::new(BestToGenSum { src: s, probe })))
}

/// `c/d` is below the number iff `G(d, 1) ≥ c/d`.
fn gensum_below(g: &dyn Oracle, r: &Rational) -> Result<bool, Error> {
    if let Some(b) = outside_unit(r) {
        return Ok(!b);
    }
    let t = g.ask_rat(Value::Pair(r.den().clone(), BigInt::one()))?;
    Ok(t >= *r)
}

/// The complete left best approximation by repeated Farey descent, each
/// search bounded by a two-digit truncation.
pub struct GenSumToCompleteLeft {
    src: Source,
}

impl Oracle for GenSumToCompleteLeft {
    fn kind(&self) -> RepKind {
        RepKind::CompleteLeftBest
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let g = Memo::new(&*self.src);
        let mut a = Rational::zero();
        for i in 0..n {
            let bound = if i == 0 {
                g.ask_rat(Value::pair(2, 1))?.den().clone()
            } else {
                let t = g.ask_rat(Value::Pair(a.den().clone(), BigInt::from(2)))?;
                (&a + &t).den().clone()
            };
            a = simplest_above(&a, |r| gensum_below(&g, r), Some(&bound))?;
        }
        Ok(Value::Rat(a))
    }
}

/// The complete best approximation on the side of a general sum approximation.
pub fn gensum_to_completebest(src: Source) -> Result<Source, Error> {
    use RepKind::*;
    expect_kind(&*src, matches!(src.kind(), GeneralSumBelow | GeneralSumAbove), "general sum")?;
    let side = side_of(&*src)?;
    mirrored(side, src, |s| Ok(Box::new(GenSumToCompleteLeft { src: s })))
}

/// Standard Baire sequence to complete right best approximation: the right
/// endpoint of `I^n`.
pub struct BaireToRight {
    src: Source,
}

impl Oracle for BaireToRight {
    fn kind(&self) -> RepKind {
        RepKind::CompleteRightBest
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let (mut a, mut b, mut c, mut d) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::one());
        for j in 0..n {
            let q = Value::int(j);
            let f = self.src.ask_int(q.clone())?;
            if f.is_negative() {
                return Err(Error::malformed(q, format!("{f} is not a natural number")));
            }
            let (na, nb) = (&a + &f * &c, &b + &f * &d);
            (c, d) = (&na + &c, &nb + &d);
            (a, b) = (na, nb);
        }
        Ok(Value::Rat(Rational::new(c, d)?))
    }
}

/// Complete right best approximation to standard Baire sequence: one call
/// for `R(n+1)`, whose position spells out `1^B(0) 0 … 1^B(n) 0`.
pub struct RightToBaire {
    src: Source,
}

impl Oracle for RightToBaire {
    fn kind(&self) -> RepKind {
        RepKind::StandardBaire
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let q = Value::int(n + 1);
        let r = self.src.ask_rat(q.clone())?;
        if !r.in_unit_open() {
            return Err(Error::NotAnApproximant(format!("R({}) = {r} lies outside (0, 1)", n + 1)));
        }
        let depth = (r.num() + r.den()).try_into().unwrap_or(usize::MAX);
        let (pos, _) = locate(&r, Endpoint::Right, Some(depth))?;
        let mut zeros = 0;
        let mut ones = 0u64;
        for &right in pos.bits() {
            if right {
                ones += 1;
            } else if zeros == n {
                return Ok(Value::int(ones));
            } else {
                zeros += 1;
                ones = 0;
            }
        }
        Err(Error::NotAnApproximant(format!("{r} is not the right approximant number {}", n + 1)))
    }
}

/// Standard Baire gives complete right best approximations and dual Baire
/// gives complete left ones.
pub fn baire_to_completebest(src: Source) -> Result<Source, Error> {
    use RepKind::*;
    expect_kind(&*src, matches!(src.kind(), StandardBaire | DualBaire), "Baire")?;
    let side = if src.kind() == StandardBaire { Side::LeftOrBelow } else { Side::RightOrAbove };
    mirrored(side, src, |s| Ok(Box::new(BaireToRight { src: s })))
}

/// Complete right gives standard Baire and complete left gives dual Baire.
pub fn completebest_to_baire(src: Source) -> Result<Source, Error> {
    use RepKind::*;
    expect_kind(&*src, matches!(src.kind(), CompleteLeftBest | CompleteRightBest), "complete best approximation")?;
    let side = if src.kind() == CompleteRightBest { Side::LeftOrBelow } else { Side::RightOrAbove };
    mirrored(side, src, |s| Ok(Box::new(RightToBaire { src: s })))
}

/// Cohen's finite Egyptian expansion of `p/q ∈ (0, 1)`.
pub fn egyptian_expand_rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Vec<BigInt>, Error> {
    let r = Rational::new(p, q)?;
    if !r.in_unit_open() {
        return Err(Error::InvalidQuery(format!("{r} is not in (0,1)")));
    }
    Ok(EgyptianTerms::new(&r).collect())
}

/// `Div(q, r)`, one term at a time.
struct EgyptianTerms {
    q: BigInt,
    r: BigInt,
}

impl EgyptianTerms {
    fn new(x: &Rational) -> Self {
        EgyptianTerms { q: x.den().clone(), r: x.num().clone() }
    }
}

impl Iterator for EgyptianTerms {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        if self.r.is_zero() {
            return None;
        }
        let n = self.q.div_ceil(&self.r);
        self.r = &n * &self.r - &self.q;
        Some(n)
    }
}

/// Order of the numbers two Egyptian expansions stand for; a finite
/// expansion continues with infinitely large terms.
pub fn egyptian_order(x: &[BigInt], y: &[BigInt]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        if a != b {
            return b.cmp(a);
        }
    }
    x.len().cmp(&y.len())
}

/// Compare the expansion of the query with `E` term by term.
pub struct EgyptianToDedekind {
    src: Source,
}

impl EgyptianToDedekind {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Egyptian, "Egyptian")?;
        Ok(EgyptianToDedekind { src })
    }
}

fn egyptian_above(e: &dyn Oracle, r: &Rational) -> Result<bool, Error> {
    if let Some(b) = outside_unit(r) {
        return Ok(b);
    }
    for (i, t) in EgyptianTerms::new(r).enumerate() {
        let q = Value::int(i as u64 + 1);
        let a = e.ask_int(q.clone())?;
        if a < BigInt::from(2) {
            return Err(Error::malformed(q, format!("Egyptian term {a} is below 2")));
        }
        match t.cmp(&a) {
            Ordering::Less => return Ok(true),
            Ordering::Greater => return Ok(false),
            Ordering::Equal => {}
        }
    }
    Ok(false)
}

impl Oracle for EgyptianToDedekind {
    fn kind(&self) -> RepKind {
        RepKind::DedekindCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        Ok(bit(egyptian_above(&*self.src, rational_arg(q)?)?))
    }
}

/// Greedy Egyptian terms from a general sum approximation from below.
pub struct GenSumToEgyptian {
    src: Source,
}

impl GenSumToEgyptian {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::GeneralSumBelow, "general sum from below")?;
        Ok(GenSumToEgyptian { src })
    }
}

impl Oracle for GenSumToEgyptian {
    fn kind(&self) -> RepKind {
        RepKind::Egyptian
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let g = Memo::new(&*self.src);
        let mut sum = Rational::zero();
        let mut d = BigInt::one();
        let mut m = BigInt::from(2);
        for _ in 0..n {
            let fits = |m: &BigInt| gensum_below(&g, &(&sum + Rational::new(1, &d * m).expect("nonzero")));
            let mut hi = m.clone();
            while !fits(&hi)? {
                hi *= 2;
            }
            m = least_true(m.clone(), hi, fits)?;
            d *= &m;
            sum = sum + Rational::new(1, d.clone())?;
        }
        Ok(Value::Int(m))
    }
}

/// Complete left best approximation from the Egyptian expansion: bound the
/// next denominator by a partial sum, then descend the Farey tree.
pub struct EgyptianToCompleteLeft {
    src: Source,
}

impl EgyptianToCompleteLeft {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Egyptian, "Egyptian")?;
        Ok(EgyptianToCompleteLeft { src })
    }
}

impl Oracle for EgyptianToCompleteLeft {
    fn kind(&self) -> RepKind {
        RepKind::CompleteLeftBest
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let e = Memo::new(&*self.src);
        let mut a = Rational::zero();
        let mut partial = Rational::zero();
        let mut d = BigInt::one();
        let mut i = 0u64;
        for _ in 0..n {
            while partial <= a {
                i += 1;
                let q = Value::int(i);
                let t = e.ask_int(q.clone())?;
                if t < BigInt::from(2) {
                    return Err(Error::malformed(q, format!("Egyptian term {t} is below 2")));
                }
                d *= t;
                partial = partial + Rational::new(1, d.clone())?;
            }
            let bound = partial.den().clone();
            a = simplest_above(&a, |r| egyptian_above(&e, r).map(|b| !b), Some(&bound))?;
        }
        Ok(Value::Rat(a))
    }
}

/// `FE(n) = L(n) - L(n-1)`.
pub struct CompleteLeftToFareyEgyptian {
    src: Source,
}

impl CompleteLeftToFareyEgyptian {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::CompleteLeftBest, "complete left best approximation")?;
        Ok(CompleteLeftToFareyEgyptian { src })
    }
}

impl Oracle for CompleteLeftToFareyEgyptian {
    fn kind(&self) -> RepKind {
        RepKind::FareyEgyptian
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let lo = left_at(&*self.src, n - 1)?;
        let hi = left_at(&*self.src, n)?;
        if FareyPair::new(lo.clone(), hi.clone()).is_err() || hi <= lo {
            return Err(Error::NotAnApproximant(format!("{lo} and {hi} are not consecutive left best approximants")));
        }
        Ok(Value::Rat(hi - lo))
    }
}

/// `L(n) = FE(1) + … + FE(n)`.
pub struct FareyEgyptianToCompleteLeft {
    src: Source,
}

impl FareyEgyptianToCompleteLeft {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::FareyEgyptian, "Farey-Egyptian")?;
        Ok(FareyEgyptianToCompleteLeft { src })
    }
}

impl Oracle for FareyEgyptianToCompleteLeft {
    fn kind(&self) -> RepKind {
        RepKind::CompleteLeftBest
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let mut sum = Rational::zero();
        for i in 1..=n {
            let q = Value::int(i);
            let u = self.src.ask_rat(q.clone())?;
            if !u.is_positive() || !u.num().is_one() {
                return Err(Error::malformed(q, format!("{u} is not a positive unit fraction")));
            }
            sum = sum + u;
        }
        Ok(Value::Rat(sum))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convert::testutil::{counted, gt};
    use crate::reference::Surd;
    use crate::reps::validate;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(o: &dyn Oracle, range: std::ops::RangeInclusive<u64>) -> Vec<Rational> {
        range.map(|i| o.ask_rat_at(i).unwrap()).collect()
    }

    fn same(o: &dyn Oracle, a: &Surd, queries: impl IntoIterator<Item = Value>) {
        let truth = gt(a, o.kind());
        for q in queries {
            assert_eq!(o.query(&q).unwrap(), truth.query(&q).unwrap(), "{} at {q} for {a}", o.kind());
        }
    }

    /// Every other approximant, as a sparse best approximation.
    struct Sparse(Source);

    impl Oracle for Sparse {
        fn kind(&self) -> RepKind {
            match self.0.kind() {
                RepKind::CompleteLeftBest => RepKind::LeftBest,
                _ => RepKind::RightBest,
            }
        }
        fn query(&self, q: &Value) -> Result<Value, Error> {
            let n = index_arg(q, 0)?;
            self.0.query(&Value::int(2 * n))
        }
    }

    #[test]
    fn completion_examples() {
        let a = Surd::sqrt2_minus_1();
        let c = bestapprox_to_complete(gt(&a, RepKind::CompleteLeftBest)).unwrap();
        assert_eq!(rats(&*c, 0..=3), vec![q(0, 1), q(1, 3), q(2, 5), q(7, 17)]);
        for (_, s) in Surd::panel() {
            for kind in [RepKind::CompleteLeftBest, RepKind::CompleteRightBest] {
                let c = bestapprox_to_complete(gt(&s, kind)).unwrap();
                same(&*c, &s, (0..=6).map(Value::int));
                let c = bestapprox_to_complete(Box::new(Sparse(gt(&s, kind)))).unwrap();
                same(&*c, &s, (0..=12).map(Value::int));
            }
            for kind in [RepKind::LeftBest, RepKind::RightBest] {
                let (src, h) = counted(&s, kind);
                let c = bestapprox_to_complete(src).unwrap();
                same(&*c, &s, (0..=12).map(Value::int));
                h.reset();
                c.query(&Value::int(9)).unwrap();
                assert_eq!(h.stats().calls, 1);
            }
        }
        let r = bestapprox_to_complete(gt(&a, RepKind::CompleteRightBest)).unwrap();
        assert_eq!(r.ask_rat_at(0).unwrap(), q(1, 1));
    }

    #[test]
    fn completion_rejects_non_approximants() {
        struct Bad;
        impl Oracle for Bad {
            fn kind(&self) -> RepKind {
                RepKind::LeftBest
            }
            fn query(&self, _: &Value) -> Result<Value, Error> {
                Ok(Value::Rat(Rational::new(1, 3).unwrap()))
            }
        }
        let c = bestapprox_to_complete(Box::new(Bad)).unwrap();
        assert!(matches!(c.query(&Value::int(5)), Err(Error::NotAnApproximant(_))));
    }

    #[test]
    fn best_to_dedekind_examples() {
        let a = Surd::sqrt2_minus_1();
        let (src, h) = counted(&a, RepKind::LeftBest);
        let d = bestapprox_to_dedekind(src).unwrap();
        assert!(!d.above(&q(2, 5)).unwrap());
        assert!(d.above(&q(1, 2)).unwrap());
        assert!(!d.above(&q(0, 1)).unwrap());
        assert_eq!(h.stats().calls, 2);
        for (_, s) in Surd::panel() {
            for kind in [RepKind::LeftBest, RepKind::RightBest, RepKind::CompleteLeftBest, RepKind::CompleteRightBest] {
                let d = bestapprox_to_dedekind(gt(&s, kind)).unwrap();
                assert!(validate(&*d, &s, 24).passed(), "{kind} for {s}");
            }
        }
    }

    #[test]
    fn gensum_from_best_examples() {
        let a = Surd::sqrt2_minus_1();
        let g = bestapprox_to_gensum(gt(&a, RepKind::LeftBest), Probe::Galloping).unwrap();
        let got: Vec<_> = (1..=3).map(|n| g.ask_rat(Value::pair(2, n)).unwrap()).collect();
        assert_eq!(got, vec![q(1, 4), q(1, 8), q(1, 32)]);
        assert_eq!(g.ask_rat(Value::pair(10, 1)).unwrap(), q(2, 5));
    }

    #[test]
    fn gensum_from_best_direct_probe() {
        for (_, s) in Surd::panel() {
            for kind in [RepKind::LeftBest, RepKind::RightBest] {
                let (src, h) = counted(&s, kind);
                let g = bestapprox_to_gensum(src, Probe::Direct).unwrap();
                let truth = gt(&s, g.kind());
                for b in [2u64, 3, 10] {
                    h.reset();
                    let q = Value::pair(b, 1);
                    assert_eq!(g.query(&q).unwrap(), truth.query(&q).unwrap());
                    assert!(h.stats().calls <= 2);
                }
            }
        }
    }

    #[test]
    fn gensum_from_best_matches_ground_truth() {
        for (_, s) in Surd::panel() {
            for kind in [RepKind::LeftBest, RepKind::RightBest, RepKind::CompleteLeftBest] {
                let g = bestapprox_to_gensum(gt(&s, kind), Probe::Galloping).unwrap();
                for b in [2u64, 3, 10] {
                    same(&*g, &s, (1..=12).map(|n| Value::pair(b, n)));
                }
            }
        }
    }

    #[test]
    fn gensum_to_best_examples() {
        let a = Surd::sqrt2_minus_1();
        let c = gensum_to_completebest(gt(&a, RepKind::GeneralSumBelow)).unwrap();
        assert_eq!(rats(&*c, 0..=3), vec![q(0, 1), q(1, 3), q(2, 5), q(7, 17)]);
        let c = gensum_to_completebest(gt(&Surd::golden(), RepKind::GeneralSumBelow)).unwrap();
        assert_eq!(c.ask_rat_at(1).unwrap(), q(1, 2));
        for (_, s) in Surd::panel() {
            for kind in [RepKind::GeneralSumBelow, RepKind::GeneralSumAbove] {
                let c = gensum_to_completebest(gt(&s, kind)).unwrap();
                same(&*c, &s, (0..=10).map(Value::int));
            }
        }
    }

    #[test]
    fn baire_examples() {
        let a = Surd::sqrt2_minus_1();
        let (src, h) = counted(&a, RepKind::StandardBaire);
        let r = baire_to_completebest(src).unwrap();
        assert_eq!(r.kind(), RepKind::CompleteRightBest);
        assert_eq!(rats(&*r, 0..=4), vec![q(1, 1), q(1, 2), q(3, 7), q(5, 12), q(17, 41)]);
        h.reset();
        r.query(&Value::int(4)).unwrap();
        assert_eq!(h.stats().calls, 4);
        let l = baire_to_completebest(gt(&a, RepKind::DualBaire)).unwrap();
        assert_eq!(l.kind(), RepKind::CompleteLeftBest);
        assert_eq!(rats(&*l, 0..=3), vec![q(0, 1), q(1, 3), q(2, 5), q(7, 17)]);
        let b = completebest_to_baire(gt(&a, RepKind::CompleteRightBest)).unwrap();
        let got: Vec<_> = (0..4).map(|i| b.ask_index(i).unwrap()).collect();
        assert_eq!(got, ints(&[0, 2, 0, 2]));
        let b = completebest_to_baire(gt(&a, RepKind::CompleteLeftBest)).unwrap();
        let got: Vec<_> = (0..5).map(|i| b.ask_index(i).unwrap()).collect();
        assert_eq!(got, ints(&[1, 0, 2, 0, 2]));
    }

    #[test]
    fn baire_round_trips() {
        for (_, s) in Surd::panel() {
            for kind in [RepKind::StandardBaire, RepKind::DualBaire] {
                let back = completebest_to_baire(baire_to_completebest(gt(&s, kind)).unwrap()).unwrap();
                assert_eq!(back.kind(), kind);
                same(&*back, &s, (0..8).map(Value::int));
            }
            for kind in [RepKind::CompleteLeftBest, RepKind::CompleteRightBest] {
                let back = baire_to_completebest(completebest_to_baire(gt(&s, kind)).unwrap()).unwrap();
                same(&*back, &s, (0..=8).map(Value::int));
            }
        }
    }

    #[test]
    fn egyptian_expansions() {
        assert_eq!(egyptian_expand_rational(2, 5).unwrap(), ints(&[3, 5]));
        assert_eq!(egyptian_expand_rational(1, 2).unwrap(), ints(&[2]));
        assert_eq!(egyptian_expand_rational(1, 9).unwrap(), ints(&[9]));
        assert!(egyptian_expand_rational(1, 1).is_err());
        assert!(egyptian_expand_rational(0, 3).is_err());
    }

    fn value_of(terms: &[BigInt]) -> Rational {
        let mut d = BigInt::one();
        let mut s = Rational::zero();
        for t in terms {
            d *= t;
            s = s + Rational::new(1, d.clone()).unwrap();
        }
        s
    }

    proptest! {
        #[test]
        fn expansion_sums_back(p in 1i64..500, extra in 1i64..500) {
            let q = p + extra;
            let e = egyptian_expand_rational(p, q).unwrap();
            prop_assert_eq!(value_of(&e), Rational::new(p, q).unwrap());
            prop_assert!(e.len() as i64 <= p);
            prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(e.iter().all(|t| *t <= BigInt::from(q)));
        }
    }

    #[test]
    fn egyptian_order_examples() {
        let a = ints(&[3, 5, 5, 16, 18]);
        assert_eq!(egyptian_order(&ints(&[3, 5]), &a), Ordering::Less);
        assert_eq!(egyptian_order(&ints(&[2]), &a), Ordering::Greater);
        assert_eq!(egyptian_order(&ints(&[3]), &a), Ordering::Less);
        assert_eq!(egyptian_order(&a, &a), Ordering::Equal);
    }

    #[test]
    fn egyptian_to_dedekind_examples() {
        let a = Surd::sqrt2_minus_1();
        let (src, h) = counted(&a, RepKind::Egyptian);
        let d = EgyptianToDedekind::new(src).unwrap();
        assert!(!d.above(&q(2, 5)).unwrap());
        assert!(d.above(&q(1, 2)).unwrap());
        assert!(!d.above(&q(1, 3)).unwrap());
        for (p, den) in [(2, 5), (7, 17), (5, 12), (3, 7)] {
            h.reset();
            d.above(&q(p, den)).unwrap();
            assert!(h.stats().calls <= p as u64);
        }
        for (_, s) in Surd::panel() {
            let d = EgyptianToDedekind::new(gt(&s, RepKind::Egyptian)).unwrap();
            assert!(validate(&d, &s, 24).passed());
        }
    }

    #[test]
    fn gensum_to_egyptian_examples() {
        let a = Surd::sqrt2_minus_1();
        let e = GenSumToEgyptian::new(gt(&a, RepKind::GeneralSumBelow)).unwrap();
        let got: Vec<_> = (1..=5).map(|i| e.ask_index(i).unwrap()).collect();
        assert_eq!(got, ints(&[3, 5, 5, 16, 18]));
        let e = GenSumToEgyptian::new(gt(&Surd::golden(), RepKind::GeneralSumBelow)).unwrap();
        assert_eq!(e.ask_index(1).unwrap(), BigInt::from(2));
        for (_, s) in Surd::panel() {
            let e = GenSumToEgyptian::new(gt(&s, RepKind::GeneralSumBelow)).unwrap();
            same(&e, &s, (1..=10).map(Value::int));
        }
    }

    #[test]
    fn egyptian_to_complete_left_examples() {
        let a = Surd::sqrt2_minus_1();
        let c = EgyptianToCompleteLeft::new(gt(&a, RepKind::Egyptian)).unwrap();
        assert_eq!(rats(&c, 0..=3), vec![q(0, 1), q(1, 3), q(2, 5), q(7, 17)]);
        let fe = CompleteLeftToFareyEgyptian::new(Box::new(c)).unwrap();
        assert_eq!(rats(&fe, 1..=4), vec![q(1, 3), q(1, 15), q(1, 85), q(1, 493)]);
        for (_, s) in Surd::panel() {
            let c = EgyptianToCompleteLeft::new(gt(&s, RepKind::Egyptian)).unwrap();
            same(&c, &s, (0..=8).map(Value::int));
        }
    }

    #[test]
    fn farey_egyptian_pair() {
        for (_, s) in Surd::panel() {
            let (src, h) = counted(&s, RepKind::FareyEgyptian);
            let c = FareyEgyptianToCompleteLeft::new(src).unwrap();
            same(&c, &s, (0..=16).map(Value::int));
            h.reset();
            c.query(&Value::int(7)).unwrap();
            assert_eq!(h.stats().calls, 7);
            let fe = CompleteLeftToFareyEgyptian::new(gt(&s, RepKind::CompleteLeftBest)).unwrap();
            same(&fe, &s, (1..=16).map(Value::int));
        }
    }
}
