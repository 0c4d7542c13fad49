//! Continued fractions, contractors and trace functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dedekind::outside_unit;
use super::{expect_kind, least_true, mirrored, simplest_above, Memo, Side, Source};
use crate::error::Error;
use crate::farey::Endpoint;
use crate::numeric::Rational;
use crate::reps::{index_arg, rational_arg, Oracle, OracleExt, RepKind, Value};

fn bit(above: bool) -> Value {
    Value::int(u8::from(above))
}

/// Partial quotients from the complete left and right best approximations,
/// with both counting loops replaced by a single division.
pub struct CompletePairToCf {
    left: Source,
    right: Source,
}

impl CompletePairToCf {
    pub fn new(left: Source, right: Source) -> Result<Self, Error> {
        expect_kind(&*left, left.kind() == RepKind::CompleteLeftBest, "complete left best approximation")?;
        expect_kind(&*right, right.kind() == RepKind::CompleteRightBest, "complete right best approximation")?;
        Ok(CompletePairToCf { left, right })
    }
}

/// `(top - low) / by`, which has to be a positive integer.
fn exact_step(term: u64, top: &BigInt, low: &BigInt, by: &BigInt) -> Result<u64, Error> {
    let num = top - low;
    let (x, rem) = num.div_rem(by);
    if !rem.is_zero() || !x.is_positive() {
        return Err(Error::NonIntegralStep { term, num: num.to_string(), den: by.to_string() });
    }
    x.to_u64().ok_or_else(|| Error::InvalidQuery(format!("partial quotient {x} is too large to index with")))
}

impl Oracle for CompletePairToCf {
    fn kind(&self) -> RepKind {
        RepKind::ContinuedFraction
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 1)?;
        let left = Memo::new(&*self.left);
        let right = Memo::new(&*self.right);
        let b = |i: u64| left.ask_rat_at(i).map(|r| r.den().clone());
        let d = |i: u64| right.ask_rat_at(i).map(|r| r.den().clone());
        let (mut l, mut r) = (0u64, 0u64);
        let mut i = 1;
        loop {
            let x = exact_step(i, &b(l + 1)?, &d(r)?, &b(l)?)?;
            r += x - 1;
            if i == n {
                return Ok(Value::int(x));
            }
            i += 1;
            l += 1;
            let x = exact_step(i, &d(r + 1)?, &b(l)?, &d(r)?)?;
            l += x - 1;
            if i == n {
                return Ok(Value::int(x));
            }
            i += 1;
            r += 1;
        }
    }
}

/// Complete best approximations on one side from the continued fraction:
/// walk the path `0^(a1-1) 1^a2 0^a3 …` a run at a time.
pub struct CfToCompleteBest {
    src: Source,
    side: Endpoint,
}

impl CfToCompleteBest {
    pub fn new(src: Source, side: Side) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::ContinuedFraction, "continued fraction")?;
        let side = match side {
            Side::LeftOrBelow => Endpoint::Left,
            Side::RightOrAbove => Endpoint::Right,
        };
        Ok(CfToCompleteBest { src, side })
    }
}

impl Oracle for CfToCompleteBest {
    fn kind(&self) -> RepKind {
        match self.side {
            Endpoint::Left => RepKind::CompleteLeftBest,
            Endpoint::Right => RepKind::CompleteRightBest,
        }
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let mut left = (BigInt::zero(), BigInt::one());
        let mut right = (BigInt::one(), BigInt::one());
        let mut need = BigInt::from(n);
        let mut k = 0u64;
        loop {
            if need.is_zero() {
                let (p, q) = if self.side == Endpoint::Left { left } else { right };
                return Ok(Value::Rat(Rational::new(p, q)?));
            }
            k += 1;
            let q = Value::int(k);
            let a = self.src.ask_int(q.clone())?;
            if !a.is_positive() {
                return Err(Error::malformed(q, format!("partial quotient {a} is not positive")));
            }
            let run = if k == 1 { a - 1 } else { a };
            // An odd term moves right endpoints towards the left one, an even
            // term the other way.
            let (moving, fixed, ours) = if k % 2 == 1 {
                (&mut right, &left, self.side == Endpoint::Right)
            } else {
                (&mut left, &right, self.side == Endpoint::Left)
            };
            let steps = if ours { run.clone().min(need.clone()) } else { run };
            moving.0 += &steps * &fixed.0;
            moving.1 += &steps * &fixed.1;
            if ours {
                need -= steps;
            }
        }
    }
}

/// `i` with `r_i` the first approximant past `x`, by galloping then
/// bisection.
fn first_past(src: &dyn Oracle, past: impl Fn(&Rational) -> bool) -> Result<Option<u64>, Error> {
    let mut hi = 1u64;
    loop {
        let r = src.ask_rat_at(hi)?;
        if past(&r) {
            break;
        }
        hi = hi.checked_mul(2).ok_or_else(|| Error::InvalidQuery("approximant index overflow".into()))?;
        if hi > 1 << 62 {
            return Ok(None);
        }
    }
    let lo = BigInt::from(hi / 2);
    let i = least_true(lo, BigInt::from(hi), |i| Ok(past(&src.ask_rat(Value::Int(i.clone()))?)))?;
    Ok(i.to_u64())
}

/// The piecewise linear contractor through consecutive best approximants.
pub struct CompletePairToContractor {
    left: Source,
    right: Source,
}

impl CompletePairToContractor {
    pub fn new(left: Source, right: Source) -> Result<Self, Error> {
        expect_kind(&*left, left.kind() == RepKind::CompleteLeftBest, "complete left best approximation")?;
        expect_kind(&*right, right.kind() == RepKind::CompleteRightBest, "complete right best approximation")?;
        Ok(CompletePairToContractor { left, right })
    }
}

impl Oracle for CompletePairToContractor {
    fn kind(&self) -> RepKind {
        RepKind::Contractor
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let x = rational_arg(q)?;
        if x.is_negative() || *x > Rational::one() {
            return Err(Error::InvalidQuery(format!("{x} is not in [0, 1]")));
        }
        let left = Memo::new(&*self.left);
        let right = Memo::new(&*self.right);
        let mut j = 1u64;
        let (src, i): (&dyn Oracle, u64) = loop {
            if left.ask_rat_at(j)? > *x {
                let i = first_past(&left, |r| r > x)?.expect("bracketed");
                break (&left, i);
            }
            if right.ask_rat_at(j)? < *x {
                let i = first_past(&right, |r| r < x)?.expect("bracketed");
                break (&right, i);
            }
            j = j.checked_mul(2).ok_or_else(|| Error::InvalidQuery(format!("no approximant separates {x}")))?;
        };
        let r0 = src.ask_rat_at(i - 1)?;
        let r1 = src.ask_rat_at(i)?;
        let r2 = src.ask_rat_at(i + 1)?;
        let step = &r1 - &r0;
        let next = &r2 - &r1;
        if step.is_zero() || (&next / &step).abs() >= Rational::one() || (&next / &step).is_negative() {
            return Err(Error::NotAnApproximant(format!("{r0}, {r1}, {r2} do not shrink towards the number")));
        }
        Ok(Value::Rat(&r1 + (next / step) * (x - &r0)))
    }
}

/// Below iff `F(r) > r`.
pub struct ContractorToDedekind {
    src: Source,
}

impl ContractorToDedekind {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, matches!(src.kind(), RepKind::Contractor | RepKind::TraceFunction), "contractor")?;
        Ok(ContractorToDedekind { src })
    }
}

fn moves_right(t: &dyn Oracle, r: &Rational) -> Result<bool, Error> {
    let q = Value::Rat(r.clone());
    let y = t.ask_rat(q.clone())?;
    if y == *r {
        return Err(Error::malformed(q, format!("{r} is a fixed point")));
    }
    Ok(y > *r)
}

impl Oracle for ContractorToDedekind {
    fn kind(&self) -> RepKind {
        RepKind::DedekindCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let r = rational_arg(q)?;
        if let Some(b) = outside_unit(r) {
            return Ok(bit(b));
        }
        Ok(bit(!moves_right(&*self.src, r)?))
    }
}

/// Complete left best approximation from a trace function: the halfway
/// point `(r + T(r))/2` bounds the next denominator, the direction of `T`
/// decides the cut.
pub struct TraceToCompleteLeft {
    src: Source,
}

impl Oracle for TraceToCompleteLeft {
    fn kind(&self) -> RepKind {
        RepKind::CompleteLeftBest
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let t = Memo::new(&*self.src);
        let mut a = Rational::zero();
        for _ in 0..n {
            let q = Value::Rat(a.clone());
            let y = t.ask_rat(q.clone())?;
            if y <= a {
                return Err(Error::malformed(q, format!("{a} lies below the number but moved to {y}")));
            }
            let half = (&a + &y) / Rational::from_int(2);
            let bound = half.den().clone();
            a = simplest_above(
                &a,
                |r| {
                    if let Some(b) = outside_unit(r) {
                        return Ok(!b);
                    }
                    moves_right(&t, r)
                },
                Some(&bound),
            )?;
        }
        Ok(Value::Rat(a))
    }
}

/// Complete best approximation on either side from a trace function or
/// contractor.
pub fn trace_to_completebest(src: Source, side: Side) -> Result<Source, Error> {
    expect_kind(&*src, matches!(src.kind(), RepKind::Contractor | RepKind::TraceFunction), "trace function")?;
    mirrored(side, src, |s| Ok(Box::new(TraceToCompleteLeft { src: s })))
}
