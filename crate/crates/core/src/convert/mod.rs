//! Conversions between representations. Every adapter is itself an oracle
//! that answers by querying the oracles it was built from.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::farey::{descend, FareyPair};
use crate::numeric::{pow, Rational};
use crate::reps::{Oracle, Reflected, RepKind, Value};

mod base;
mod best;
mod cauchy;
mod cf;
mod dedekind;
pub mod graph;

pub use base::{
    base2_to_gray, sum_to_base, sum_to_sum, Base2ToGray, BaseToBase, BaseToCauchy, GenSumToSum, GeneralBaseToBase,
    GrayToBase2,
};
pub use best::{
    baire_to_completebest, bestapprox_to_complete, bestapprox_to_dedekind, bestapprox_to_gensum, completebest_to_baire,
    egyptian_expand_rational, egyptian_order, gensum_to_completebest, BaireToRight, BestToComplete, BestToDedekind,
    BestToGenSum, CompleteLeftToFareyEgyptian, EgyptianToCompleteLeft, EgyptianToDedekind, FareyEgyptianToCompleteLeft,
    GenSumToCompleteLeft, GenSumToEgyptian, Probe, RightToBaire,
};
pub use cauchy::{
    CauchyToConvbase, CauchyToFuzzy, CauchyToIncreasing, CauchyToWeihrauch, ConvbaseToCauchy, DigitExtract,
    FuzzyToSigned, SignedState, SignedToCauchy,
};
pub use cf::{
    trace_to_completebest, CfToCompleteBest, CompletePairToCf, CompletePairToContractor, ContractorToDedekind,
    TraceToCompleteLeft,
};
pub use dedekind::{
    BeattyToDedekind, DedekindToBeatty, DedekindToGeneralBase, DedekindToHurwitz, GeneralBaseToDedekind,
    HurwitzToDedekind,
};

pub type Source = Box<dyn Oracle>;

/// Which half of the order an algorithm works on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    LeftOrBelow,
    RightOrAbove,
}

/// Build a one-sided adapter. The right-hand version is the left-hand
/// algorithm run on `1 - α` and read back through the reflection.
pub fn mirrored<F>(side: Side, src: Source, build: F) -> Result<Source, Error>
where
    F: FnOnce(Source) -> Result<Source, Error>,
{
    match side {
        Side::LeftOrBelow => build(src),
        Side::RightOrAbove => {
            let inner = build(Box::new(Reflected::new(src)?))?;
            Ok(Box::new(Reflected::new(inner)?))
        }
    }
}

pub(crate) fn expect_kind(src: &dyn Oracle, ok: bool, wanted: &str) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidQuery(format!("expected a {wanted} oracle, got {}", src.kind())))
    }
}

/// The same answers under another name, for a representation that is a
/// special case of another.
pub struct Relabel {
    src: Source,
    kind: RepKind,
}

impl Relabel {
    pub fn new(src: Source, kind: RepKind) -> Result<Self, Error> {
        use RepKind::*;
        let ok = matches!(
            (src.kind(), kind),
            (IncreasingCauchy, Cauchy)
                | (CompleteLeftBest, LeftBest)
                | (CompleteRightBest, RightBest)
                | (Contractor, TraceFunction)
        );
        if !ok {
            return Err(Error::InvalidQuery(format!("{} is not a special case of {kind}", src.kind())));
        }
        Ok(Relabel { src, kind })
    }
}

impl Oracle for Relabel {
    fn kind(&self) -> RepKind {
        self.kind
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        self.src.query(q)
    }
}

/// Remembers answers for the length of one computation.
pub(crate) struct Memo<'a> {
    src: &'a dyn Oracle,
    seen: RefCell<HashMap<Value, Value>>,
}

impl<'a> Memo<'a> {
    pub(crate) fn new(src: &'a dyn Oracle) -> Self {
        Memo { src, seen: RefCell::new(HashMap::new()) }
    }
}

impl Oracle for Memo<'_> {
    fn kind(&self) -> RepKind {
        self.src.kind()
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        if let Some(a) = self.seen.borrow().get(q) {
            return Ok(a.clone());
        }
        let a = self.src.query(q)?;
        self.seen.borrow_mut().insert(q.clone(), a.clone());
        Ok(a)
    }
}

/// Split a sum-approximation term `D·b^-m` into `(D, m)`.
pub(crate) fn split_term(t: &Rational, b: u64, q: &Value) -> Result<(u64, u64), Error> {
    if !t.is_positive() {
        return Err(Error::malformed(q, format!("term {t} is not positive")));
    }
    let den = t.den();
    let mut m = 0u64;
    let mut p = BigInt::one();
    while (&p % den) != BigInt::zero() {
        p *= b;
        m += 1;
        if p.bits() > den.bits() + 64 * 8 + b.ilog2() as u64 * 2 + 8 && (&p % den) != BigInt::zero() {
            return Err(Error::malformed(q, format!("{t} is not a base-{b} fraction")));
        }
    }
    let digit = (t.num() * &p / den).to_u64().filter(|&d| d >= 1 && d < b);
    match digit {
        Some(d) if m >= 1 => Ok((d, m)),
        _ => Err(Error::malformed(q, format!("{t} is not a nonzero base-{b} digit term"))),
    }
}

/// `D · b^-m`.
pub(crate) fn digit_term(d: u64, b: u64, m: u64) -> Rational {
    Rational::new(d, pow(b, m)).expect("nonzero")
}

/// The fraction with the smallest denominator strictly between `lo` and the
/// number, found by Farey descent. `below(r)` decides `r < α`; the search
/// gives up once denominators pass `bound`.
pub(crate) fn simplest_above<F>(lo: &Rational, mut below: F, bound: Option<&BigInt>) -> Result<Rational, Error>
where
    F: FnMut(&Rational) -> Result<bool, Error>,
{
    let mut node = FareyPair::root();
    loop {
        let m = node.mediant();
        if bound.is_some_and(|b| m.den() > b) {
            return Err(Error::malformed(
                format!("search above {lo}"),
                format!("no fraction with denominator at most {} lies between {lo} and the number", bound.unwrap()),
            ));
        }
        if m <= *lo {
            node = descend(&node, true);
        } else if below(&m)? {
            return Ok(m);
        } else {
            node = descend(&node, false);
        }
    }
}

/// Least `x` in `lo..=hi` with `pred(x)`, given that `pred` is monotone and
/// `pred(hi)` holds.
pub(crate) fn least_true<F>(lo: BigInt, hi: BigInt, mut pred: F) -> Result<BigInt, Error>
where
    F: FnMut(&BigInt) -> Result<bool, Error>,
{
    if pred(&lo)? {
        return Ok(lo);
    }
    let (mut lo, mut hi) = (lo, hi);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if pred(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
