//! Dedekind cuts, general base expansions, Beatty sequences and Hurwitz
//! characteristics.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{expect_kind, Source};
use crate::error::Error;
use crate::farey::{descend, FareyPair, Position};
use crate::numeric::Rational;
use crate::reps::{base_index_arg, big_index_arg, index_arg, rational_arg, Oracle, OracleExt, RepKind, Value};

/// The cut outside `(0, 1)` needs no oracle.
pub(crate) fn outside_unit(r: &Rational) -> Option<bool> {
    if !r.is_positive() {
        Some(false)
    } else if *r >= Rational::one() {
        Some(true)
    } else {
        None
    }
}

fn bit(above: bool) -> Value {
    Value::int(u8::from(above))
}

/// Largest `m` in `lo..hi` with `m/den` below the number, given `lo/den`
/// below and `hi/den` above.
fn floor_search(d: &dyn Oracle, den: &BigInt, mut lo: BigInt, mut hi: BigInt) -> Result<BigInt, Error> {
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if d.above(&Rational::new(mid.clone(), den.clone())?)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Digit `n` of base `b` by binary search inside each digit interval.
pub struct DedekindToGeneralBase {
    src: Source,
}

impl DedekindToGeneralBase {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::DedekindCut, "Dedekind cut")?;
        Ok(DedekindToGeneralBase { src })
    }
}

impl Oracle for DedekindToGeneralBase {
    fn kind(&self) -> RepKind {
        RepKind::GeneralBase
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let (b, n) = base_index_arg(q)?;
        let mut prefix = BigInt::zero();
        let mut den = BigInt::one();
        let mut digit = BigInt::zero();
        for _ in 0..n {
            den *= &b;
            let lo = &prefix * &b;
            let hi = &lo + &b;
            let m = floor_search(&*self.src, &den, lo.clone(), hi)?;
            digit = &m - &lo;
            prefix = m;
        }
        Ok(Value::Int(digit))
    }
}

/// `n/m` is below the number iff `n ≤ E(m, 1)`.
pub struct GeneralBaseToDedekind {
    src: Source,
}

impl GeneralBaseToDedekind {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::GeneralBase, "general base")?;
        Ok(GeneralBaseToDedekind { src })
    }
}

impl Oracle for GeneralBaseToDedekind {
    fn kind(&self) -> RepKind {
        RepKind::DedekindCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let r = rational_arg(q)?;
        if let Some(b) = outside_unit(r) {
            return Ok(bit(b));
        }
        let q = Value::Pair(r.den().clone(), BigInt::one());
        let e = self.src.ask_int(q.clone())?;
        if e.is_negative() || &e >= r.den() {
            return Err(Error::malformed(q, format!("{e} is not a base-{} digit", r.den())));
        }
        Ok(bit(r.num() > &e))
    }
}

/// `B(n) = ⌊nα⌋` by binary search, `⌈log₂ n⌉` calls.
pub struct DedekindToBeatty {
    src: Source,
}

impl DedekindToBeatty {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::DedekindCut, "Dedekind cut")?;
        Ok(DedekindToBeatty { src })
    }
}

impl Oracle for DedekindToBeatty {
    fn kind(&self) -> RepKind {
        RepKind::Beatty
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = big_index_arg(q, 1)?;
        Ok(Value::Int(floor_search(&*self.src, &n, BigInt::zero(), n.clone())?))
    }
}

/// `n/m` is below the number iff `n ≤ B(m)`.
pub struct BeattyToDedekind {
    src: Source,
}

impl BeattyToDedekind {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Beatty, "Beatty")?;
        Ok(BeattyToDedekind { src })
    }
}

impl Oracle for BeattyToDedekind {
    fn kind(&self) -> RepKind {
        RepKind::DedekindCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let r = rational_arg(q)?;
        if let Some(b) = outside_unit(r) {
            return Ok(bit(b));
        }
        let b = self.src.ask_int(Value::Int(r.den().clone()))?;
        Ok(bit(r.num() > &b))
    }
}

/// The first `n` turns of the Farey path, one mediant query each.
pub struct DedekindToHurwitz {
    src: Source,
}

impl DedekindToHurwitz {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::DedekindCut, "Dedekind cut")?;
        Ok(DedekindToHurwitz { src })
    }
}

impl Oracle for DedekindToHurwitz {
    fn kind(&self) -> RepKind {
        RepKind::Hurwitz
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let n = index_arg(q, 0)?;
        let mut node = FareyPair::root();
        let mut pos = Position::empty();
        for _ in 0..n {
            let right = !self.src.above(&node.mediant())?;
            pos.push(right);
            node = descend(&node, right);
        }
        Ok(Value::Bits(pos))
    }
}

/// Walk `H(n + m)` until `n/m` leaves the interval or becomes its mediant.
pub struct HurwitzToDedekind {
    src: Source,
}

impl HurwitzToDedekind {
    pub fn new(src: Source) -> Result<Self, Error> {
        expect_kind(&*src, src.kind() == RepKind::Hurwitz, "Hurwitz")?;
        Ok(HurwitzToDedekind { src })
    }
}

impl Oracle for HurwitzToDedekind {
    fn kind(&self) -> RepKind {
        RepKind::DedekindCut
    }

    fn query(&self, q: &Value) -> Result<Value, Error> {
        let r = rational_arg(q)?;
        if let Some(b) = outside_unit(r) {
            return Ok(bit(b));
        }
        let q = Value::Int(r.num() + r.den());
        let path = self.src.ask_bits(q.clone())?;
        let mut node = FareyPair::root();
        for &right in path.bits() {
            if *r <= node.left {
                return Ok(bit(false));
            }
            if *r >= node.right {
                return Ok(bit(true));
            }
            if node.mediant() == *r {
                return Ok(bit(!right));
            }
            node = descend(&node, right);
        }
        Err(Error::malformed(q, format!("the path is too short to place {r}")))
    }
}
