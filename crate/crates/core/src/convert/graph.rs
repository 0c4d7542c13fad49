//! The conversion graph: which representations convert into which, the
//! adapter chains that do it, and why the remaining pairs are blocked.

use std::collections::HashMap;
use std::fmt;

use super::*;
use crate::numeric::base_transition_factor;

/// Bases the matrix is drawn over unless told otherwise.
pub const DEFAULT_BASES: &[u64] = &[2, 3, 4, 10];

/// A recipe for building a target oracle out of copies of one source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Plan {
    Source(RepKind),
    Step(Box<Plan>, RepKind),
    /// Built from the complete left and complete right best approximations.
    Both(Box<Plan>, Box<Plan>, RepKind),
}

impl Plan {
    pub fn target(&self) -> RepKind {
        match self {
            Plan::Source(k) | Plan::Step(_, k) | Plan::Both(_, _, k) => *k,
        }
    }

    /// Number of adapters in the chain.
    pub fn cost(&self) -> usize {
        match self {
            Plan::Source(_) => 0,
            Plan::Step(p, _) => p.cost() + 1,
            Plan::Both(l, r, _) => l.cost() + r.cost() + 1,
        }
    }

    pub fn build(&self, source: &dyn Fn() -> Source) -> Result<Source, Error> {
        match self {
            Plan::Source(k) => {
                let s = source();
                expect_kind(&*s, s.kind() == *k, &k.token())?;
                Ok(s)
            }
            Plan::Step(p, to) => step(p.build(source)?, *to),
            Plan::Both(l, r, to) => both(l.build(source)?, r.build(source)?, *to),
        }
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Source(k) => write!(f, "{}", k.token()),
            Plan::Step(p, k) => write!(f, "{p} -> {}", k.token()),
            Plan::Both(l, r, k) => write!(f, "({l} & {r}) -> {}", k.token()),
        }
    }
}

/// Single-source adapters out of `from`, restricted to `bases`.
pub fn direct_targets(from: RepKind, bases: &[u64]) -> Vec<RepKind> {
    use RepKind::*;
    let has = |b: u64| bases.contains(&b);
    let mut out = Vec::new();
    match from {
        Cauchy => {
            out.extend([Weihrauch, FuzzyCut, IncreasingCauchy]);
            out.extend(bases.iter().map(|&b| ConvergingBase(b)));
        }
        IncreasingCauchy | SignedDigit | ConvergingBase(_) => out.push(Cauchy),
        FuzzyCut => out.push(SignedDigit),
        BaseExpansion(b) => {
            out.push(Cauchy);
            out.extend(
                bases.iter().filter(|&&a| a != b && base_transition_factor(a, b).is_some()).map(|&a| BaseExpansion(a)),
            );
            if b == 2 {
                out.push(GrayCode);
            }
        }
        GrayCode if has(2) => out.push(BaseExpansion(2)),
        SumBelow(b) | SumAbove(b) => {
            let same = |a| if matches!(from, SumBelow(_)) { SumBelow(a) } else { SumAbove(a) };
            for &a in bases {
                if base_transition_factor(a, b).is_some() {
                    if a != b {
                        out.push(same(a));
                    }
                    out.push(BaseExpansion(a));
                }
            }
        }
        DedekindCut => out.extend([GeneralBase, Beatty, Hurwitz]),
        GeneralBase => {
            out.push(DedekindCut);
            out.extend(bases.iter().map(|&b| BaseExpansion(b)));
        }
        Beatty | Hurwitz => out.push(DedekindCut),
        LeftBest => out.extend([CompleteLeftBest, DedekindCut, GeneralSumBelow]),
        RightBest => out.extend([CompleteRightBest, DedekindCut, GeneralSumAbove]),
        CompleteLeftBest => out.extend([LeftBest, DualBaire, FareyEgyptian]),
        CompleteRightBest => out.extend([RightBest, StandardBaire]),
        GeneralSumBelow => {
            out.extend([CompleteLeftBest, Egyptian]);
            out.extend(bases.iter().map(|&b| SumBelow(b)));
        }
        GeneralSumAbove => {
            out.push(CompleteRightBest);
            out.extend(bases.iter().map(|&b| SumAbove(b)));
        }
        StandardBaire => out.push(CompleteRightBest),
        DualBaire | FareyEgyptian => out.push(CompleteLeftBest),
        Egyptian => out.extend([DedekindCut, CompleteLeftBest]),
        ContinuedFraction => out.extend([CompleteLeftBest, CompleteRightBest]),
        Contractor => out.extend([TraceFunction, DedekindCut, CompleteLeftBest, CompleteRightBest]),
        TraceFunction => out.extend([CompleteLeftBest, CompleteRightBest, DedekindCut]),
        Weihrauch | GrayCode => {}
    }
    out
}

/// Targets that need both complete best approximations.
const PAIRED: [RepKind; 2] = [RepKind::ContinuedFraction, RepKind::Contractor];

fn boxed<O: Oracle + 'static>(o: Result<O, Error>) -> Result<Source, Error> {
    o.map(|o| Box::new(o) as Source)
}

/// One adapter from `src` to `to`.
pub fn step(src: Source, to: RepKind) -> Result<Source, Error> {
    use RepKind::*;
    let from = src.kind();
    match (from, to) {
        (Cauchy, Weihrauch) => boxed(CauchyToWeihrauch::new(src)),
        (Cauchy, FuzzyCut) => boxed(CauchyToFuzzy::new(src)),
        (Cauchy, IncreasingCauchy) => boxed(CauchyToIncreasing::new(src)),
        (Cauchy, ConvergingBase(b)) => boxed(CauchyToConvbase::new(src, b)),
        (IncreasingCauchy, Cauchy)
        | (CompleteLeftBest, LeftBest)
        | (CompleteRightBest, RightBest)
        | (Contractor, TraceFunction) => boxed(Relabel::new(src, to)),
        (SignedDigit, Cauchy) => boxed(SignedToCauchy::new(src)),
        (FuzzyCut, SignedDigit) => boxed(FuzzyToSigned::new(src)),
        (ConvergingBase(_), Cauchy) => boxed(ConvbaseToCauchy::new(src)),
        (BaseExpansion(_), Cauchy) => boxed(BaseToCauchy::new(src)),
        (BaseExpansion(2), GrayCode) => boxed(Base2ToGray::new(src)),
        (BaseExpansion(_), BaseExpansion(a)) => boxed(BaseToBase::new(src, a)),
        (GrayCode, BaseExpansion(2)) => boxed(GrayToBase2::new(src)),
        (SumBelow(_), SumBelow(a)) | (SumAbove(_), SumAbove(a)) => sum_to_sum(src, a),
        (SumBelow(_) | SumAbove(_), BaseExpansion(a)) => sum_to_base(src, a),
        (DedekindCut, GeneralBase) => boxed(DedekindToGeneralBase::new(src)),
        (DedekindCut, Beatty) => boxed(DedekindToBeatty::new(src)),
        (DedekindCut, Hurwitz) => boxed(DedekindToHurwitz::new(src)),
        (GeneralBase, DedekindCut) => boxed(GeneralBaseToDedekind::new(src)),
        (GeneralBase, BaseExpansion(b)) => boxed(GeneralBaseToBase::new(src, b)),
        (Beatty, DedekindCut) => boxed(BeattyToDedekind::new(src)),
        (Hurwitz, DedekindCut) => boxed(HurwitzToDedekind::new(src)),
        (LeftBest, CompleteLeftBest) | (RightBest, CompleteRightBest) => bestapprox_to_complete(src),
        (LeftBest | RightBest, DedekindCut) => bestapprox_to_dedekind(src),
        (LeftBest, GeneralSumBelow) | (RightBest, GeneralSumAbove) => bestapprox_to_gensum(src, Probe::Galloping),
        (GeneralSumBelow, CompleteLeftBest) | (GeneralSumAbove, CompleteRightBest) => gensum_to_completebest(src),
        (GeneralSumBelow, SumBelow(b)) | (GeneralSumAbove, SumAbove(b)) => boxed(GenSumToSum::new(src, b)),
        (GeneralSumBelow, Egyptian) => boxed(GenSumToEgyptian::new(src)),
        (StandardBaire, CompleteRightBest) | (DualBaire, CompleteLeftBest) => baire_to_completebest(src),
        (CompleteRightBest, StandardBaire) | (CompleteLeftBest, DualBaire) => completebest_to_baire(src),
        (Egyptian, DedekindCut) => boxed(EgyptianToDedekind::new(src)),
        (Egyptian, CompleteLeftBest) => boxed(EgyptianToCompleteLeft::new(src)),
        (CompleteLeftBest, FareyEgyptian) => boxed(CompleteLeftToFareyEgyptian::new(src)),
        (FareyEgyptian, CompleteLeftBest) => boxed(FareyEgyptianToCompleteLeft::new(src)),
        (ContinuedFraction, CompleteLeftBest) => boxed(CfToCompleteBest::new(src, Side::LeftOrBelow)),
        (ContinuedFraction, CompleteRightBest) => boxed(CfToCompleteBest::new(src, Side::RightOrAbove)),
        (Contractor | TraceFunction, DedekindCut) => boxed(ContractorToDedekind::new(src)),
        (Contractor | TraceFunction, CompleteLeftBest) => trace_to_completebest(src, Side::LeftOrBelow),
        (Contractor | TraceFunction, CompleteRightBest) => trace_to_completebest(src, Side::RightOrAbove),
        _ => Err(Error::InvalidQuery(format!("no single adapter from {} to {}", from.token(), to.token()))),
    }
}

/// An adapter fed by the complete left and right best approximations.
pub fn both(left: Source, right: Source, to: RepKind) -> Result<Source, Error> {
    match to {
        RepKind::ContinuedFraction => Ok(Box::new(CompletePairToCf::new(left, right)?)),
        RepKind::Contractor => Ok(Box::new(CompletePairToContractor::new(left, right)?)),
        _ => Err(Error::InvalidQuery(format!("{} is not built from a pair of best approximations", to.token()))),
    }
}

/// The cheapest plan for every kind reachable from `from`.
pub fn plans_from(from: RepKind, bases: &[u64]) -> HashMap<RepKind, Plan> {
    let mut best: HashMap<RepKind, Plan> = HashMap::new();
    best.insert(from, Plan::Source(from));
    let mut order = vec![from];
    let mut changed = true;
    while changed {
        changed = false;
        let mut offer = |best: &mut HashMap<RepKind, Plan>, order: &mut Vec<RepKind>, p: Plan| {
            let k = p.target();
            match best.get(&k) {
                Some(old) if old.cost() <= p.cost() => {}
                old => {
                    if old.is_none() {
                        order.push(k);
                    }
                    best.insert(k, p);
                    changed = true;
                }
            }
        };
        for u in order.clone() {
            let pu = best[&u].clone();
            for v in direct_targets(u, bases) {
                offer(&mut best, &mut order, Plan::Step(Box::new(pu.clone()), v));
            }
        }
        if let (Some(l), Some(r)) = (best.get(&RepKind::CompleteLeftBest), best.get(&RepKind::CompleteRightBest)) {
            let (l, r) = (l.clone(), r.clone());
            for t in PAIRED {
                offer(&mut best, &mut order, Plan::Both(Box::new(l.clone()), Box::new(r.clone()), t));
            }
        }
    }
    best
}

pub fn reachable(from: RepKind, to: RepKind, bases: &[u64]) -> bool {
    plans_from(from, bases).contains_key(&to)
}

/// The plan for `from → to`, or the reason there is none.
pub fn plan(from: RepKind, to: RepKind, bases: &[u64]) -> Result<Plan, Error> {
    let mut bases = bases.to_vec();
    for k in [from, to] {
        if let Some(b) = k.base() {
            if !bases.contains(&b) {
                bases.push(b);
            }
        }
    }
    plans_from(from, &bases).remove(&to).ok_or_else(|| blocked(from, to))
}

/// Build the conversion of a source into `to`. `source` is called once for
/// every copy of the source oracle the chain needs.
pub fn convert(source: &dyn Fn() -> Source, to: RepKind) -> Result<Source, Error> {
    let from = source().kind();
    plan(from, to, DEFAULT_BASES)?.build(source)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Family {
    Weihrauch,
    Cauchy,
    Base(u64),
    Sum(Side, u64),
    Dedekind,
    Best(Side),
    Cf,
}

fn family(k: RepKind) -> Family {
    use RepKind::*;
    match k {
        Weihrauch => Family::Weihrauch,
        Cauchy | IncreasingCauchy | ConvergingBase(_) | FuzzyCut | SignedDigit => Family::Cauchy,
        BaseExpansion(b) => Family::Base(b),
        GrayCode => Family::Base(2),
        SumBelow(b) => Family::Sum(Side::LeftOrBelow, b),
        SumAbove(b) => Family::Sum(Side::RightOrAbove, b),
        DedekindCut | GeneralBase | Beatty | Hurwitz => Family::Dedekind,
        LeftBest | CompleteLeftBest | DualBaire | GeneralSumBelow | Egyptian | FareyEgyptian => {
            Family::Best(Side::LeftOrBelow)
        }
        RightBest | CompleteRightBest | StandardBaire | GeneralSumAbove => Family::Best(Side::RightOrAbove),
        ContinuedFraction | TraceFunction | Contractor => Family::Cf,
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::LeftOrBelow => "below",
        Side::RightOrAbove => "above",
    }
}

/// The error for a pair with no conversion.
pub fn blocked(from: RepKind, to: RepKind) -> Error {
    let (f, t) = (family(from), family(to));
    let missing = |a: u64, b: u64| base_transition_factor(a, b).is_none();
    match (f, t) {
        (Family::Base(b) | Family::Sum(_, b), Family::Base(a)) if missing(a, b) => {
            return Error::MissingTransitionFactor { a, b };
        }
        (Family::Sum(s, b), Family::Sum(s2, a)) if s == s2 && missing(a, b) => {
            return Error::MissingTransitionFactor { a, b };
        }
        _ => {}
    }
    let reason = match (f, t) {
        (Family::Weihrauch, _) => {
            "nested intervals with no rate of shrinking cannot be turned into Cauchy sequences".to_string()
        }
        (Family::Cauchy, _) => "Cauchy sequences do not decide digits, so they give no base expansion".to_string(),
        (Family::Base(_), Family::Sum(..)) | (Family::Dedekind, Family::Sum(..)) => {
            "digits and cuts do not locate the next nonzero digit, so they give no sum approximation".to_string()
        }
        (Family::Base(_), _) => "a base expansion does not determine the cut at arbitrary rationals".to_string(),
        (Family::Sum(s, _), Family::Sum(s2, _)) if s != s2 => {
            format!("sum approximations from {} say nothing fast about the other side", side_name(s))
        }
        (Family::Sum(..), _) => {
            "sum approximations in one base do not decide the cut at arbitrary rationals".to_string()
        }
        (Family::Dedekind, _) => "a cut does not bound the denominators of best approximations".to_string(),
        (Family::Best(s), Family::Cf) => {
            format!("continued fractions need best approximations from both sides, not only from {}", side_name(s))
        }
        (Family::Best(_), _) => "left and right best approximations are incomparable".to_string(),
        (Family::Cf, _) => "no adapter chain exists".to_string(),
    };
    Error::Blocked { from: from.token(), to: to.token(), reason }
}

/// Every ordered pair of kinds over `bases`, with its plan or blocking error.
pub fn matrix(bases: &[u64]) -> Vec<(RepKind, RepKind, Result<Plan, Error>)> {
    let kinds = RepKind::catalogue(bases);
    let mut out = Vec::new();
    for &from in &kinds {
        let mut plans = plans_from(from, bases);
        for &to in &kinds {
            let cell = plans.remove(&to).ok_or_else(|| blocked(from, to));
            out.push((from, to, cell));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{ground_truth, Surd};
    use crate::reps::validate;
    use RepKind::*;

    fn gt_source(a: &Surd, k: RepKind) -> impl Fn() -> Source + '_ {
        move || Box::new(ground_truth(a, k).unwrap()) as Source
    }

    #[test]
    fn every_step_builds() {
        let a = Surd::sqrt2_minus_1();
        for from in RepKind::catalogue(DEFAULT_BASES) {
            for to in direct_targets(from, DEFAULT_BASES) {
                let s = step(gt_source(&a, from)(), to).unwrap_or_else(|e| panic!("{from} -> {to}: {e}"));
                assert_eq!(s.kind(), to);
            }
        }
        for to in PAIRED {
            let s = both(gt_source(&a, CompleteLeftBest)(), gt_source(&a, CompleteRightBest)(), to).unwrap();
            assert_eq!(s.kind(), to);
        }
    }

    #[test]
    fn reachability_spot_checks() {
        let b = DEFAULT_BASES;
        assert!(reachable(DedekindCut, BaseExpansion(10), b));
        assert!(reachable(ContinuedFraction, SumAbove(3), b));
        assert!(reachable(LeftBest, Egyptian, b));
        assert!(reachable(BaseExpansion(10), BaseExpansion(2), b));
        assert!(!reachable(BaseExpansion(2), BaseExpansion(10), b));
        assert!(!reachable(Cauchy, BaseExpansion(2), b));
        assert!(!reachable(Weihrauch, Cauchy, b));
        assert!(!reachable(LeftBest, RightBest, b));
        assert!(!reachable(DedekindCut, SumBelow(2), b));
        assert!(!reachable(CompleteLeftBest, ContinuedFraction, b));
        assert!(reachable(TraceFunction, ContinuedFraction, b));
    }

    #[test]
    fn blocked_errors() {
        assert_eq!(
            plan(BaseExpansion(2), BaseExpansion(10), DEFAULT_BASES),
            Err(Error::MissingTransitionFactor { a: 10, b: 2 })
        );
        match plan(Cauchy, BaseExpansion(2), DEFAULT_BASES) {
            Err(Error::Blocked { from, to, .. }) => assert_eq!((from.as_str(), to.as_str()), ("cauchy", "base2")),
            other => panic!("{other:?}"),
        }
        assert!(plan(BaseExpansion(4), BaseExpansion(6), DEFAULT_BASES).is_err());
        assert!(plan(BaseExpansion(6), BaseExpansion(4), DEFAULT_BASES).is_ok());
    }

    #[test]
    fn plans_are_short_and_printable() {
        let p = plan(DedekindCut, Hurwitz, DEFAULT_BASES).unwrap();
        assert_eq!(p.cost(), 1);
        assert_eq!(p.to_string(), "dedekind -> hurwitz");
        let p = plan(Contractor, ContinuedFraction, DEFAULT_BASES).unwrap();
        assert_eq!(p.cost(), 3);
        assert!(p.to_string().contains('&'));
    }

    #[test]
    fn composed_conversions_match_ground_truth() {
        let a = Surd::golden();
        let cases = [
            (Egyptian, BaseExpansion(3)),
            (ContinuedFraction, Beatty),
            (StandardBaire, SumAbove(2)),
            (Contractor, ContinuedFraction),
            (DedekindCut, GrayCode),
            (FareyEgyptian, Hurwitz),
        ];
        for (from, to) in cases {
            let c = convert(&gt_source(&a, from), to).unwrap();
            assert!(validate(&*c, &a, 6).passed(), "{from} -> {to}");
        }
    }
}
