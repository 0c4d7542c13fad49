use num_bigint::BigInt;

use subrec_core::convert::graph::{convert, matrix, plan, step, DEFAULT_BASES};
use subrec_core::convert::*;
use subrec_core::reference::{ground_truth, Surd};
use subrec_core::reps::{validate, Oracle, QueryShape, Reflected, RepKind, Value};
use subrec_core::{Error, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn gt(a: &Surd, kind: RepKind) -> Source {
    Box::new(ground_truth(a, kind).unwrap())
}

/// Small queries of each shape. General-base digits stay at `b^n ≤ 27`: a
/// cut read off best approximations asks for the approximant indexed by the
/// denominator.
fn sample(kind: RepKind, upto: u64) -> Vec<Value> {
    match kind.query_shape() {
        QueryShape::Index(s) => (s..=upto).map(Value::int).collect(),
        QueryShape::Rational => (1..=upto as i64).flat_map(|d| (0..=d).map(move |n| Value::Rat(q(n, d)))).collect(),
        QueryShape::Fraction => (1..=upto as i64).flat_map(|d| (0..=d).map(move |n| Value::pair(n, d))).collect(),
        QueryShape::BaseIndex => (2..=3u64).flat_map(|b| (1..=upto.min(3)).map(move |n| Value::pair(b, n))).collect(),
    }
}

/// An oracle that gives the same answer to every query.
struct Stuck {
    kind: RepKind,
    answer: Value,
}

impl Oracle for Stuck {
    fn kind(&self) -> RepKind {
        self.kind
    }

    fn query(&self, _: &Value) -> Result<Value, Error> {
        Ok(self.answer.clone())
    }
}

fn stuck(kind: RepKind, answer: Value) -> Source {
    Box::new(Stuck { kind, answer })
}

#[test]
fn every_planned_chain_reproduces_its_target() {
    let a = Surd::golden();
    for (from, to, cell) in matrix(DEFAULT_BASES) {
        let Ok(p) = cell else { continue };
        // Digits read off a cut ask about denominators b^n, and the cut's own
        // sources (Hurwitz paths, best approximants) are indexed by those.
        let through_cut = from == RepKind::Hurwitz || p.to_string().contains("dedekind -> generalbase");
        let upto = if through_cut { 1 } else { 3 };
        let o = p.build(&|| gt(&a, from)).unwrap_or_else(|e| panic!("{p}: {e}"));
        assert_eq!(o.kind(), to);
        if to.is_unique() {
            let truth = gt(&a, to);
            for qv in sample(to, upto) {
                assert_eq!(o.query(&qv).unwrap(), truth.query(&qv).unwrap(), "{p} at {qv}");
            }
        } else {
            let r = validate(&*o, &a, upto);
            assert!(r.passed(), "{p}: {r}");
        }
    }
}

#[test]
fn convert_builds_from_the_source_kind() {
    let a = Surd::sqrt7_minus_2();
    let o = convert(&|| gt(&a, RepKind::ContinuedFraction), RepKind::Egyptian).unwrap();
    assert_eq!(o.query(&Value::int(3)).unwrap(), gt(&a, RepKind::Egyptian).query(&Value::int(3)).unwrap());
    let err = convert(&|| gt(&a, RepKind::Weihrauch), RepKind::Cauchy).err().unwrap();
    assert!(matches!(err, Error::Blocked { .. }));
}

#[test]
fn plans_name_the_obstruction() {
    assert!(matches!(
        plan(RepKind::BaseExpansion(2), RepKind::BaseExpansion(10), DEFAULT_BASES),
        Err(Error::MissingTransitionFactor { a: 10, b: 2 })
    ));
    assert!(matches!(
        plan(RepKind::SumBelow(3), RepKind::SumBelow(2), DEFAULT_BASES),
        Err(Error::MissingTransitionFactor { a: 2, b: 3 })
    ));
    match plan(RepKind::LeftBest, RepKind::RightBest, DEFAULT_BASES) {
        Err(Error::Blocked { reason, .. }) => assert!(!reason.is_empty()),
        other => panic!("{other:?}"),
    }
    let p = plan(RepKind::BaseExpansion(10), RepKind::BaseExpansion(2), DEFAULT_BASES).unwrap();
    assert_eq!(p.cost(), 1);
    let p = plan(RepKind::BaseExpansion(25), RepKind::BaseExpansion(5), DEFAULT_BASES).unwrap();
    assert_eq!(p.to_string(), "base25 -> base5");
}

#[test]
fn step_rejects_unknown_adapters() {
    let a = Surd::golden();
    assert!(matches!(step(gt(&a, RepKind::DedekindCut), RepKind::ContinuedFraction), Err(Error::InvalidQuery(_))));
    assert!(DedekindToBeatty::new(gt(&a, RepKind::Beatty)).is_err());
}

#[test]
fn digit_out_of_range_is_malformed() {
    let o = GeneralBaseToDedekind::new(stuck(RepKind::GeneralBase, Value::int(12))).unwrap();
    assert!(matches!(o.query(&Value::Rat(q(3, 10))), Err(Error::Malformed { .. })));
}

#[test]
fn short_hurwitz_path_is_malformed() {
    let path = Value::Bits("".parse().unwrap());
    let o = HurwitzToDedekind::new(stuck(RepKind::Hurwitz, path)).unwrap();
    assert!(matches!(o.query(&Value::Rat(q(2, 5))), Err(Error::Malformed { .. })));
}

#[test]
fn bad_sum_terms_are_malformed() {
    let thirds = step(stuck(RepKind::SumBelow(2), Value::Rat(q(1, 3))), RepKind::BaseExpansion(2)).unwrap();
    assert!(matches!(thirds.query(&Value::int(2)), Err(Error::Malformed { .. })));
    let repeated = step(stuck(RepKind::SumBelow(2), Value::Rat(q(1, 4))), RepKind::BaseExpansion(2)).unwrap();
    assert!(matches!(repeated.query(&Value::int(4)), Err(Error::Malformed { .. })));
}

#[test]
fn wrong_answer_types_are_rejected() {
    let o = BeattyToDedekind::new(stuck(RepKind::Beatty, Value::Rat(q(1, 2)))).unwrap();
    assert!(o.query(&Value::Rat(q(1, 3))).is_err());
}

#[test]
fn mismatched_best_pairs_fail() {
    let (a, b) = (Surd::sqrt2_minus_1(), Surd::golden());
    let cf = CompletePairToCf::new(gt(&a, RepKind::CompleteLeftBest), gt(&b, RepKind::CompleteRightBest)).unwrap();
    assert!((1..=8).any(|n| cf.query(&Value::int(n)).is_err()));
}

#[test]
fn reflection_swaps_sides() {
    for (_, a) in Surd::panel() {
        let b = a.reflect();
        for kind in RepKind::catalogue(DEFAULT_BASES) {
            let Some(m) = kind.mirror() else { continue };
            let r = Reflected::new(gt(&a, kind)).unwrap();
            assert_eq!(r.kind(), m);
            let truth = gt(&b, m);
            for qv in sample(m, 8) {
                assert_eq!(r.query(&qv).unwrap(), truth.query(&qv).unwrap(), "{kind} reflected at {qv}");
            }
        }
    }
}

#[test]
fn kinds_round_trip_through_tokens_and_json() {
    for kind in RepKind::catalogue(&[2, 7, 10, 36]) {
        assert_eq!(RepKind::parse(&kind.token(), None).unwrap(), kind);
        let json = serde_json::to_string(&kind).unwrap();
        assert_eq!(serde_json::from_str::<RepKind>(&json).unwrap(), kind);
    }
    assert_eq!(RepKind::parse("base", Some(16)).unwrap(), RepKind::BaseExpansion(16));
    assert!(RepKind::parse("base", None).is_err());
}

#[test]
fn large_general_bases() {
    let a = Surd::sqrt3_minus_1();
    let o = step(gt(&a, RepKind::DedekindCut), RepKind::GeneralBase).unwrap();
    let b = BigInt::from(10).pow(30);
    let qv = Value::Pair(b.clone(), BigInt::from(2));
    assert_eq!(o.query(&qv).unwrap(), Value::Int(a.big_digit(&b, 2)));
}
