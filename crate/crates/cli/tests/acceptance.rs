//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use subrec_cli::{parse_matrix, run, EXIT_BLOCKED};
use subrec_core::convert::graph::{both, direct_targets, step, DEFAULT_BASES};
use subrec_core::convert::*;
use subrec_core::farey::{locate, node_at, nodes_along, Endpoint, FareyPair, Position};
use subrec_core::numeric::{base_transition_factor, ceil_log, pow};
use subrec_core::reference::{ground_truth, Surd};
use subrec_core::reps::{validate, InstrumentedOracle, Oracle, QueryShape, RepKind, StatsHandle, Value};
use subrec_core::Rational;

const UPTO: u64 = 32;
/// The direct probe asks for approximants whose index is a power of the
/// previous denominator, so only the first terms are within reach.
const DIRECT_PROBE_UPTO: u64 = 1;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn gt(a: &Surd, kind: RepKind) -> Source {
    Box::new(ground_truth(a, kind).unwrap())
}

fn counted(a: &Surd, kind: RepKind) -> (Source, StatsHandle) {
    let o = InstrumentedOracle::new(gt(a, kind), false);
    let h = o.handle();
    (Box::new(o), h)
}

fn reduced(upto: u64) -> Vec<(u64, u64)> {
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    (1..=upto).flat_map(|d| (0..=d).filter(move |&n| gcd(n, d) == 1).map(move |n| (n, d))).collect()
}

/// The queries a unique target is compared on.
fn queries(kind: RepKind, upto: u64) -> Vec<Value> {
    match kind.query_shape() {
        QueryShape::Index(s) => (s..=upto).map(Value::int).collect(),
        QueryShape::Rational => reduced(upto).into_iter().map(|(n, d)| Value::Rat(q(n as i64, d as i64))).collect(),
        QueryShape::Fraction => reduced(upto).into_iter().map(|(n, d)| Value::pair(n, d)).collect(),
        QueryShape::BaseIndex => (2..=10u64).flat_map(|b| (1..=upto).map(move |n| Value::pair(b, n))).collect(),
    }
}

fn agree(o: &dyn Oracle, a: &Surd, upto: u64) -> Result<(), String> {
    let kind = o.kind();
    if !kind.is_unique() {
        let r = validate(o, a, upto);
        return if r.passed() { Ok(()) } else { Err(r.to_string()) };
    }
    let truth = gt(a, kind);
    for qv in queries(kind, upto) {
        let got = o.query(&qv).map_err(|e| format!("{kind} at {qv}: {e}"))?;
        let want = truth.query(&qv).unwrap();
        if got != want {
            return Err(format!("{kind} at {qv}: got {got}, want {want}"));
        }
    }
    Ok(())
}

fn check(ok: bool, what: impl FnOnce() -> String) {
    assert!(ok, "{}", what());
}

fn worked_examples() {
    let a = Surd::sqrt2_minus_1();
    let ints = |v: &[i64]| v.iter().map(|&x| Value::int(x)).collect::<Vec<_>>();
    let egy = gt(&a, RepKind::Egyptian);
    let got: Vec<Value> = (1..=5).map(|n| egy.query(&Value::int(n)).unwrap()).collect();
    assert_eq!(got, ints(&[3, 5, 5, 16, 18]));
    let via = step(gt(&a, RepKind::GeneralSumBelow), RepKind::Egyptian).unwrap();
    let got: Vec<Value> = (1..=5).map(|n| via.query(&Value::int(n)).unwrap()).collect();
    assert_eq!(got, ints(&[3, 5, 5, 16, 18]));

    let left = gt(&a, RepKind::CompleteLeftBest);
    let got: Vec<Value> = (0..4).map(|n| left.query(&Value::int(n)).unwrap()).collect();
    assert_eq!(got, [q(0, 1), q(1, 3), q(2, 5), q(7, 17)].map(Value::Rat));
    let fe = step(gt(&a, RepKind::CompleteLeftBest), RepKind::FareyEgyptian).unwrap();
    let got: Vec<Value> = (1..=4).map(|n| fe.query(&Value::int(n)).unwrap()).collect();
    assert_eq!(got, [q(1, 3), q(1, 15), q(1, 85), q(1, 493)].map(Value::Rat));

    let pos = |s: &str| s.parse::<Position>().unwrap();
    assert_eq!(node_at(&pos("10")), FareyPair::new(q(1, 2), q(2, 3)).unwrap());
    assert_eq!(node_at(&pos("0000")), FareyPair::new(q(0, 1), q(1, 5)).unwrap());
    assert_eq!(FareyPair::new(q(1, 3), q(2, 5)).unwrap().mediant(), q(3, 8));
}

/// Every single-source adapter of the graph, every paired one, and the
/// direct-probe variant of best approximation to general sums.
fn equivalence() {
    for (name, a) in Surd::panel() {
        for from in RepKind::catalogue(DEFAULT_BASES) {
            for to in direct_targets(from, DEFAULT_BASES) {
                let o = step(gt(&a, from), to).unwrap();
                if let Err(e) = agree(&*o, &a, UPTO) {
                    panic!("{name}: {from} -> {to}: {e}");
                }
            }
        }
        for to in [RepKind::ContinuedFraction, RepKind::Contractor] {
            let o = both(gt(&a, RepKind::CompleteLeftBest), gt(&a, RepKind::CompleteRightBest), to).unwrap();
            if let Err(e) = agree(&*o, &a, UPTO) {
                panic!("{name}: complete pair -> {to}: {e}");
            }
        }
        for from in [RepKind::LeftBest, RepKind::RightBest] {
            let o = bestapprox_to_gensum(gt(&a, from), Probe::Direct).unwrap();
            let truth = gt(&a, o.kind());
            for b in 2..=10u64 {
                for n in 1..=DIRECT_PROBE_UPTO {
                    let qv = Value::pair(b, n);
                    let got = o.query(&qv).unwrap_or_else(|e| panic!("{name}: {from} direct probe at {qv}: {e}"));
                    assert_eq!(got, truth.query(&qv).unwrap(), "{name}: {from} direct probe at {qv}");
                }
            }
        }
    }
}

fn calls_of(o: &dyn Oracle, h: &StatsHandle, qv: Value) -> u64 {
    h.reset();
    o.query(&qv).unwrap();
    h.stats().calls
}

fn call_counts() {
    let unit: Vec<Value> = reduced(UPTO).into_iter().map(|(n, d)| Value::Rat(q(n as i64, d as i64))).collect();
    for (name, a) in Surd::panel() {
        let (src, h) = counted(&a, RepKind::FuzzyCut);
        let o = FuzzyToSigned::new(src).unwrap();
        for n in 1..=UPTO {
            let c = calls_of(&o, &h, Value::int(n));
            check(c == 3 * (n - 1), || format!("{name}: fuzzy -> signed at {n}: {c} calls"));
        }
        let (src, h) = counted(&a, RepKind::SignedDigit);
        let o = SignedToCauchy::new(src).unwrap();
        for n in 1..=UPTO {
            let c = calls_of(&o, &h, Value::int(n));
            let want = ceil_log(2, &BigInt::from(n));
            check(c == want, || format!("{name}: signed -> cauchy at {n}: {c} calls, want {want}"));
        }
        for b in DEFAULT_BASES {
            let (src, h) = counted(&a, RepKind::BaseExpansion(*b));
            let o = BaseToCauchy::new(src).unwrap();
            for n in 1..=UPTO {
                let c = calls_of(&o, &h, Value::int(n));
                check(c == n, || format!("{name}: base{b} -> cauchy at {n}: {c} calls"));
            }
        }
        let (src, h) = counted(&a, RepKind::DedekindCut);
        let o = DedekindToHurwitz::new(src).unwrap();
        for n in 0..=UPTO {
            let c = calls_of(&o, &h, Value::int(n));
            check(c == n, || format!("{name}: dedekind -> hurwitz at {n}: {c} calls"));
        }

        let (src, h) = counted(&a, RepKind::Beatty);
        let beatty = BeattyToDedekind::new(src).unwrap();
        let (src, hg) = counted(&a, RepKind::GeneralBase);
        let general = GeneralBaseToDedekind::new(src).unwrap();
        let (src, hl) = counted(&a, RepKind::LeftBest);
        let left = bestapprox_to_dedekind(src).unwrap();
        let (src, hr) = counted(&a, RepKind::RightBest);
        let right = bestapprox_to_dedekind(src).unwrap();
        for r in unit.iter().filter(|v| matches!(v, Value::Rat(r) if r.in_unit_open())) {
            for (label, o, h) in [
                ("beatty", &beatty as &dyn Oracle, &h),
                ("generalbase", &general, &hg),
                ("left-best", &*left, &hl),
                ("right-best", &*right, &hr),
            ] {
                let c = calls_of(o, h, r.clone());
                check(c == 1, || format!("{name}: {label} -> dedekind at {r}: {c} calls"));
            }
        }
        let (src, h) = counted(&a, RepKind::Cauchy);
        let o = CauchyToFuzzy::new(src).unwrap();
        for (n, d) in reduced(UPTO) {
            let c = calls_of(&o, &h, Value::pair(n, d));
            check(c == 1, || format!("{name}: cauchy -> fuzzy at ({n},{d}): {c} calls"));
        }

        for &b in DEFAULT_BASES {
            for &t in DEFAULT_BASES {
                let Some(k) = base_transition_factor(t, b) else { continue };
                for kind in [RepKind::SumBelow(b), RepKind::SumAbove(b)] {
                    let (src, h) = counted(&a, kind);
                    let o = step(src, RepKind::BaseExpansion(t)).unwrap();
                    for n in 1..=UPTO {
                        let c = calls_of(&*o, &h, Value::int(n));
                        check(c <= k * n, || format!("{name}: {kind} -> base{t} at {n}: {c} calls > {}", k * n));
                    }
                }
            }
        }

        for n in 1..=UPTO {
            let (l, hl) = counted(&a, RepKind::CompleteLeftBest);
            let (r, hr) = counted(&a, RepKind::CompleteRightBest);
            let cf = CompletePairToCf::new(l, r).unwrap();
            cf.query(&Value::int(n)).unwrap();
            let d = hl.stats().merge(&hr.stats()).distinct_calls;
            check(d <= 2 * n + 2, || format!("{name}: complete pair -> cf at {n}: {d} distinct calls"));
        }
    }
}

fn farey_structure() {
    let mut frontier = vec![Position::empty()];
    for h in 0..=12usize {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for pos in &frontier {
            let node = node_at(pos);
            check(node.determinant() == BigInt::from(1), || format!("{pos}: determinant {}", node.determinant()));
            let sum = node.left.num() + node.left.den() + node.right.num() + node.right.den();
            check(sum >= BigInt::from(h as u64 + 3), || format!("{pos}: component sum {sum} < {}", h + 3));
            if h < 12 {
                for bit in [false, true] {
                    let mut p = pos.clone();
                    p.push(bit);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }

    let mut rng = StdRng::seed_from_u64(0x5eed_fa4e);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=64usize);
        let pos = Position::new((0..len).map(|_| rng.gen()).collect());
        let nodes = nodes_along(&pos);
        let last = nodes.last().unwrap();
        let bound = BigInt::from(len as u64 + 1) * (last.left.num() + last.left.den());
        for node in &nodes {
            check(node.determinant() == BigInt::from(1), || format!("{pos}: not a Farey pair"));
            for x in [node.left.num(), node.left.den(), node.right.num(), node.right.den()] {
                check(*x <= bound, || format!("{pos}: component {x} exceeds {bound}"));
            }
        }
    }

    for (n, d) in reduced(40) {
        if n == 0 || n == d {
            continue;
        }
        let r = q(n as i64, d as i64);
        for side in [Endpoint::Left, Endpoint::Right] {
            let (pos, _) = locate(&r, side, None).unwrap();
            check(pos.len() as u64 <= n + d - 2, || format!("{r}: located at depth {}", pos.len()));
            check(node_at(&pos).endpoint(side) == &r, || format!("{r}: not an endpoint of {pos}"));
        }
    }
}

fn same_terms(o: &dyn Oracle, truth: &dyn Oracle, start: u64, terms: u64) -> Result<(), String> {
    for n in start..start + terms {
        let (g, w) = (o.query(&Value::int(n)).map_err(|e| e.to_string())?, truth.query(&Value::int(n)).unwrap());
        if g != w {
            return Err(format!("{} at {n}: got {g}, want {w}", truth.kind()));
        }
    }
    Ok(())
}

fn round_trips() {
    use RepKind::*;
    for (name, a) in Surd::panel() {
        let fail = |what: &str, e: String| panic!("{name}: {what}: {e}");
        let o = GrayToBase2::new(Box::new(Base2ToGray::new(gt(&a, BaseExpansion(2))).unwrap())).unwrap();
        same_terms(&o, &*gt(&a, BaseExpansion(2)), 1, 8).unwrap_or_else(|e| fail("base2 -> gray -> base2", e));
        let o = Base2ToGray::new(Box::new(GrayToBase2::new(gt(&a, GrayCode)).unwrap())).unwrap();
        same_terms(&o, &*gt(&a, GrayCode), 0, 8).unwrap_or_else(|e| fail("gray -> base2 -> gray", e));

        for (baire, best) in [(StandardBaire, CompleteRightBest), (DualBaire, CompleteLeftBest)] {
            let o = completebest_to_baire(baire_to_completebest(gt(&a, baire)).unwrap()).unwrap();
            same_terms(&*o, &*gt(&a, baire), 0, 8).unwrap_or_else(|e| fail("baire round trip", e));
            let o = baire_to_completebest(completebest_to_baire(gt(&a, best)).unwrap()).unwrap();
            same_terms(&*o, &*gt(&a, best), 0, 8).unwrap_or_else(|e| fail("complete best round trip", e));
        }

        let cf = || -> Source {
            Box::new(CompletePairToCf::new(gt(&a, CompleteLeftBest), gt(&a, CompleteRightBest)).unwrap())
        };
        for (side, best) in [(Side::LeftOrBelow, CompleteLeftBest), (Side::RightOrAbove, CompleteRightBest)] {
            let o = CfToCompleteBest::new(cf(), side).unwrap();
            same_terms(&o, &*gt(&a, best), 0, 8).unwrap_or_else(|e| fail("complete pair -> cf -> complete best", e));
        }
        let pair = CompletePairToCf::new(
            Box::new(CfToCompleteBest::new(gt(&a, ContinuedFraction), Side::LeftOrBelow).unwrap()),
            Box::new(CfToCompleteBest::new(gt(&a, ContinuedFraction), Side::RightOrAbove).unwrap()),
        )
        .unwrap();
        same_terms(&pair, &*gt(&a, ContinuedFraction), 1, 8).unwrap_or_else(|e| fail("cf -> complete pair -> cf", e));

        for (side, best) in [(Side::LeftOrBelow, CompleteLeftBest), (Side::RightOrAbove, CompleteRightBest)] {
            let contractor = both(gt(&a, CompleteLeftBest), gt(&a, CompleteRightBest), Contractor).unwrap();
            let trace = step(contractor, TraceFunction).unwrap();
            let o = trace_to_completebest(trace, side).unwrap();
            same_terms(&*o, &*gt(&a, best), 0, 8).unwrap_or_else(|e| fail("contractor -> trace -> complete best", e));
        }
    }
}

fn random_unit(rng: &mut StdRng) -> Rational {
    let d = rng.gen_range(2..=1000i64);
    q(rng.gen_range(1..d), d)
}

fn order_and_contraction() {
    let mut rng = StdRng::seed_from_u64(0x0e97);
    for _ in 0..1000 {
        let (x, y) = (random_unit(&mut rng), random_unit(&mut rng));
        let ex = egyptian_expand_rational(x.num().clone(), x.den().clone()).unwrap();
        let ey = egyptian_expand_rational(y.num().clone(), y.den().clone()).unwrap();
        for (r, e) in [(&x, &ex), (&y, &ey)] {
            let mut prod = BigInt::from(1);
            let mut sum = Rational::zero();
            for t in e {
                prod *= t;
                sum = &sum + &Rational::new(1, prod.clone()).unwrap();
            }
            check(&sum == r, || format!("expansion of {r} sums to {sum}"));
            check(e.windows(2).all(|w| w[0] <= w[1]), || format!("expansion of {r} is not monotone"));
        }
        check(egyptian_order(&ex, &ey) == x.cmp(&y), || format!("order of {x} and {y}"));
    }

    for (name, a) in Surd::panel() {
        let f = CompletePairToContractor::new(gt(&a, RepKind::CompleteLeftBest), gt(&a, RepKind::CompleteRightBest))
            .unwrap();
        let at = |x: &Rational| match f.query(&Value::Rat(x.clone())).unwrap() {
            Value::Rat(r) => r,
            v => panic!("{name}: contractor answered {v}"),
        };
        for _ in 0..1000 {
            let (x, y) = (random_unit(&mut rng), random_unit(&mut rng));
            if x == y {
                continue;
            }
            let (fx, fy) = (at(&x), at(&y));
            check((&fx - &fy).abs() < (&x - &y).abs(), || format!("{name}: not contracting at {x}, {y}"));
            check(fx != x, || format!("{name}: fixed point at {x}"));
        }

        for side in [Endpoint::Left, Endpoint::Right] {
            let rs: Vec<Rational> = a.endpoints(side).take(18).collect();
            let gaps: Vec<Rational> = rs.windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
            for (i, g) in gaps.windows(2).enumerate() {
                check(g[1] < g[0], || format!("{name} {side:?}: gap {} does not shrink", i + 1));
            }
        }
    }
}

fn base_transition() {
    for (name, a) in Surd::panel() {
        for (ta, tb) in [(2u64, 10u64), (4, 2), (2, 4), (3, 9)] {
            let k = base_transition_factor(ta, tb).unwrap_or_else(|| panic!("no factor for ({ta},{tb})"));
            for n in 1..=16 {
                let da = Rational::new(a.floor_pow(ta, n), pow(ta, n)).unwrap();
                let db = Rational::new(a.floor_pow(tb, k * n), pow(tb, k * n)).unwrap();
                let ua = &da + &Rational::inv_pow(ta, n);
                let ub = &db + &Rational::inv_pow(tb, k * n);
                check(da <= db, || format!("{name} ({ta},{tb}) n={n}: base-{ta} prefix exceeds base-{tb} prefix"));
                check(a.below(&db) && !a.below(&ub), || {
                    format!("{name} ({ta},{tb}) n={n}: base-{tb} prefix misplaced")
                });
                check(ub <= ua, || format!("{name} ({ta},{tb}) n={n}: base-{tb} interval leaves the base-{ta} one"));
            }
        }
    }
}

fn primes(b: u64) -> BTreeSet<u64> {
    (2..=b).filter(|p| b.is_multiple_of(*p) && (2..*p).all(|d| p % d != 0)).collect()
}

/// The convertibility relation of the representations, written out by cluster.
fn expected_reach(bases: &[u64]) -> HashMap<String, BTreeSet<String>> {
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let w = set(&["weihrauch"]);
    let mut cauchy = set(&["cauchy", "increasing-cauchy", "fuzzy", "signed"]);
    cauchy.extend(bases.iter().map(|b| format!("convbase{b}")));
    let dedekind = set(&["dedekind", "generalbase", "beatty", "hurwitz"]);
    let left = set(&["left-best", "complete-left", "gensum-below", "dual-baire", "egyptian", "farey-egyptian"]);
    let right = set(&["right-best", "complete-right", "gensum-above", "baire"]);
    let cf = set(&["cf", "trace", "contractor"]);
    let divides = |a: u64, b: u64| primes(a).is_subset(&primes(b));

    let below_cauchy: BTreeSet<String> = cauchy.union(&w).cloned().collect();
    let base_reach = |b: u64| {
        let mut s = below_cauchy.clone();
        for &a in bases.iter().filter(|&&a| divides(a, b)) {
            s.insert(format!("base{a}"));
            if a == 2 {
                s.insert("gray".into());
            }
        }
        s
    };
    let sum_reach = |prefix: &str, b: u64| {
        let mut s = base_reach(b);
        s.extend(bases.iter().filter(|&&a| divides(a, b)).map(|a| format!("{prefix}{a}")));
        s
    };
    let mut dedekind_reach = dedekind.clone();
    dedekind_reach.extend(below_cauchy.iter().cloned());
    dedekind_reach.insert("gray".into());
    dedekind_reach.extend(bases.iter().map(|b| format!("base{b}")));
    let side_reach = |cluster: &BTreeSet<String>, prefix: &str| {
        let mut s = cluster.clone();
        s.extend(dedekind_reach.iter().cloned());
        s.extend(bases.iter().map(|b| format!("{prefix}{b}")));
        s
    };
    let left_reach = side_reach(&left, "sumbelow");
    let right_reach = side_reach(&right, "sumabove");
    let all: BTreeSet<String> = RepKind::catalogue(bases).iter().map(|k| k.token()).collect();

    let mut out = HashMap::new();
    for tok in &all {
        let reach = if w.contains(tok) {
            w.clone()
        } else if cauchy.contains(tok) {
            below_cauchy.clone()
        } else if dedekind.contains(tok) {
            dedekind_reach.clone()
        } else if left.contains(tok) {
            left_reach.clone()
        } else if right.contains(tok) {
            right_reach.clone()
        } else if cf.contains(tok) {
            all.clone()
        } else if tok == "gray" {
            base_reach(2)
        } else if let Some(b) = tok.strip_prefix("base") {
            base_reach(b.parse().unwrap())
        } else if let Some(b) = tok.strip_prefix("sumbelow") {
            sum_reach("sumbelow", b.parse().unwrap())
        } else if let Some(b) = tok.strip_prefix("sumabove") {
            sum_reach("sumabove", b.parse().unwrap())
        } else {
            panic!("unclassified representation {tok}");
        };
        out.insert(tok.clone(), reach);
    }
    out
}

fn cli(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("subrec").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn blocked_matrix() {
    let (code, text) = cli(&["matrix"]);
    assert_eq!(code, 0);
    let cells = parse_matrix(&text).unwrap();
    let reach = expected_reach(DEFAULT_BASES);
    let n = reach.len();
    assert_eq!(cells.len(), n * n);
    let mut blocked = Vec::new();
    for (from, to, is_blocked) in cells {
        let want = !reach[&from].contains(&to);
        check(is_blocked == want, || format!("{from} -> {to}: marked blocked={is_blocked}, expected blocked={want}"));
        if is_blocked {
            blocked.push((from, to));
        }
    }
    assert!(!blocked.is_empty());
    for (from, to) in blocked {
        let (code, _) = cli(&["convert", "--from", &from, "--to", &to, "--n", "1", "--stats", "none"]);
        check(code == EXIT_BLOCKED, || format!("convert {from} -> {to} exited {code}"));
    }
}

fn main() {
    let criteria: [(&str, fn()); 8] = [
        ("worked examples", worked_examples),
        ("oracle equivalence of every adapter", equivalence),
        ("exact oracle call counts", call_counts),
        ("Farey tree structure", farey_structure),
        ("round trips", round_trips),
        ("Egyptian order, contraction and shrinking gaps", order_and_contraction),
        ("base transition prefixes", base_transition),
        ("blocked conversion matrix", blocked_matrix),
    ];
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = panic::catch_unwind(AssertUnwindSafe(f)).is_ok();
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {label} ({:.1}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
