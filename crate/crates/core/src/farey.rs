//! The Farey pair tree: positions, nodes, descent and locating fractions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::{mediant, Rational};

/// A finite path in the tree; `false` is the bit 0 (go left).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Position(Vec<bool>);

impl Position {
    pub fn new(bits: Vec<bool>) -> Self {
        Position(bits)
    }

    pub fn empty() -> Self {
        Position(Vec::new())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn prefix(&self, n: usize) -> Position {
        Position(self.0[..n].to_vec())
    }

    pub fn starts_with(&self, other: &Position) -> bool {
        self.0.starts_with(&other.0)
    }

    /// Complement every bit; the position of the reflected node.
    pub fn flipped(&self) -> Position {
        Position(self.0.iter().map(|b| !b).collect())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("not a bit string: {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Endpoint {
    Left,
    Right,
}

/// Neighbouring fractions `a/b < c/d` with `cb - ad = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FareyPair {
    pub left: Rational,
    pub right: Rational,
}

impl FareyPair {
    pub fn root() -> Self {
        FareyPair { left: Rational::zero(), right: Rational::one() }
    }

    pub fn new(left: Rational, right: Rational) -> Result<Self, Error> {
        let p = FareyPair { left, right };
        if p.determinant() != BigInt::one() {
            return Err(Error::InvalidQuery(format!("({}, {}) are not Farey neighbours", p.left, p.right)));
        }
        Ok(p)
    }

    /// `c·b − a·d`.
    pub fn determinant(&self) -> BigInt {
        self.right.num() * self.left.den() - self.left.num() * self.right.den()
    }

    pub fn mediant(&self) -> Rational {
        mediant(&self.left, &self.right)
    }

    /// `a + b + c + d`.
    pub fn component_sum(&self) -> BigInt {
        self.left.num() + self.left.den() + self.right.num() + self.right.den()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.left < *r && *r < self.right
    }

    pub fn endpoint(&self, side: Endpoint) -> &Rational {
        match side {
            Endpoint::Left => &self.left,
            Endpoint::Right => &self.right,
        }
    }

    pub fn reflect(&self) -> FareyPair {
        FareyPair { left: self.right.reflect(), right: self.left.reflect() }
    }
}

impl fmt::Display for FareyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// The child of `pair` along `bit`: 0 replaces the right endpoint by the
/// mediant, 1 replaces the left one.
pub fn descend(pair: &FareyPair, bit: bool) -> FareyPair {
    let m = pair.mediant();
    if bit {
        FareyPair { left: m, right: pair.right.clone() }
    } else {
        FareyPair { left: pair.left.clone(), right: m }
    }
}

pub fn node_at(pos: &Position) -> FareyPair {
    pos.bits().iter().fold(FareyPair::root(), |p, &b| descend(&p, b))
}

/// Every node from the root down to `pos`, inclusive.
pub fn nodes_along(pos: &Position) -> Vec<FareyPair> {
    let mut out = Vec::with_capacity(pos.len() + 1);
    let mut p = FareyPair::root();
    out.push(p.clone());
    for &b in pos.bits() {
        p = descend(&p, b);
        out.push(p.clone());
    }
    out
}

/// The shortest position at which `r` is an endpoint.
///
/// A fraction first appears as the mediant of some node, and so as an
/// endpoint of both of its children at the same depth; `prefer` chooses
/// which one is returned.
pub fn locate(r: &Rational, prefer: Endpoint, maxdepth: Option<usize>) -> Result<(Position, Endpoint), Error> {
    if !r.in_unit_open() {
        return Err(Error::InvalidQuery(format!("{r} is not in (0,1)")));
    }
    let mut node = FareyPair::root();
    let mut pos = Position::empty();
    loop {
        if maxdepth.is_some_and(|m| pos.len() >= m) {
            return Err(Error::InvalidQuery(format!("{r} is not an endpoint above depth {}", pos.len() + 1)));
        }
        let m = node.mediant();
        if *r == m {
            pos.push(prefer == Endpoint::Left);
            return Ok((pos, prefer));
        }
        let bit = *r > m;
        pos.push(bit);
        node = descend(&node, bit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn p(s: &str) -> Position {
        s.parse().unwrap()
    }

    #[test]
    fn node_examples() {
        assert_eq!(node_at(&p("")), FareyPair::root());
        assert_eq!(node_at(&p("10")), FareyPair { left: q(1, 2), right: q(2, 3) });
        assert_eq!(node_at(&p("0000")), FareyPair { left: q(0, 1), right: q(1, 5) });
    }

    #[test]
    fn descend_examples() {
        let pair = |a, b, c, d| FareyPair { left: q(a, b), right: q(c, d) };
        assert_eq!(descend(&pair(0, 1, 1, 1), false), pair(0, 1, 1, 2));
        assert_eq!(descend(&pair(1, 3, 1, 2), true), pair(2, 5, 1, 2));
        assert_eq!(descend(&pair(2, 5, 1, 2), false), pair(2, 5, 3, 7));
    }

    #[test]
    fn locate_examples() {
        assert_eq!(locate(&q(1, 2), Endpoint::Right, None).unwrap(), (p("0"), Endpoint::Right));
        let (pos, _) = locate(&q(3, 8), Endpoint::Left, None).unwrap();
        assert!(pos.len() <= 9);
        assert_eq!(pos.len(), 4);
        let (pos, side) = locate(&q(7, 17), Endpoint::Left, None).unwrap();
        assert_eq!(pos, p("011001"));
        assert_eq!(node_at(&pos).endpoint(side), &q(7, 17));
        assert!(locate(&q(0, 1), Endpoint::Left, None).is_err());
        assert!(locate(&q(3, 2), Endpoint::Left, None).is_err());
        assert!(locate(&q(7, 17), Endpoint::Left, Some(3)).is_err());
    }

    #[test]
    fn depth_sum_bound_exhaustive() {
        let mut level = vec![(Position::empty(), FareyPair::root())];
        for h in 0..=12u32 {
            for (_, pair) in &level {
                assert!(pair.component_sum() >= BigInt::from(h + 3));
                assert_eq!(pair.determinant(), BigInt::one());
            }
            level = level
                .into_iter()
                .flat_map(|(pos, pair)| {
                    [false, true].map(|b| {
                        let mut s = pos.clone();
                        s.push(b);
                        (s, descend(&pair, b))
                    })
                })
                .collect();
        }
    }

    #[test]
    fn locate_depth_bound() {
        for den in 2..=40i64 {
            for num in 1..den {
                let r = q(num, den);
                if r.den() != &BigInt::from(den) {
                    continue;
                }
                for prefer in [Endpoint::Left, Endpoint::Right] {
                    let (pos, side) = locate(&r, prefer, Some((num + den - 2) as usize)).unwrap();
                    assert!(pos.len() as i64 <= num + den - 2);
                    assert_eq!(node_at(&pos).endpoint(side), &r);
                    assert!(nodes_along(&pos.prefix(pos.len() - 1)).iter().all(|n| n.left != r && n.right != r));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn node_descend_commutes(bits in proptest::collection::vec(any::<bool>(), 0..40), bit in any::<bool>()) {
            let pos = Position::new(bits);
            let mut ext = pos.clone();
            ext.push(bit);
            prop_assert_eq!(node_at(&ext), descend(&node_at(&pos), bit));
        }

        #[test]
        fn path_components_bounded(bits in proptest::collection::vec(any::<bool>(), 1..=64)) {
            let pos = Position::new(bits);
            let nodes = nodes_along(&pos);
            let last = nodes.last().unwrap();
            let bound = BigInt::from(pos.len() + 1) * (last.left.num() + last.left.den());
            for n in &nodes {
                prop_assert_eq!(n.determinant(), BigInt::one());
                for c in [n.left.num(), n.left.den(), n.right.num(), n.right.den()] {
                    prop_assert!(c <= &bound);
                }
            }
        }

        #[test]
        fn reflection_flips_bits(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
            let pos = Position::new(bits);
            prop_assert_eq!(node_at(&pos.flipped()), node_at(&pos).reflect());
        }

        #[test]
        fn position_text_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
            let pos = Position::new(bits);
            prop_assert_eq!(pos.to_string().parse::<Position>().unwrap(), pos);
        }
    }
}
