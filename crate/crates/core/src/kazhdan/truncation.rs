use std::collections::BTreeSet;

use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finstruct::{self, ClassId};

/// Points of every truncation are rationals: the integers for sets and graphs,
/// dyadic rationals for the order.
pub type Point = crate::Rational;

/// How many candidates a single extension step may inspect.
pub const DEFAULT_SEARCH: usize = 1 << 20;

/// A finite partial map, kept sorted by domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialMap(Vec<(Point, Point)>);

impl PartialMap {
    pub fn empty() -> Self {
        PartialMap(Vec::new())
    }

    pub fn from_pairs(mut pairs: Vec<(Point, Point)>) -> Self {
        pairs.sort();
        PartialMap(pairs)
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, x: &Point) -> Option<Point> {
        self.0.binary_search_by(|(d, _)| d.cmp(x)).ok().map(|i| self.0[i].1)
    }

    pub fn preimage(&self, y: &Point) -> Option<Point> {
        self.0.iter().find(|(_, r)| r == y).map(|(d, _)| *d)
    }

    pub fn dom(&self) -> BTreeSet<Point> {
        self.0.iter().map(|p| p.0).collect()
    }

    pub fn ran(&self) -> BTreeSet<Point> {
        self.0.iter().map(|p| p.1).collect()
    }

    pub fn inverse(&self) -> PartialMap {
        PartialMap::from_pairs(self.0.iter().map(|&(a, b)| (b, a)).collect())
    }

    pub fn with(&self, x: Point, y: Point) -> PartialMap {
        let mut pairs = self.0.clone();
        pairs.push((x, y));
        PartialMap::from_pairs(pairs)
    }

    pub fn contains(&self, other: &PartialMap) -> bool {
        other.0.iter().all(|(x, y)| self.get(x) == Some(*y))
    }

    /// Every sub-map, including the empty one and `self`.
    pub fn submaps(&self) -> impl Iterator<Item = PartialMap> + '_ {
        let n = self.0.len();
        (0u64..1 << n).map(move |mask| {
            PartialMap((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }
}

/// Serializes any displayable value, such as a rational, as its string form.
pub(crate) fn display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl Serialize for PartialMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|(a, b)| [a.to_string(), b.to_string()]))
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Set,
    Order,
    Graph { seed: u64 },
}

/// A fixed, deterministic finite window onto the generic structure, searched in a
/// fixed candidate order. The graph is a hash-defined random graph on the naturals.
#[derive(Debug, Clone)]
pub struct Truncation {
    kind: Kind,
    search: usize,
    enumeration: Vec<Point>,
}

impl Truncation {
    pub fn new(class: ClassId, seed: u64, search: usize) -> Result<Self> {
        let c = finstruct::class(class);
        if !c.is_relational() || !c.has_no_algebraicity() {
            return Err(Error::NoAlgebraicityRequired(format!("{class} has algebraicity or is not relational")));
        }
        let kind = match class {
            ClassId::PureSet => Kind::Set,
            ClassId::LinearOrder => Kind::Order,
            ClassId::Graph => Kind::Graph { seed },
            other => return Err(Error::NoAlgebraicityRequired(format!("no truncation for {other}"))),
        };
        Ok(Truncation { kind, search, enumeration: Vec::new() })
    }

    pub fn class(&self) -> ClassId {
        match self.kind {
            Kind::Set => ClassId::PureSet,
            Kind::Order => ClassId::LinearOrder,
            Kind::Graph { .. } => ClassId::Graph,
        }
    }

    /// `a_1, …, a_n`.
    pub fn enumerate(&mut self, n: usize) -> &[Point] {
        while self.enumeration.len() < n {
            let next = match self.kind {
                Kind::Order => self.next_dyadic(),
                _ => Point::from(self.enumeration.len() as i128),
            };
            self.enumeration.push(next);
        }
        &self.enumeration[..n]
    }

    /// Dyadics of growing height: `0, -1, 1, -1/2, 1/2, -3/2, 3/2, …`, each round
    /// adding the points `m/2^k` with `|m/2^k| ≤ k+1` not seen before.
    fn next_dyadic(&self) -> Point {
        let seen: BTreeSet<&Point> = self.enumeration.iter().collect();
        for k in 0u32.. {
            let scale = 1i128 << k;
            let reach = (k as i128 + 1) * scale;
            let mut round: Vec<Point> = (-reach..=reach)
                .map(|m| Point::new(m, scale))
                .filter(|p| !seen.contains(p))
                .collect();
            round.sort_by_key(|p| (p.abs(), *p));
            if let Some(p) = round.first() {
                return *p;
            }
        }
        unreachable!()
    }

    fn edge(&self, a: &Point, b: &Point) -> bool {
        let Kind::Graph { seed } = self.kind else { return false };
        if a == b {
            return false;
        }
        let (u, v) = (a.to_integer().min(b.to_integer()), a.to_integer().max(b.to_integer()));
        splitmix(seed ^ splitmix((u as u64) << 32 ^ v as u64)) & 1 == 1
    }

    /// Whether `x ↦ y` preserves every relation among the given points.
    pub fn is_partial_iso(&self, map: &PartialMap) -> bool {
        let p = map.pairs();
        if map.ran().len() != p.len() {
            return false;
        }
        p.iter().enumerate().all(|(i, (a, b))| {
            p[i + 1..].iter().all(|(c, d)| match self.kind {
                Kind::Set => true,
                Kind::Order => (a < c) == (b < d),
                Kind::Graph { .. } => self.edge(a, c) == self.edge(b, d),
            })
        })
    }

    fn fits(&self, map: &PartialMap, a: &Point, c: &Point) -> bool {
        map.pairs().iter().all(|(d, r)| match self.kind {
            Kind::Set => r != c,
            Kind::Order => r != c && (d < a) == (r < c),
            Kind::Graph { .. } => r != c && self.edge(d, a) == self.edge(r, c),
        })
    }

    /// The first `count` candidates `c ∉ avoid` such that `map ∪ {a ↦ c}` is a
    /// partial isomorphism: the extension property inside the truncation, applied
    /// repeatedly with each new image added to the avoided set.
    pub fn extend(&self, map: &PartialMap, a: &Point, avoid: &BTreeSet<Point>, count: usize) -> Result<Vec<Point>> {
        let ok = |c: &Point| !avoid.contains(c) && self.fits(map, a, c);
        let found: Vec<Point> = match self.kind {
            Kind::Order => {
                let lo = map.pairs().iter().filter(|(d, _)| d < a).map(|p| p.1).max();
                let hi = map.pairs().iter().filter(|(d, _)| d > a).map(|p| p.1).min();
                dyadics_between(lo, hi).take(self.search).filter(ok).take(count).collect()
            }
            _ => (0..self.search as i128).map(Point::from).filter(ok).take(count).collect(),
        };
        if found.len() < count {
            return Err(Error::TruncationTooSmall(format!(
                "{} of {count} extensions for {a} within {} candidates",
                found.len(),
                self.search
            )));
        }
        Ok(found)
    }
}

/// Dyadics in the open interval `(lo, hi)`, simplest denominators first.
fn dyadics_between(lo: Option<Point>, hi: Option<Point>) -> impl Iterator<Item = Point> {
    const WIDTH: i128 = 1 << 12;
    (0u32..100).flat_map(move |k| {
        let scale = Point::from(1i128 << k);
        let first = lo.map(|l| (l * scale).floor().to_integer() + 1);
        let last = hi.map(|h| (h * scale).ceil().to_integer() - 1);
        let (first, last) = match (first, last) {
            (Some(f), Some(l)) => (f, l),
            (Some(f), None) => (f, f + WIDTH),
            (None, Some(l)) => (l - WIDTH, l),
            (None, None) => (-WIDTH, WIDTH),
        };
        (first..=last.max(first - 1))
            .filter(move |m| k == 0 || m % 2 != 0)
            .map(move |m| Point::from(m) / scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn dyadic_enumeration_is_distinct() {
        let mut t = Truncation::new(ClassId::LinearOrder, 0, DEFAULT_SEARCH).unwrap();
        let a = t.enumerate(20).to_vec();
        assert_eq!(a[0], Point::zero());
        let set: BTreeSet<_> = a.iter().collect();
        assert_eq!(set.len(), 20);
    }

    #[test]
    fn extension_respects_order_and_avoidance() {
        let t = Truncation::new(ClassId::LinearOrder, 0, DEFAULT_SEARCH).unwrap();
        let map = PartialMap::from_pairs(vec![(Point::from(0), Point::from(5)), (Point::from(2), Point::from(6))]);
        let avoid: BTreeSet<Point> = [Point::from(0), Point::from(2), Point::from(1)].into();
        let c = t.extend(&map, &Point::from(1), &avoid, 1).unwrap()[0];
        assert!(c > Point::from(5) && c < Point::from(6));
        assert!(t.is_partial_iso(&map.with(Point::from(1), c)));
    }

    #[test]
    fn graph_extension_matches_adjacency() {
        let t = Truncation::new(ClassId::Graph, 11, DEFAULT_SEARCH).unwrap();
        let mut map = PartialMap::empty();
        for i in 0..8 {
            let a = Point::from(i);
            let avoid: BTreeSet<Point> = map.dom().union(&map.ran()).cloned().chain([a]).collect();
            let images = t.extend(&map, &a, &avoid, 3).unwrap();
            for &c in &images {
                assert!(t.is_partial_iso(&map.with(a, c)));
            }
            map = map.with(a, images[2]);
        }
        assert!(map.pairs().iter().all(|(a, b)| a != b));
        assert!(Truncation::new(ClassId::VectorSpace { q: 2 }, 0, 10).is_err());
    }
}
