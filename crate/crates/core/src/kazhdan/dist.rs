use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for the floating-point path.
pub const TOLERANCE: f64 = 1e-12;

/// Scalars usable as weights. Exact types compare without tolerance.
pub trait Weight: Num + Signed + PartialOrd + Clone + ToPrimitive + Debug {
    const EXACT: bool;

    fn close_to(&self, other: &Self) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).abs().to_f64().is_some_and(|d| d <= TOLERANCE)
        }
    }

    /// `self ≤ other`, up to tolerance on the inexact path.
    fn at_most(&self, other: &Self) -> bool {
        self <= other || (!Self::EXACT && self.close_to(other))
    }
}

impl Weight for Ratio<i64> {
    const EXACT: bool = true;
}

impl Weight for Ratio<i128> {
    const EXACT: bool = true;
}

impl Weight for f64 {
    const EXACT: bool = false;
}

/// A finitely supported probability measure: nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<P: Ord, W> {
    weights: BTreeMap<P, W>,
}

impl<P: Ord + Clone + Debug, W: Weight> Distribution<P, W> {
    pub fn new(entries: impl IntoIterator<Item = (P, W)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (p, w) in entries {
            if w.is_negative() {
                return Err(Error::MalformedStructure(format!("negative weight at {p:?}")));
            }
            if weights.insert(p.clone(), w).is_some() {
                return Err(Error::MalformedStructure(format!("{p:?} listed twice")));
            }
        }
        weights.retain(|_, w| !w.is_zero());
        let total = weights.values().fold(W::zero(), |a, w| a + w.clone());
        if !total.close_to(&W::one()) {
            return Err(Error::MalformedStructure(format!("weights sum to {total:?}")));
        }
        Ok(Distribution { weights })
    }

    pub fn point_mass(p: P) -> Self {
        Distribution { weights: BTreeMap::from([(p, W::one())]) }
    }

    /// Uniform measure on the distinct points given.
    pub fn uniform(points: impl IntoIterator<Item = P>) -> Result<Self>
    where
        W: From<i128>,
    {
        let pts: Vec<P> = points.into_iter().collect();
        let n = W::from(pts.len() as i128);
        Distribution::new(pts.into_iter().map(|p| (p, W::one() / n.clone())))
    }

    pub fn weight(&self, p: &P) -> W {
        self.weights.get(p).cloned().unwrap_or_else(W::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &W)> {
        self.weights.iter()
    }

    /// `g·f`, where `(g·f)(g·x) = f(x)`.
    pub fn push_forward(&self, g: impl Fn(&P) -> Option<P>) -> Result<Self> {
        Ok(Distribution { weights: push(&self.weights, g)? })
    }
}

fn push<P: Ord + Debug, W: Weight>(weights: &BTreeMap<P, W>, g: impl Fn(&P) -> Option<P>) -> Result<BTreeMap<P, W>> {
    let mut out = BTreeMap::new();
    for (p, w) in weights {
        let q = g(p).ok_or_else(|| Error::TruncationTooSmall(format!("no image for {p:?}")))?;
        if out.insert(q, w.clone()).is_some() {
            return Err(Error::InvariantViolation(format!("action is not injective at {p:?}")));
        }
    }
    Ok(out)
}

/// Entrywise `a - b` over the union of supports.
fn difference<P: Ord + Clone, W: Weight>(a: &BTreeMap<P, W>, b: &BTreeMap<P, W>) -> Vec<W> {
    let mut out: BTreeMap<P, W> = a.clone();
    for (p, w) in b {
        let e = out.entry(p.clone()).or_insert_with(W::zero);
        *e = e.clone() - w.clone();
    }
    out.into_values().collect()
}

fn l1<W: Weight>(v: &[W]) -> W {
    v.iter().fold(W::zero(), |a, x| a + x.abs())
}

/// `‖g·f − f‖₁`.
pub fn displacement<P: Ord + Clone + Debug, W: Weight>(g: impl Fn(&P) -> Option<P>, f: &Distribution<P, W>) -> Result<W> {
    let moved = push(&f.weights, g)?;
    Ok(l1(&difference(&moved, &f.weights)))
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport<W> {
    pub lhs: W,
    pub rhs: W,
    pub holds: bool,
}

/// Displacement of the marginal `f̃(x̄) = Σ_y f(x̄, y)` against that of `f`, for `f`
/// on tuples whose last coordinate is summed out. `g` acts diagonally.
pub fn marginal_check<P: Ord + Clone + Debug, W: Weight>(
    g: impl Fn(&P) -> Option<P>,
    f: &Distribution<Vec<P>, W>,
) -> Result<InequalityReport<W>> {
    let mut marginal: BTreeMap<Vec<P>, W> = BTreeMap::new();
    for (t, w) in f.iter() {
        let head = t[..t.len().saturating_sub(1)].to_vec();
        let e = marginal.entry(head).or_insert_with(W::zero);
        *e = e.clone() + w.clone();
    }
    let diag = |t: &Vec<P>| t.iter().map(&g).collect::<Option<Vec<P>>>();
    let marginal = Distribution { weights: marginal };
    let lhs = displacement(diag, &marginal)?;
    let rhs = displacement(diag, f)?;
    let holds = lhs.at_most(&rhs);
    Ok(InequalityReport { lhs, rhs, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport<W> {
    /// `‖g·|f|² − |f|²‖₁`.
    pub lhs: W,
    /// `4‖g·f − f‖₂²`, exact when the weights are.
    pub rhs_squared: W,
    /// `2‖g·f − f‖₂`.
    pub rhs: f64,
    pub holds: bool,
}

/// `‖g·|f|² − |f|²‖₁ ≤ 2‖g·f − f‖₂` for a unit vector `f`. Exact weights are compared
/// after squaring, so no square root is taken.
pub fn l1_l2_transfer<P: Ord + Clone + Debug, W: Weight>(
    g: impl Fn(&P) -> Option<P>,
    f: &BTreeMap<P, W>,
) -> Result<TransferReport<W>> {
    let norm = f.values().fold(W::zero(), |a, w| a + w.clone() * w.clone());
    if !norm.close_to(&W::one()) {
        return Err(Error::MalformedStructure(format!("‖f‖₂² = {norm:?}, expected 1")));
    }
    let squares: BTreeMap<P, W> = f.iter().map(|(p, w)| (p.clone(), w.clone() * w.clone())).collect();
    let moved_sq = push(&squares, &g)?;
    let lhs = l1(&difference(&moved_sq, &squares));
    let moved = push(f, &g)?;
    let two = W::one() + W::one();
    let rhs_squared = difference(&moved, f)
        .into_iter()
        .fold(W::zero(), |a, d| a + d.clone() * d)
        * two.clone()
        * two;
    let rhs = rhs_squared.to_f64().unwrap_or(f64::NAN).sqrt();
    let holds = if W::EXACT {
        lhs.clone() * lhs.clone() <= rhs_squared
    } else {
        lhs.to_f64().is_some_and(|l| l <= rhs + TOLERANCE)
    };
    Ok(TransferReport { lhs, rhs_squared, rhs, holds })
}

/// A random distribution on the given points with integer weights in `1..=max_weight`.
pub fn random_distribution<P: Ord + Clone + Debug, R: Rng>(
    rng: &mut R,
    points: &[P],
    max_weight: i128,
) -> Distribution<P, Ratio<i128>> {
    let raw: Vec<i128> = points.iter().map(|_| rng.gen_range(1..=max_weight)).collect();
    let total: i128 = raw.iter().sum();
    Distribution {
        weights: points.iter().cloned().zip(raw.into_iter().map(|w| Ratio::new(w, total))).collect(),
    }
}

/// A random rational point on the unit sphere in `dim` coordinates, by inverse
/// stereographic projection of a point with common denominator `b`.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Ratio<i128>> {
    assert!(dim >= 1);
    loop {
        let b: i128 = rng.gen_range(1..=10);
        let a: Vec<i128> = (1..dim).map(|_| rng.gen_range(-10..=10)).collect();
        let s: i128 = a.iter().map(|x| x * x).sum();
        let n = b * b + s;
        let mut out: Vec<Ratio<i128>> = a.iter().map(|x| Ratio::new(2 * x * b, n)).collect();
        out.push(Ratio::new(s - b * b, n));
        if dim > 1 || !out[0].is_zero() {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Ratio<i128>;

    fn shift(k: i64) -> impl Fn(&i64) -> Option<i64> {
        move |x| Some(x + k)
    }

    #[test]
    fn displacement_examples() {
        let f: Distribution<i64, Q> = Distribution::uniform([0, 1, 2]).unwrap();
        assert!(displacement(shift(0), &f).unwrap().is_zero());
        let p: Distribution<i64, Q> = Distribution::point_mass(5);
        assert_eq!(displacement(shift(1), &p).unwrap(), Q::from(2));
        // uniform on an invariant 3-cycle
        let rot = |x: &i64| Some((x + 1) % 3);
        assert!(displacement(rot, &f).unwrap().is_zero());
        let partial = |x: &i64| if *x < 2 { Some(*x) } else { None };
        assert!(matches!(displacement(partial, &f), Err(Error::TruncationTooSmall(_))));
        assert!(Distribution::<i64, Q>::new([(0, Q::new(1, 2))]).is_err());
    }

    #[test]
    fn product_marginal_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f1 = random_distribution(&mut rng, &[0i64, 1, 2, 5], 9);
        let f2 = random_distribution(&mut rng, &[3i64, 4], 9);
        let product = Distribution::new(
            f1.iter()
                .flat_map(|(a, wa)| f2.iter().map(move |(b, wb)| (vec![*a, *b], *wa * *wb))),
        )
        .unwrap();
        let r = marginal_check(shift(1), &product).unwrap();
        assert_eq!(r.lhs, displacement(shift(1), &f1).unwrap());
        assert!(r.holds);
        let id = marginal_check(shift(0), &product).unwrap();
        assert!(id.lhs.is_zero() && id.rhs.is_zero());
    }

    #[test]
    fn transfer_on_point_mass() {
        let f: BTreeMap<i64, Q> = BTreeMap::from([(0, Q::one())]);
        let r = l1_l2_transfer(shift(1), &f).unwrap();
        assert_eq!(r.lhs, Q::from(2));
        assert_eq!(r.rhs_squared, Q::from(8));
        assert!((r.rhs - 2.0 * 2f64.sqrt()).abs() < 1e-12 && r.holds);
        let r = l1_l2_transfer(shift(0), &f).unwrap();
        assert!(r.lhs.is_zero() && r.rhs == 0.0);
    }

    #[test]
    fn unit_vectors_have_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in 1..7 {
            let v = random_unit_vector(&mut rng, dim);
            assert_eq!(v.iter().map(|x| x * x).sum::<Q>(), Q::one());
        }
    }

    proptest! {
        #[test]
        fn square_difference_bound(a in 0u32..10_000, b in 0u32..10_000, d in 1u32..1000) {
            let (a, b) = (Q::new(a as i128, d as i128), Q::new(b as i128, d as i128));
            prop_assert!((a - b) * (a - b) <= (a * a - b * b).abs());
        }

        #[test]
        fn marginal_never_exceeds(seed in any::<u64>(), k in 0i64..3, len in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tuples: Vec<Vec<i64>> = (0..6).map(|_| (0..len).map(|_| rng.gen_range(0..4)).collect()).collect();
            let mut tuples = tuples;
            tuples.sort();
            tuples.dedup();
            let f = random_distribution(&mut rng, &tuples, 9);
            prop_assert!(marginal_check(|x: &i64| Some((x + k) % 4), &f).unwrap().holds);
        }

        #[test]
        fn float_path_agrees(seed in any::<u64>(), k in 1i64..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_unit_vector(&mut rng, 5);
            let exact: BTreeMap<i64, Q> = (0..5).zip(v.iter().cloned()).collect();
            let float: BTreeMap<i64, f64> = (0..5).zip(v.iter().map(|x| x.to_f64().unwrap())).collect();
            let e = l1_l2_transfer(shift(k), &exact).unwrap();
            let f = l1_l2_transfer(shift(k), &float).unwrap();
            prop_assert!(e.holds && f.holds);
            prop_assert!((e.lhs.to_f64().unwrap() - f.lhs).abs() < 1e-9);
        }
    }
}
