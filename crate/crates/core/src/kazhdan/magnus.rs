use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::word::Word;
use crate::error::{Error, Result};

/// Longest word accepted by the comparison.
pub const MAX_WORD: usize = 60;

/// Largest truncation degree; the dense series has `2^{d+1} - 1` coefficients.
pub const MAX_DEGREE: usize = 20;

/// Default truncation degree for words up to length `len`.
pub fn default_degree(len: usize) -> usize {
    len + 2
}

/// The Magnus expansion `x ↦ 1+X`, `y ↦ 1+Y` truncated at degree `d`, stored
/// densely: the monomial of degree `j` whose letters read as the bits of `b`
/// (`X = 0`, `Y = 1`, first letter most significant) sits at `2^j - 1 + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusSeries {
    degree: usize,
    coeffs: Vec<i128>,
}

fn slot(j: usize, b: usize) -> usize {
    (1 << j) - 1 + b
}

impl MagnusSeries {
    pub fn one(degree: usize) -> Self {
        let mut coeffs = vec![0; (1 << (degree + 1)) - 1];
        coeffs[0] = 1;
        MagnusSeries { degree, coeffs }
    }

    pub fn of(w: &Word, degree: usize) -> Self {
        w.letters().iter().fold(MagnusSeries::one(degree), |s, &l| s.times_letter(l))
    }

    /// Coefficient of the monomial of degree `j` with letter bits `b`.
    pub fn coeff(&self, j: usize, b: usize) -> i128 {
        self.coeffs[slot(j, b)]
    }

    /// Right multiplication by `1+L` or, for an inverse letter, `Σ_i (-L)^i`.
    fn times_letter(&self, letter: i8) -> Self {
        let bit = usize::from(letter.abs() == 2);
        let inverse = letter < 0;
        let mut out = self.clone();
        for j in 1..=self.degree {
            for b in 0..1usize << j {
                let mut total = 0i128;
                for i in 1..=j {
                    // the last i letters of the monomial must all be L
                    if (b >> (i - 1)) & 1 != bit {
                        break;
                    }
                    if !inverse && i > 1 {
                        break;
                    }
                    let c = if inverse && i % 2 == 1 { -1 } else { 1 };
                    total += c * self.coeff(j - i, b >> i);
                }
                out.coeffs[slot(j, b)] += total;
            }
        }
        out
    }

    /// Sign of the first nonzero coefficient of `self - other` in graded
    /// lexicographic order, skipping the constant term.
    fn compare(&self, other: &Self) -> Option<Ordering> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .find(|(a, b)| a != b)
            .map(|(a, b)| a.cmp(b))
    }
}

/// The bi-invariant order on `F₂` read off the truncated Magnus expansion.
pub fn magnus_compare(u: &Word, v: &Word, degree: usize) -> Result<Ordering> {
    if u.len() > MAX_WORD || v.len() > MAX_WORD {
        return Err(Error::limit("word length", u.len().max(v.len()) as u128, MAX_WORD as u128));
    }
    if degree > MAX_DEGREE {
        return Err(Error::limit("Magnus degree", degree as u128, MAX_DEGREE as u128));
    }
    if u == v {
        return Ok(Ordering::Equal);
    }
    // the lower-degree coefficients do not depend on the truncation, so deepen
    // until the expansions differ
    (1..=degree)
        .find_map(|d| MagnusSeries::of(u, d).compare(&MagnusSeries::of(v, d)))
        .ok_or(Error::UndecidedComparison { degree })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OrderAxiomsReport {
    pub trials: usize,
    pub max_len: usize,
    pub degree: usize,
    pub left_invariance_failures: usize,
    pub right_invariance_failures: usize,
    pub endpoint_failures: usize,
    pub density_checked: usize,
    pub density_failures: usize,
    pub examples: Vec<String>,
}

impl OrderAxiomsReport {
    pub fn failures(&self) -> usize {
        self.left_invariance_failures + self.right_invariance_failures + self.endpoint_failures + self.density_failures
    }

    fn record(&mut self, what: &str, detail: String) {
        if self.examples.len() < 10 {
            self.examples.push(format!("{what}: {detail}"));
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::random(rng, len)
}

/// Samples triples `u, v, w` and checks invariance on both sides, the absence
/// of endpoints and the conjugation argument for density.
pub fn order_axioms_check(trials: usize, max_len: usize, degree: usize, seed: u64) -> Result<OrderAxiomsReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Word::identity();
    let lt = |a: &Word, b: &Word| magnus_compare(a, b, degree).map(|o| o == Ordering::Less);
    let mut r = OrderAxiomsReport { trials, max_len, degree, ..Default::default() };
    for _ in 0..trials {
        let u = random_word(&mut rng, max_len);
        let v = random_word(&mut rng, max_len);
        let w = random_word(&mut rng, max_len);
        if u != v {
            let (lo, hi) = if lt(&u, &v)? { (&u, &v) } else { (&v, &u) };
            if !lt(&w.mul(lo), &w.mul(hi))? {
                r.left_invariance_failures += 1;
                r.record("left", format!("{lo} < {hi}, w = {w}"));
            }
            if !lt(&lo.mul(&w), &hi.mul(&w))? {
                r.right_invariance_failures += 1;
                r.record("right", format!("{lo} < {hi}, w = {w}"));
            }
        }
        if u.is_identity() {
            continue;
        }
        let x = if lt(&one, &u)? { u.clone() } else { u.inverse() };
        let xi = x.inverse();
        if !lt(&x, &x.mul(&x))? || !lt(&xi.mul(&xi), &xi)? {
            r.endpoint_failures += 1;
            r.record("endpoint", format!("x = {x}"));
        }
        if x.mul(&v) == v.mul(&x) {
            continue;
        }
        r.density_checked += 1;
        let conj = x.conjugate(&v);
        let z = if lt(&conj, &x)? { conj } else { x.conjugate(&v.inverse()) };
        if !(lt(&one, &z)? && lt(&z, &x)?) {
            r.density_failures += 1;
            r.record("density", format!("x = {x}, y = {v}, z = {z}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn expansion_of_generators() {
        let s = MagnusSeries::of(&w("X"), 4);
        // x⁻¹ = 1 - X + X² - X³ + X⁴
        assert_eq!((0..=4).map(|j| s.coeff(j, 0)).collect::<Vec<_>>(), vec![1, -1, 1, -1, 1]);
        let p = MagnusSeries::of(&w("xX"), 6);
        assert_eq!(p, MagnusSeries::one(6));
        let c = MagnusSeries::of(&Word::commutator(&Word::x(), &Word::y()), 2);
        assert_eq!((c.coeff(1, 0), c.coeff(1, 1)), (0, 0));
        // XY, YX
        assert_eq!((c.coeff(2, 0b01), c.coeff(2, 0b10)), (1, -1));
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(magnus_compare(&w("xy"), &w("xy"), 4).unwrap(), Ordering::Equal);
        assert_eq!(magnus_compare(&Word::x(), &Word::identity(), 3).unwrap(), Ordering::Greater);
        let c = Word::commutator(&Word::x(), &Word::y());
        assert_eq!(magnus_compare(&c, &Word::identity(), 4).unwrap(), Ordering::Greater);
        assert!(matches!(
            magnus_compare(&c, &Word::identity(), 1),
            Err(Error::UndecidedComparison { degree: 1 })
        ));
        let x = c.pow(2);
        assert_eq!(magnus_compare(&x.pow(2), &x, 10).unwrap(), Ordering::Greater);
        assert_eq!(magnus_compare(&x, &Word::identity(), 10).unwrap(), Ordering::Greater);
    }

    #[test]
    fn order_is_total_and_transitive_on_a_ball() {
        let words = crate::kazhdan::ball(3);
        let mut sorted = words.clone();
        sorted.sort_by(|a, b| magnus_compare(a, b, 8).unwrap());
        for pair in sorted.windows(2) {
            assert_eq!(magnus_compare(&pair[0], &pair[1], 8).unwrap(), Ordering::Less);
        }
        assert_eq!(sorted.len(), words.len());
    }

    #[test]
    fn small_sample_passes() {
        let r = order_axioms_check(200, 3, 8, 1).unwrap();
        assert_eq!(r.failures(), 0, "{:?}", r.examples);
    }
}
