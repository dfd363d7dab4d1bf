use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::Error;

/// A reduced word in the free group on `x`, `y`. Letters are `1 = x`, `-1 = x⁻¹`,
/// `2 = y`, `-2 = y⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<i8>);

pub const LETTERS: [i8; 4] = [1, -1, 2, -2];

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn x() -> Self {
        Word(vec![1])
    }

    pub fn y() -> Self {
        Word(vec![2])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: &[i8]) -> Self {
        let mut out: Vec<i8> = Vec::with_capacity(letters.len());
        for &l in letters {
            debug_assert!(LETTERS.contains(&l));
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::identity(), |acc, _| acc.mul(self))
    }

    /// `y⁻¹ x y`.
    pub fn conjugate(&self, y: &Word) -> Word {
        y.inverse().mul(self).mul(y)
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Injective code for words of length ≤ 60.
    pub fn code(&self) -> u128 {
        debug_assert!(self.len() <= 60);
        self.0.iter().fold(0u128, |acc, &l| {
            let bits = match l {
                1 => 0,
                -1 => 1,
                2 => 2,
                _ => 3,
            };
            acc << 2 | bits
        }) | (self.len() as u128) << 120
    }

    /// Uniformly random reduced word of the given length.
    pub fn random<R: Rng>(rng: &mut R, len: usize) -> Word {
        let mut out: Vec<i8> = Vec::with_capacity(len);
        while out.len() < len {
            let l = LETTERS[rng.gen_range(0..4)];
            if out.last() != Some(&-l) {
                out.push(l);
            }
        }
        Word(out)
    }
}

/// All reduced words of length ≤ `r`, shortest first.
pub fn ball(r: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut start = 0;
    for _ in 0..r {
        let end = out.len();
        for i in start..end {
            for l in LETTERS {
                if out[i].0.last() != Some(&-l) {
                    let mut w = out[i].0.clone();
                    w.push(l);
                    out.push(Word(w));
                }
            }
        }
        start = end;
    }
    out
}

/// Number of reduced words of length ≤ `r`.
pub fn ball_size(r: usize) -> usize {
    if r == 0 {
        1
    } else {
        2 * 3usize.pow(r as u32) - 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            f.write_str(match l {
                1 => "x",
                -1 => "X",
                2 => "y",
                _ => "Y",
            })?;
        }
        Ok(())
    }
}

/// Parses words written with `x`, `y` and capitals for inverses; `1` is the identity.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" {
            return Ok(Word::identity());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'x' => Ok(1),
                'X' => Ok(-1),
                'y' => Ok(2),
                'Y' => Ok(-2),
                other => Err(Error::MalformedStructure(format!("bad letter {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<i8>, Error>>()?;
        Ok(Word::from_letters(&letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        let w: Word = "xyYX".parse().unwrap();
        assert!(w.is_identity());
        let u: Word = "xyX".parse().unwrap();
        assert!(u.mul(&u.inverse()).is_identity());
        assert_eq!(u.to_string(), "xyX");
    }

    #[test]
    fn balls_have_the_right_size() {
        for r in 0..6 {
            assert_eq!(ball(r).len(), ball_size(r));
        }
        let codes: std::collections::HashSet<u128> = ball(5).iter().map(Word::code).collect();
        assert_eq!(codes.len(), ball_size(5));
    }
}
