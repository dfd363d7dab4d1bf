use num_integer::Integer;
use serde::Serialize;

use crate::arith::modp::{self, Matrix};
use crate::arith::CycInt;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::permgrp::{class_partition, ClassPartition, ConjClass, PermGroup};

/// Irreducible complex characters of a finite permutation group, with exact values.
///
/// Classes follow [`class_partition`] order (class 0 is the identity). Rows are
/// sorted by degree, with the trivial character first and the remaining rows of
/// equal degree in decreasing order of their value vectors.
#[derive(Clone)]
pub struct CharacterTable {
    group: PermGroup,
    partition: ClassPartition,
    exponent: u32,
    characters: Vec<Vec<CycInt>>,
    degrees: Vec<u64>,
    inverse_class: Vec<usize>,
}

impl CharacterTable {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn partition(&self) -> &ClassPartition {
        &self.partition
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.partition.classes
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// Exponent of the group; every value lies in `Z[ζ_exponent]`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn characters(&self) -> &[Vec<CycInt>] {
        &self.characters
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    /// `Σ_c |C_c| a(c) conj(b(c))`, i.e. `|G|` times the Hermitian inner product.
    pub fn scaled_inner(&self, a: &[CycInt], b: &[CycInt]) -> CycInt {
        let e = self.exponent;
        let mut acc = CycInt::zero(e);
        for (c, class) in self.classes().iter().enumerate() {
            if a[c].is_zero() || b[c].is_zero() {
                continue;
            }
            let term = &a[c] * &b[c].conj();
            acc = &acc + &term.scale(&(class.size as i64));
        }
        acc
    }

    /// Checks both orthogonality relations, the class count and `Σ deg² = |G|` exactly.
    pub fn verify(&self) -> Result<()> {
        let n = self.order() as i64;
        let r = self.classes().len();
        if self.characters.len() != r {
            return Err(Error::InvariantViolation(format!(
                "{} characters for {r} classes",
                self.characters.len()
            )));
        }
        let sum_sq: u128 = self.degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
        if sum_sq != self.order() {
            return Err(Error::InvariantViolation(format!("sum of squared degrees {sum_sq} != |G|")));
        }
        for a in 0..r {
            for b in a..r {
                let ip = self.scaled_inner(&self.characters[a], &self.characters[b]);
                let want = if a == b { n } else { 0 };
                if ip != CycInt::integer(self.exponent, want) {
                    return Err(Error::InvariantViolation(format!(
                        "row orthogonality fails for characters {a}, {b}"
                    )));
                }
            }
        }
        // column relation: Σ_χ χ(c) conj(χ(d)) = δ_cd |C_G(g_c)|
        let conj_rows: Vec<Vec<CycInt>> = self
            .characters
            .iter()
            .map(|row| row.iter().map(CycInt::conj).collect())
            .collect();
        for c in 0..r {
            for d in c..r {
                let mut acc = CycInt::zero(self.exponent);
                for (row, crow) in self.characters.iter().zip(&conj_rows) {
                    acc = &acc + &(&row[c] * &crow[d]);
                }
                let want = if c == d { n / self.classes()[c].size as i64 } else { 0 };
                if acc != CycInt::integer(self.exponent, want) {
                    return Err(Error::InvariantViolation(format!(
                        "column orthogonality fails for classes {c}, {d}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// JSON-ready view; values are exact `{order, coeffs}` pairs.
    pub fn export(&self) -> TableExport {
        TableExport {
            order: self.order(),
            exponent: self.exponent,
            classes: self
                .classes()
                .iter()
                .map(|c| ClassExport {
                    representative: c.representative.images().to_vec(),
                    size: c.size,
                    element_order: c.element_order,
                    cycle_type: c.cycle_type.clone(),
                })
                .collect(),
            degrees: self.degrees.clone(),
            characters: self.characters.clone(),
        }
    }

    /// CSV with floating-point approximations of the exact values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# numeric approximations derived from exact cyclotomic values\n");
        out.push_str("character,degree");
        for c in 0..self.classes().len() {
            out.push_str(&format!(",class_{c}"));
        }
        out.push('\n');
        for (i, row) in self.characters.iter().enumerate() {
            out.push_str(&format!("{i},{}", self.degrees[i]));
            for v in row {
                out.push(',');
                out.push_str(&format_complex(v.to_complex()));
            }
            out.push('\n');
        }
        out
    }
}

pub fn format_complex((re, im): (f64, f64)) -> String {
    let clean = |x: f64| if x.abs() < 1e-9 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassExport {
    pub representative: Vec<u32>,
    pub size: usize,
    pub element_order: u64,
    pub cycle_type: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableExport {
    pub order: u128,
    pub exponent: u32,
    pub classes: Vec<ClassExport>,
    pub degrees: Vec<u64>,
    pub characters: Vec<Vec<CycInt>>,
}

fn isqrt(n: u128) -> u128 {
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Class structure constants as matrices: `m[i][j][k]` counts pairs `(x, y)` with
/// `x ∈ C_i`, `y ∈ C_j` and `xy = g_k` for the fixed representative `g_k`.
fn class_matrices(part: &ClassPartition, p: u64) -> Vec<Matrix> {
    let r = part.classes.len();
    let table = &part.table;
    let reps: Vec<usize> = part
        .classes
        .iter()
        .map(|c| table.index_of(&c.representative).expect("representative in group"))
        .collect();
    let mut m = vec![vec![vec![0u64; r]; r]; r];
    for x in 0..table.len() {
        let i = part.class_of[x];
        let xi = table.inv(x);
        for (k, &gk) in reps.iter().enumerate() {
            let y = table.mul(xi, gk);
            let j = part.class_of[y];
            m[i][j][k] += 1;
        }
    }
    for mi in m.iter_mut() {
        for row in mi.iter_mut() {
            for v in row.iter_mut() {
                *v %= p;
            }
        }
    }
    m
}

/// Splits the common eigenspaces of the class matrices until all are lines.
fn common_eigenvectors(mats: &[Matrix], r: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    let full: Matrix = (0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut spaces = vec![full];
    for m in mats.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let d = space.len();
            let pivots: Vec<usize> = space
                .iter()
                .map(|row| row.iter().position(|&x| x != 0).expect("non-zero basis row"))
                .collect();
            // restriction of m to the space, in coordinates read off the pivots
            let mut a = vec![vec![0u64; d]; d];
            for (t, b) in space.iter().enumerate() {
                let w: Vec<u64> = (0..r)
                    .map(|j| (0..r).fold(0u64, |acc, k| (acc + m[j][k] * b[k]) % p))
                    .collect();
                for (s, &pc) in pivots.iter().enumerate() {
                    a[s][t] = w[pc];
                }
            }
            let cp = modp::char_poly(&a, p);
            let mut total = 0;
            for lambda in modp::roots(&cp, p) {
                let shifted: Matrix = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let diag = if i == j { lambda } else { 0 };
                                (a[i][j] + p - diag) % p
                            })
                            .collect()
                    })
                    .collect();
                let ys = modp::nullspace(&shifted, d, p);
                let mut sub: Matrix = ys
                    .iter()
                    .map(|y| {
                        (0..r)
                            .map(|k| (0..d).fold(0u64, |acc, t| (acc + y[t] * space[t][k]) % p))
                            .collect()
                    })
                    .collect();
                modp::row_reduce(&mut sub, p);
                total += sub.len();
                next.push(sub);
            }
            if total != d {
                return Err(Error::InvariantViolation(
                    "class matrices are not simultaneously diagonalizable mod p".into(),
                ));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::InvariantViolation("common eigenspaces failed to split".into()));
    }
    Ok(spaces.into_iter().map(|mut s| s.pop().expect("line")).collect())
}

/// Exact character table by Dixon's method: the class matrices are diagonalized
/// simultaneously over `F_p` with `p ≡ 1 (mod exponent)`, and each character is
/// lifted to cyclotomic integers from its eigenvalue multiplicities on cyclic subgroups.
pub fn character_table(group: &PermGroup, limits: &Limits) -> Result<CharacterTable> {
    let part = class_partition(group, limits)?;
    let order = group.order();
    let r = part.classes.len();
    let exponent = part
        .classes
        .iter()
        .fold(1u64, |acc, c| acc.lcm(&c.element_order));
    let exponent = u32::try_from(exponent)
        .map_err(|_| Error::limit("group exponent", exponent as u128, u32::MAX as u128))?;
    let e = exponent as u64;
    let p = modp::prime_one_mod(e, 2 * isqrt(order) as u64 + 1);

    let mats = class_matrices(&part, p);
    let vectors = common_eigenvectors(&mats, r, p)?;
    let inverse_class: Vec<usize> = (0..r).map(|c| part.inverse_class(c)).collect();
    let sizes: Vec<u64> = part.classes.iter().map(|c| c.size as u64 % p).collect();
    let order_p = (order % p as u128) as u64;

    let z = modp::pow_mod(modp::primitive_root(p), (p - 1) / e, p);
    let power_class: Vec<Vec<usize>> = (0..r)
        .map(|c| {
            let o = part.classes[c].element_order;
            (0..o).map(|l| part.power_class(c, l)).collect()
        })
        .collect();

    let mut rows: Vec<(u64, Vec<CycInt>)> = Vec::with_capacity(r);
    for v in vectors {
        let norm = modp::inv_mod(v[0], p);
        let omega: Vec<u64> = v.iter().map(|&x| x * norm % p).collect();
        let s = (0..r).fold(0u64, |acc, j| {
            let t = omega[j] * omega[inverse_class[j]] % p * modp::inv_mod(sizes[j], p) % p;
            (acc + t) % p
        });
        let d_sq = order_p * modp::inv_mod(s, p) % p;
        let degree = (1..=isqrt(order) as u64)
            .find(|&d| d * d % p == d_sq)
            .ok_or_else(|| Error::InvariantViolation("no degree matches a character mod p".into()))?;
        let chi_p: Vec<u64> = (0..r)
            .map(|j| degree * omega[j] % p * modp::inv_mod(sizes[j], p) % p)
            .collect();
        let mut values = Vec::with_capacity(r);
        for c in 0..r {
            let o = part.classes[c].element_order;
            let zo = modp::pow_mod(z, e / o, p);
            let o_inv = modp::inv_mod(o % p, p);
            let mut poly = vec![0i64; exponent as usize];
            let mut total = 0u64;
            for k in 0..o {
                let zk = modp::inv_mod(modp::pow_mod(zo, k, p), p);
                let mut sum = 0u64;
                let mut w = 1u64;
                for l in 0..o {
                    sum = (sum + chi_p[power_class[c][l as usize]] * w) % p;
                    w = w * zk % p;
                }
                let mult = sum * o_inv % p;
                if mult > degree {
                    return Err(Error::InvariantViolation(
                        "eigenvalue multiplicity exceeds degree while lifting".into(),
                    ));
                }
                total += mult;
                poly[(k * (e / o)) as usize] = mult as i64;
            }
            if total != degree {
                return Err(Error::InvariantViolation("lifted multiplicities do not sum to the degree".into()));
            }
            values.push(CycInt::from_poly(exponent, &poly));
        }
        rows.push((degree, values));
    }

    let is_trivial = |row: &(u64, Vec<CycInt>)| row.1.iter().all(|v| *v == CycInt::one(exponent));
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| is_trivial(b).cmp(&is_trivial(a)))
            .then_with(|| b.1.cmp(&a.1))
    });
    let table = CharacterTable {
        group: group.clone(),
        partition: part,
        exponent,
        degrees: rows.iter().map(|r| r.0).collect(),
        characters: rows.into_iter().map(|r| r.1).collect(),
        inverse_class,
    };
    table.verify()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgrp::Perm;

    fn table(g: &PermGroup) -> CharacterTable {
        character_table(g, &Limits::default()).unwrap()
    }

    fn ints(row: &[CycInt]) -> Vec<i64> {
        row.iter().map(|v| v.as_integer().expect("rational value")).collect()
    }

    #[test]
    fn trivial_group() {
        let t = table(&PermGroup::trivial(2));
        assert_eq!(t.len(), 1);
        assert_eq!(ints(&t.characters()[0]), vec![1]);
    }

    #[test]
    fn cyclic_two() {
        let t = table(&PermGroup::symmetric(2));
        assert_eq!(ints(&t.characters()[0]), vec![1, 1]);
        assert_eq!(ints(&t.characters()[1]), vec![1, -1]);
    }

    #[test]
    fn symmetric_three() {
        let t = table(&PermGroup::symmetric(3));
        assert_eq!(t.degrees(), &[1, 1, 2]);
        assert_eq!(ints(&t.characters()[1]), vec![1, -1, 1]);
        assert_eq!(ints(&t.characters()[2]), vec![2, 0, -1]);
    }

    #[test]
    fn cyclic_three_needs_roots_of_unity() {
        let c3 = PermGroup::new(3, vec![Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap()]).unwrap();
        let t = table(&c3);
        assert_eq!(t.exponent(), 3);
        assert_eq!(t.degrees(), &[1, 1, 1]);
        assert!(t.characters()[1].iter().any(|v| v.as_integer().is_none()));
    }

    #[test]
    fn larger_groups_verify() {
        for n in 4..=6 {
            let t = table(&PermGroup::symmetric(n));
            let partitions = [0, 1, 2, 3, 5, 7, 11][n];
            assert_eq!(t.len(), partitions);
        }
        // GL(3,2) acting on the 7 nonzero vectors of F_2^3 (order 168)
        let a = Perm::from_cycles(7, &[&[1, 2, 3, 4, 5, 6, 7]]).unwrap();
        let b = Perm::from_cycles(7, &[&[2, 3, 5], &[4, 7, 6]]).unwrap();
        let c = Perm::from_cycles(7, &[&[1, 2], &[3, 6]]).unwrap();
        let g = PermGroup::new(7, vec![a, b, c]).unwrap();
        assert_eq!(g.order(), 168);
        let t = table(&g);
        assert_eq!(t.degrees(), &[1, 3, 3, 6, 7, 8]);
    }

    #[test]
    fn csv_and_json() {
        let t = table(&PermGroup::symmetric(3));
        let csv = t.to_csv();
        assert!(csv.lines().nth(4).unwrap().starts_with("2,2,2.000000,0.000000,-1.000000"));
        let js = serde_json::to_value(t.export()).unwrap();
        assert_eq!(js["characters"][1][1]["coeffs"][0], -1);
        assert_eq!(js["characters"][1][1]["order"], 6);
    }
}
