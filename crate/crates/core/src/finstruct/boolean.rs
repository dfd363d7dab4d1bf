use std::collections::{HashMap, HashSet};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

use super::{
    brute_automorphisms, brute_canonical, check_measure, push_len, Amalgam, Canonical, ClassId, ClosedSignature,
    FinStructure, FixedElements, FraisseClass, Payload,
};

/// Finite Boolean algebras; the homogeneous limit is the countable atomless
/// Boolean algebra. `acl` is the generated subalgebra.
pub struct BooleanAlgebraClass;

/// Largest closure materialized point by point (`2^atoms` elements).
const MAX_CLOSURE_ATOMS: usize = 16;

fn payload(s: &FinStructure) -> (usize, &[u64]) {
    match &s.data {
        Payload::Boolean { atoms, elements } => (*atoms, elements),
        _ => unreachable!("validated Boolean payload"),
    }
}

/// Atoms of the subalgebra generated by `elems`, as ambient masks ordered by
/// their least ambient atom.
fn cells(atoms: usize, elems: &[u64]) -> Vec<u64> {
    let mut by_sig: Vec<(Vec<bool>, u64)> = Vec::new();
    for a in 0..atoms {
        let sig: Vec<bool> = elems.iter().map(|e| e >> a & 1 == 1).collect();
        match by_sig.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, m)) => *m |= 1 << a,
            None => by_sig.push((sig, 1 << a)),
        }
    }
    by_sig.into_iter().map(|(_, m)| m).collect()
}

/// Bitmask over `cells` of an element that is a union of cells.
fn label(cells: &[u64], e: u64) -> Option<u64> {
    let mut out = 0u64;
    for (i, &c) in cells.iter().enumerate() {
        if c & e == c {
            out |= 1 << i;
        } else if c & e != 0 {
            return None;
        }
    }
    Some(out)
}

fn union_of(cells: &[u64], mask: u64) -> u64 {
    cells
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(0, |acc, (_, &c)| acc | c)
}

/// The algebra `2^m` with elements listed by bitmask.
pub(crate) fn standard_algebra(m: usize) -> FinStructure {
    FinStructure::boolean(m, (0..1u64 << m).collect())
}

fn full(atoms: usize) -> u64 {
    if atoms == 64 {
        u64::MAX
    } else {
        (1u64 << atoms) - 1
    }
}

impl BooleanAlgebraClass {
    fn is_closed(&self, s: &FinStructure) -> bool {
        let (atoms, elems) = payload(s);
        let c = cells(atoms, elems);
        c.len() < 64 && elems.len() as u64 == 1u64 << c.len() && elems.iter().all(|&e| label(&c, e).is_some())
    }
}

impl FraisseClass for BooleanAlgebraClass {
    fn id(&self) -> ClassId {
        ClassId::BooleanAlgebra
    }

    fn is_relational(&self) -> bool {
        false
    }

    fn fixed_elements(&self) -> FixedElements {
        FixedElements::BooleanConstants
    }

    fn is_fixed_point(&self, s: &FinStructure, i: usize) -> bool {
        let (atoms, elems) = payload(s);
        elems[i] == 0 || elems[i] == full(atoms)
    }

    fn size_measure(&self, s: &FinStructure) -> usize {
        let (atoms, elems) = payload(s);
        if elems.is_empty() {
            0
        } else {
            cells(atoms, elems).len()
        }
    }

    /// The set of non-empty Venn cells of the points, which does not depend on
    /// the ambient algebra.
    fn labeled_code(&self, s: &FinStructure) -> Vec<u8> {
        let (atoms, elems) = payload(s);
        let mut sigs: Vec<u64> = (0..atoms)
            .map(|a| elems.iter().enumerate().fold(0u64, |m, (i, e)| m | (e >> a & 1) << i))
            .collect();
        sigs.sort_unstable();
        sigs.dedup();
        let mut code = vec![0];
        push_len(&mut code, elems.len());
        push_len(&mut code, sigs.len());
        for s in sigs {
            code.extend_from_slice(&s.to_be_bytes());
        }
        code
    }

    fn closure_indices(&self, s: &FinStructure, subset: &[usize]) -> Vec<usize> {
        let (atoms, elems) = payload(s);
        let chosen: Vec<u64> = subset.iter().map(|&i| elems[i]).collect();
        let c = cells(atoms, &chosen);
        (0..elems.len()).filter(|&i| label(&c, elems[i]).is_some()).collect()
    }

    fn closure(&self, s: &FinStructure, subset: &[usize]) -> Result<FinStructure> {
        let (atoms, elems) = payload(s);
        let chosen: Vec<u64> = subset.iter().map(|&i| elems[i]).collect();
        let c = cells(atoms, &chosen);
        if c.len() > MAX_CLOSURE_ATOMS {
            return Err(Error::limit(
                "atoms of a generated subalgebra",
                c.len() as u128,
                MAX_CLOSURE_ATOMS as u128,
            ));
        }
        let names: HashMap<u64, &String> = elems.iter().copied().zip(&s.points).collect();
        let mut taken: HashSet<String> = s.points.iter().cloned().collect();
        let members: Vec<u64> = (0..1u64 << c.len()).map(|m| union_of(&c, m)).collect();
        let points = members
            .iter()
            .map(|e| match names.get(e) {
                Some(n) => (*n).clone(),
                None => {
                    let mut name: String = std::iter::once('b')
                        .chain((0..atoms).map(|a| if e >> a & 1 == 1 { '1' } else { '0' }))
                        .collect();
                    while !taken.insert(name.clone()) {
                        name.push('\'');
                    }
                    name
                }
            })
            .collect();
        Ok(FinStructure {
            class: ClassId::BooleanAlgebra,
            points,
            data: Payload::Boolean {
                atoms,
                elements: members,
            },
        })
    }

    fn is_acl_closed(&self, s: &FinStructure) -> Result<bool> {
        self.validate(s)?;
        Ok(self.is_closed(s))
    }

    fn canonical_form(&self, s: &FinStructure) -> Result<Canonical> {
        self.validate(s)?;
        if !self.is_closed(s) {
            return brute_canonical(self, s);
        }
        let (atoms, elems) = payload(s);
        let c = cells(atoms, elems);
        let relabel = elems.iter().map(|&e| label(&c, e).expect("closed") as usize).collect();
        let mut code = vec![1];
        push_len(&mut code, c.len());
        Ok(Canonical {
            code: hex::encode(code),
            relabel,
        })
    }

    fn canonical_structure(&self, s: &FinStructure) -> Result<FinStructure> {
        self.validate(s)?;
        if self.is_closed(s) {
            return Ok(standard_algebra(self.size_measure(s)));
        }
        let c = self.canonical_form(s)?;
        let mut out = s.permuted(&c.relabel);
        out.points = super::index_names(out.len());
        Ok(out)
    }

    fn automorphisms(&self, s: &FinStructure) -> Result<PermGroup> {
        self.validate(s)?;
        if !self.is_closed(s) {
            return brute_automorphisms(self, s);
        }
        let (atoms, elems) = payload(s);
        let c = cells(atoms, elems);
        let m = c.len();
        let labels: Vec<u64> = elems.iter().map(|&e| label(&c, e).expect("closed")).collect();
        let position: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        // permutations of the atoms, acting on elements
        let atom_perms: Vec<Vec<usize>> = match m {
            0 | 1 => Vec::new(),
            2 => vec![vec![1, 0]],
            _ => vec![
                (0..m).map(|i| if i < 2 { 1 - i } else { i }).collect(),
                (0..m).map(|i| (i + 1) % m).collect(),
            ],
        };
        let gens = atom_perms
            .iter()
            .map(|p| {
                let images = labels
                    .iter()
                    .map(|&l| {
                        let moved = (0..m).filter(|&i| l >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << p[i]);
                        position[&moved] as u32
                    })
                    .collect();
                Perm::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(s.len(), gens)
    }

    fn enumerate(&self, k: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        check_measure("Boolean algebra atoms", k, limits.max_atoms)?;
        let mut out = vec![FinStructure::boolean(1, Vec::new())];
        out.extend((1..=k).map(standard_algebra));
        Ok(out)
    }

    fn closed_structures(&self, max_points: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        let mut out = Vec::new();
        let mut m = 1;
        while 1usize << m <= max_points {
            check_measure("Boolean algebra atoms", m, limits.max_atoms)?;
            out.push(standard_algebra(m));
            m += 1;
        }
        Ok(out)
    }

    /// Tuples of `k` distinct elements are described by their set of non-empty
    /// Venn cells `N ⊆ {0,1}^k`.
    fn labeled_cores(&self, k: usize, x0_only: bool, _limits: &Limits) -> Result<Vec<FinStructure>> {
        if k > 4 {
            return Err(Error::limit("Boolean tuple arity (2^2^k cell sets)", k as u128, 4u128));
        }
        let universe = 1usize << k;
        let mut out = Vec::new();
        for n_mask in 1u64..1u64 << universe {
            let cells: Vec<usize> = (0..universe).filter(|c| n_mask >> c & 1 == 1).collect();
            let distinct = (0..k).all(|i| {
                (i + 1..k).all(|j| cells.iter().any(|&c| (c >> i & 1) != (c >> j & 1)))
            });
            if !distinct {
                continue;
            }
            if x0_only
                && !(0..k).all(|i| cells.iter().any(|&c| c >> i & 1 == 1) && cells.iter().any(|&c| c >> i & 1 == 0))
            {
                continue;
            }
            let elements = (0..k)
                .map(|i| {
                    cells
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c >> i & 1 == 1)
                        .fold(0u64, |m, (pos, _)| m | 1 << pos)
                })
                .collect();
            out.push(FinStructure::boolean(cells.len(), elements));
        }
        Ok(out)
    }

    fn closure_signature(&self, core: &FinStructure) -> Result<ClosedSignature> {
        let (atoms, elems) = payload(core);
        let m = cells(atoms, elems).len();
        let mut code = vec![1];
        push_len(&mut code, m);
        Ok(ClosedSignature {
            code: hex::encode(code),
            points: if m < 64 { 1usize << m } else { usize::MAX },
        })
    }

    fn amalgams(&self, b: &FinStructure, c: &FinStructure) -> Result<Vec<Amalgam>> {
        let (ba, be) = payload(b);
        let (ca, ce) = payload(c);
        let bc = cells(ba, be);
        let cc = cells(ca, ce);
        let pairs: Vec<(usize, usize)> = (0..bc.len()).flat_map(|i| (0..cc.len()).map(move |j| (i, j))).collect();
        if pairs.len() > 16 {
            return Err(Error::limit("cell pairs in a Boolean amalgam", pairs.len() as u128, 16u128));
        }
        let b_labels: Vec<u64> = be.iter().map(|&e| label(&bc, e).expect("cell union")).collect();
        let c_labels: Vec<u64> = ce.iter().map(|&e| label(&cc, e).expect("cell union")).collect();
        let mut out = Vec::new();
        for r_mask in 1u64..1u64 << pairs.len() {
            let r: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(p, _)| r_mask >> p & 1 == 1)
                .map(|(_, &x)| x)
                .collect();
            let covers = (0..bc.len()).all(|i| r.iter().any(|&(x, _)| x == i))
                && (0..cc.len()).all(|j| r.iter().any(|&(_, y)| y == j));
            if !covers {
                continue;
            }
            let image = |l: u64, first: bool| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &(x, y))| l >> (if first { x } else { y }) & 1 == 1)
                    .fold(0u64, |m, (pos, _)| m | 1 << pos)
            };
            let mut elements: Vec<u64> = Vec::new();
            let mut place = |e: u64| match elements.iter().position(|&w| w == e) {
                Some(p) => p,
                None => {
                    elements.push(e);
                    elements.len() - 1
                }
            };
            let left: Vec<usize> = b_labels.iter().map(|&l| place(image(l, true))).collect();
            let right: Vec<usize> = c_labels.iter().map(|&l| place(image(l, false))).collect();
            out.push(Amalgam {
                structure: FinStructure::boolean(r.len(), elements),
                left,
                right,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_sets_count_all_tuple_types() {
        // Σ_k S(n,k) · #cores(k) = 2^(2^n) - 1
        let l = Limits::default();
        let ba = BooleanAlgebraClass;
        let cores: Vec<usize> = (0..4).map(|k| ba.labeled_cores(k, false, &l).unwrap().len()).collect();
        assert_eq!(cores[0], 1);
        assert_eq!(cores[1], 3);
        assert_eq!(cores[1] + cores[2], 15);
    }

    #[test]
    fn generated_subalgebra() {
        let ba = BooleanAlgebraClass;
        let s = FinStructure::boolean(3, vec![0b001]);
        let cl = ba.closure(&s, &[0]).unwrap();
        let (_, elems) = payload(&cl);
        let mut e = elems.to_vec();
        e.sort();
        assert_eq!(e, vec![0, 0b001, 0b110, 0b111]);
    }
}
