use std::collections::{BTreeSet, HashSet};

use crate::config::Limits;
use crate::error::{Error, Result};

use super::group::{ElementTable, PermGroup};

type Members = Vec<u64>;

struct Cayley {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl Cayley {
    fn new(table: &ElementTable) -> Self {
        let n = table.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = table.mul(a, b) as u32;
            }
        }
        let inv = (0..n).map(|a| table.inv(a) as u32).collect();
        Cayley { n, mul, inv }
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    fn words(&self) -> usize {
        self.n.div_ceil(64)
    }

    fn closure(&self, identity: usize, gens: &[usize]) -> Members {
        let mut bits = vec![0u64; self.words()];
        let mut list = vec![identity];
        bits[identity / 64] |= 1 << (identity % 64);
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(g, x);
                if bits[y / 64] & (1 << (y % 64)) == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    list.push(y);
                }
            }
            i += 1;
        }
        bits
    }

    fn conjugate(&self, members: &Members, x: usize) -> Members {
        let xi = self.inv[x] as usize;
        let mut out = vec![0u64; self.words()];
        for h in iter_bits(members) {
            let c = self.mul(self.mul(x, h), xi);
            out[c / 64] |= 1 << (c % 64);
        }
        out
    }
}

fn iter_bits(bits: &Members) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| w * 64 + b)
    })
}

fn subset(a: &Members, b: &Members) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn count(a: &Members) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// One representative of every conjugacy class of subgroups of `group`.
///
/// Every subgroup is reached by repeatedly joining a cyclic subgroup onto a class
/// representative, so the search only keeps one subgroup per conjugacy class.
/// Output is sorted by order, then by the sorted element list of the representative.
pub fn subgroups_up_to_conjugacy(group: &PermGroup, limits: &Limits) -> Result<Vec<PermGroup>> {
    let order = group.order();
    if order > limits.subgroup_limit {
        return Err(Error::limit("group order for subgroup enumeration", order, limits.subgroup_limit));
    }
    let table = ElementTable::new(group, limits)?;
    let cayley = Cayley::new(&table);
    let identity = table.index_of(&group.identity()).expect("identity");

    let mut cyclic: Vec<(usize, Members)> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for g in 0..table.len() {
        let m = cayley.closure(identity, &[g]);
        if seen_cyclic.insert(m.clone()) {
            cyclic.push((g, m));
        }
    }

    let trivial = cayley.closure(identity, &[]);
    let mut seen: HashSet<Members> = HashSet::new();
    seen.insert(trivial.clone());
    let mut reps: Vec<(Vec<usize>, Members)> = vec![(Vec::new(), trivial)];
    let mut next = 0;
    while next < reps.len() {
        let (gens, members) = reps[next].clone();
        next += 1;
        for (z, zm) in &cyclic {
            if subset(zm, &members) {
                continue;
            }
            let mut new_gens = gens.clone();
            new_gens.push(*z);
            let joined = cayley.closure(identity, &new_gens);
            if seen.contains(&joined) {
                continue;
            }
            for x in 0..table.len() {
                seen.insert(cayley.conjugate(&joined, x));
            }
            reps.push((new_gens, joined));
        }
    }

    let mut out: Vec<(u32, BTreeSet<usize>, PermGroup)> = reps
        .into_iter()
        .map(|(gens, members)| {
            let perms = gens.iter().map(|&g| table.elements[g].clone()).collect();
            let sub = PermGroup::new(group.degree(), perms).expect("same degree");
            (count(&members), iter_bits(&members).collect(), sub)
        })
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, g)| g).collect())
}

/// Canonical key of the conjugacy class of `sub` inside `group`: the least sorted
/// element list over all conjugates.
pub fn subgroup_class_key(group: &PermGroup, sub: &PermGroup, limits: &Limits) -> Result<Vec<Vec<u32>>> {
    let sub_elems = sub.elements(limits)?;
    if sub_elems.len() == 1 {
        return Ok(vec![sub_elems[0].images().to_vec()]);
    }
    let mut best: Option<Vec<Vec<u32>>> = None;
    for x in group.elements(limits)? {
        let mut conj: Vec<Vec<u32>> = sub_elems
            .iter()
            .map(|h| h.conjugate_by(&x).images().to_vec())
            .collect();
        conj.sort();
        if best.as_ref().is_none_or(|b| conj < *b) {
            best = Some(conj);
        }
    }
    Ok(best.expect("group has elements"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgrp::Perm;

    fn orders(g: &PermGroup) -> Vec<u128> {
        subgroups_up_to_conjugacy(g, &Limits::default())
            .unwrap()
            .iter()
            .map(|s| s.order())
            .collect()
    }

    #[test]
    fn small_lattices() {
        assert_eq!(orders(&PermGroup::symmetric(2)), vec![1, 2]);
        assert_eq!(orders(&PermGroup::symmetric(3)), vec![1, 2, 3, 6]);
        let v4 = PermGroup::new(
            4,
            vec![
                Perm::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap(),
                Perm::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(orders(&v4), vec![1, 2, 2, 2, 4]);
        // S4 has 11 conjugacy classes of subgroups
        assert_eq!(orders(&PermGroup::symmetric(4)).len(), 11);
    }

    #[test]
    fn respects_limit() {
        let l = Limits {
            subgroup_limit: 100,
            ..Limits::default()
        };
        assert!(subgroups_up_to_conjugacy(&PermGroup::symmetric(5), &l).is_err());
    }
}
