use crate::config::Limits;
use crate::error::Result;
use crate::permgrp::PermGroup;

use super::set::matched_positions;
use super::{check_measure, combinat, push_len, Amalgam, Canonical, ClassId, FinStructure, FraisseClass, Payload};

/// Finite linear orders; the homogeneous limit is `(Q, <)`.
pub struct LinearOrderClass;

fn ranks(s: &FinStructure) -> &[usize] {
    match &s.data {
        Payload::Order { rank } => rank,
        _ => unreachable!("validated order payload"),
    }
}

/// Points listed from smallest to largest.
fn sorted_points(rank: &[usize]) -> Vec<usize> {
    let mut by_rank = vec![0; rank.len()];
    for (i, &r) in rank.iter().enumerate() {
        by_rank[r] = i;
    }
    by_rank
}

impl FraisseClass for LinearOrderClass {
    fn id(&self) -> ClassId {
        ClassId::LinearOrder
    }

    fn is_relational(&self) -> bool {
        true
    }

    fn labeled_code(&self, s: &FinStructure) -> Vec<u8> {
        let mut code = Vec::new();
        push_len(&mut code, s.len());
        code.extend(ranks(s).iter().map(|&r| r as u8));
        code
    }

    fn canonical_form(&self, s: &FinStructure) -> Result<Canonical> {
        self.validate(s)?;
        let relabel = ranks(s).to_vec();
        Ok(Canonical {
            code: hex::encode(self.labeled_code(&FinStructure::chain(s.len()))),
            relabel,
        })
    }

    fn automorphisms(&self, s: &FinStructure) -> Result<PermGroup> {
        self.validate(s)?;
        Ok(PermGroup::trivial(s.len()))
    }

    fn enumerate(&self, k: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        check_measure("order size", k, limits.max_points)?;
        Ok((0..=k).map(FinStructure::chain).collect())
    }

    fn closed_structures(&self, max_points: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        self.enumerate(max_points, limits)
    }

    fn labeled_cores(&self, k: usize, _x0_only: bool, _limits: &Limits) -> Result<Vec<FinStructure>> {
        Ok(combinat::permutations(k)
            .into_iter()
            .map(|rank| FinStructure {
                data: Payload::Order { rank },
                ..FinStructure::chain(k)
            })
            .collect())
    }

    fn amalgams(&self, b: &FinStructure, c: &FinStructure) -> Result<Vec<Amalgam>> {
        let lb = sorted_points(ranks(b));
        let lc = sorted_points(ranks(c));
        let mut out = Vec::new();
        for m in combinat::partial_matchings(b.len(), c.len()) {
            let (n, right) = matched_positions(b.len(), c.len(), &m);
            let partner_of_b = |i: usize| m.iter().find(|&&(x, _)| x == i).map(|&(_, y)| y);
            // interleave the two chains; a matched pair must be placed together
            let mut merges: Vec<Vec<usize>> = Vec::new();
            let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(0, 0, Vec::new())];
            while let Some((i, j, seq)) = stack.pop() {
                if i == lb.len() && j == lc.len() {
                    merges.push(seq);
                    continue;
                }
                let next_b = lb.get(i).copied();
                let next_c = lc.get(j).copied();
                if let Some(x) = next_b {
                    match partner_of_b(x) {
                        None => {
                            let mut s = seq.clone();
                            s.push(x);
                            stack.push((i + 1, j, s));
                        }
                        Some(y) if Some(y) == next_c => {
                            let mut s = seq.clone();
                            s.push(x);
                            stack.push((i + 1, j + 1, s));
                        }
                        Some(_) => {}
                    }
                }
                if let Some(y) = next_c {
                    if right[y] >= b.len() {
                        let mut s = seq.clone();
                        s.push(right[y]);
                        stack.push((i, j + 1, s));
                    }
                }
            }
            for merge in merges {
                let mut rank = vec![0; n];
                for (r, &p) in merge.iter().enumerate() {
                    rank[p] = r;
                }
                out.push(Amalgam {
                    structure: FinStructure {
                        data: Payload::Order { rank },
                        ..FinStructure::chain(n)
                    },
                    left: (0..b.len()).collect(),
                    right: right.clone(),
                });
            }
        }
        Ok(out)
    }
}
