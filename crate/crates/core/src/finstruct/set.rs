use crate::config::Limits;
use crate::error::Result;
use crate::permgrp::PermGroup;

use super::{check_measure, combinat, push_len, Amalgam, Canonical, ClassId, FinStructure, FraisseClass};

/// Finite sets with no structure; the homogeneous limit is a countable set.
pub struct PureSetClass;

/// Placement of two point sets along a partial matching: the first structure
/// keeps positions `0..a`, unmatched points of the second follow.
pub(crate) fn matched_positions(a: usize, b: usize, matching: &[(usize, usize)]) -> (usize, Vec<usize>) {
    let mut right = vec![usize::MAX; b];
    for &(i, j) in matching {
        right[j] = i;
    }
    let mut next = a;
    for r in right.iter_mut() {
        if *r == usize::MAX {
            *r = next;
            next += 1;
        }
    }
    (next, right)
}

impl FraisseClass for PureSetClass {
    fn id(&self) -> ClassId {
        ClassId::PureSet
    }

    fn is_relational(&self) -> bool {
        true
    }

    fn labeled_code(&self, s: &FinStructure) -> Vec<u8> {
        let mut code = Vec::new();
        push_len(&mut code, s.len());
        code
    }

    fn canonical_form(&self, s: &FinStructure) -> Result<Canonical> {
        self.validate(s)?;
        Ok(Canonical {
            code: hex::encode(self.labeled_code(s)),
            relabel: (0..s.len()).collect(),
        })
    }

    fn automorphisms(&self, s: &FinStructure) -> Result<PermGroup> {
        self.validate(s)?;
        Ok(PermGroup::symmetric(s.len()))
    }

    fn enumerate(&self, k: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        check_measure("set size", k, limits.max_points)?;
        Ok((0..=k).map(FinStructure::pure_set).collect())
    }

    fn closed_structures(&self, max_points: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        self.enumerate(max_points, limits)
    }

    fn labeled_cores(&self, k: usize, _x0_only: bool, _limits: &Limits) -> Result<Vec<FinStructure>> {
        Ok(vec![FinStructure::pure_set(k)])
    }

    fn amalgams(&self, b: &FinStructure, c: &FinStructure) -> Result<Vec<Amalgam>> {
        Ok(combinat::partial_matchings(b.len(), c.len())
            .into_iter()
            .map(|m| {
                let (n, right) = matched_positions(b.len(), c.len(), &m);
                Amalgam {
                    structure: FinStructure::pure_set(n),
                    left: (0..b.len()).collect(),
                    right,
                }
            })
            .collect())
    }
}
