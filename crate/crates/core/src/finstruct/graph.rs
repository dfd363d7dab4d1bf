use std::collections::HashSet;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

use super::set::matched_positions;
use super::{
    check_measure, combinat, group_from_elements, push_len, Amalgam, Canonical, ClassId, FinStructure,
    FraisseClass, Payload,
};

/// Finite simple graphs; the homogeneous limit is the random graph.
pub struct GraphClass;

fn adjacency(s: &FinStructure) -> &[u64] {
    match &s.data {
        Payload::Graph { adjacency } => adjacency,
        _ => unreachable!("validated graph payload"),
    }
}

/// Upper-triangle adjacency bits under the labeling `order` (position -> vertex).
fn code_under(adj: &[u64], order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut code = Vec::new();
    push_len(&mut code, n);
    let mut byte = 0u8;
    let mut bits = 0;
    for a in 0..n {
        for b in a + 1..n {
            byte = byte << 1 | (adj[order[a]] >> order[b] & 1) as u8;
            bits += 1;
            if bits == 8 {
                code.push(byte);
                byte = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        code.push(byte << (8 - bits));
    }
    code
}

/// Refines an ordered partition until every cell is equitable: vertices of one
/// cell have the same number of neighbours in every cell.
fn refine(adj: &[u64], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u64> = cells.iter().map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| (masks.iter().map(|m| (adj[v] & m).count_ones()).collect(), v))
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        // cells only ever split, so an unchanged count means the partition is stable
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// Leaves of the individualization-refinement tree: every discrete ordered
/// partition reachable from the unit partition.
fn leaves(adj: &[u64], n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![refine(adj, vec![(0..n).collect()])];
    while let Some(cells) = stack.pop() {
        match cells.iter().position(|c| c.len() > 1) {
            None => out.push(cells.into_iter().flatten().collect()),
            Some(t) => {
                for &v in cells[t].iter().rev() {
                    let mut split = cells[..t].to_vec();
                    split.push(vec![v]);
                    split.push(cells[t].iter().copied().filter(|&w| w != v).collect());
                    split.extend_from_slice(&cells[t + 1..]);
                    stack.push(refine(adj, split));
                }
            }
        }
    }
    out
}

/// Largest graph handled by the labeling search.
const GRAPH_LIMIT: usize = 9;

fn search(s: &FinStructure) -> Result<(Vec<u8>, Vec<usize>, Vec<Vec<usize>>)> {
    let n = s.len();
    if n > GRAPH_LIMIT {
        return Err(Error::limit("graph vertices for canonical labeling", n as u128, GRAPH_LIMIT as u128));
    }
    let adj = adjacency(s);
    let all = leaves(adj, n);
    let coded: Vec<(Vec<u8>, Vec<usize>)> = all.into_iter().map(|o| (code_under(adj, &o), o)).collect();
    let best = coded.iter().map(|(c, _)| c).max().expect("at least one leaf").clone();
    let optimal: Vec<Vec<usize>> = coded.into_iter().filter(|(c, _)| *c == best).map(|(_, o)| o).collect();
    let first = optimal[0].clone();
    Ok((best, first, optimal))
}

impl FraisseClass for GraphClass {
    fn id(&self) -> ClassId {
        ClassId::Graph
    }

    fn is_relational(&self) -> bool {
        true
    }

    fn labeled_code(&self, s: &FinStructure) -> Vec<u8> {
        let order: Vec<usize> = (0..s.len()).collect();
        code_under(adjacency(s), &order)
    }

    fn canonical_form(&self, s: &FinStructure) -> Result<Canonical> {
        self.validate(s)?;
        let (code, order, _) = search(s)?;
        let mut relabel = vec![0; s.len()];
        for (pos, &v) in order.iter().enumerate() {
            relabel[v] = pos;
        }
        Ok(Canonical {
            code: hex::encode(code),
            relabel,
        })
    }

    fn automorphisms(&self, s: &FinStructure) -> Result<PermGroup> {
        self.validate(s)?;
        let (_, first, optimal) = search(s)?;
        // two optimal labelings differ by an automorphism: first[pos] -> other[pos]
        let n = s.len();
        let elems = optimal
            .iter()
            .map(|other| {
                let mut img = vec![0u32; n];
                for pos in 0..n {
                    img[first[pos]] = other[pos] as u32;
                }
                Perm::from_images(img)
            })
            .collect::<Result<Vec<_>>>()?;
        group_from_elements(n, elems)
    }

    fn enumerate(&self, k: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        check_measure("graph size", k, limits.max_points)?;
        let mut out = Vec::new();
        for n in 0..=k {
            let mut seen = HashSet::new();
            let mut level = Vec::new();
            for g in self.labeled_cores(n, false, limits)? {
                let c = self.canonical_form(&g)?;
                if seen.insert(c.code.clone()) {
                    let mut canon = g.permuted(&c.relabel);
                    canon.points = super::index_names(n);
                    level.push((c.code, canon));
                }
            }
            level.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(level.into_iter().map(|(_, g)| g));
        }
        Ok(out)
    }

    fn closed_structures(&self, max_points: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        self.enumerate(max_points, limits)
    }

    fn labeled_cores(&self, k: usize, _x0_only: bool, _limits: &Limits) -> Result<Vec<FinStructure>> {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
        if pairs.len() > 24 {
            return Err(Error::limit("vertex pairs for labeled graphs", pairs.len() as u128, 24u128));
        }
        Ok((0u64..1 << pairs.len())
            .map(|mask| {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                FinStructure::graph(k, &edges)
            })
            .collect())
    }

    fn amalgams(&self, b: &FinStructure, c: &FinStructure) -> Result<Vec<Amalgam>> {
        let mut out = Vec::new();
        for m in combinat::partial_matchings(b.len(), c.len()) {
            let consistent = m
                .iter()
                .all(|&(x1, y1)| m.iter().all(|&(x2, y2)| b.has_edge(x1, x2) == c.has_edge(y1, y2)));
            if !consistent {
                continue;
            }
            let (n, right) = matched_positions(b.len(), c.len(), &m);
            let mut fixed = Vec::new();
            for x1 in 0..b.len() {
                for x2 in x1 + 1..b.len() {
                    if b.has_edge(x1, x2) {
                        fixed.push((x1, x2));
                    }
                }
            }
            for y1 in 0..c.len() {
                for y2 in y1 + 1..c.len() {
                    if c.has_edge(y1, y2) {
                        fixed.push((right[y1], right[y2]));
                    }
                }
            }
            // pairs with one end only in b and the other only in c are free
            let b_only: Vec<usize> = (0..b.len()).filter(|x| m.iter().all(|&(i, _)| i != *x)).collect();
            let c_only: Vec<usize> = (b.len()..n).collect();
            let free: Vec<(usize, usize)> =
                b_only.iter().flat_map(|&x| c_only.iter().map(move |&y| (x, y))).collect();
            if free.len() > 20 {
                return Err(Error::limit("free vertex pairs in a graph amalgam", free.len() as u128, 20u128));
            }
            for mask in 0u64..1 << free.len() {
                let mut edges = fixed.clone();
                edges.extend(free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e));
                out.push(Amalgam {
                    structure: FinStructure::graph(n, &edges),
                    left: (0..b.len()).collect(),
                    right: right.clone(),
                });
            }
        }
        Ok(out)
    }
}
