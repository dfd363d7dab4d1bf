use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::dist::{displacement, Distribution};
use super::truncation::{display, PartialMap, Point, Truncation};
use crate::error::{Error, Result};

/// Levels `S_1, …, S_N` of finite partial automorphisms. Level `2n` extends the
/// domain to `a_n`, level `2n+1` the range; each new point is chosen away from
/// everything seen so far, and a node that needs extending gets `2^{n+1}` children.
#[derive(Debug, Clone)]
pub struct PartialAutTree {
    truncation: Truncation,
    levels: Vec<Vec<PartialMap>>,
    parents: Vec<Vec<usize>>,
    grown: HashMap<(usize, PartialMap), Vec<PartialMap>>,
}

/// The point `a_n` and the branching `2^{n+1}` handled at level `k ≥ 2`.
fn level_step(k: usize) -> (usize, usize) {
    let n = k / 2;
    (n, 1 << (n + 1))
}

impl PartialAutTree {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &[PartialMap] {
        &self.levels[k - 1]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    #[cfg(test)]
    pub(crate) fn corrupt_for_test(&mut self, k: usize, node: PartialMap) {
        self.levels[k - 1].push(node);
        self.parents[k - 1].push(0);
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    /// `A_n`.
    pub fn enumeration(&mut self, n: usize) -> Vec<Point> {
        self.truncation.enumerate(n).to_vec()
    }

    /// Children at level `k` of a node at level `k - 1`. They depend on the node
    /// alone, so branches can be grown past the stored levels.
    fn children(&mut self, k: usize, phi: &PartialMap) -> Result<Vec<PartialMap>> {
        let (n, branching) = level_step(k);
        let a = self.truncation.enumerate(n)[n - 1];
        let forward = k.is_multiple_of(2);
        let map = if forward { phi.clone() } else { phi.inverse() };
        if map.get(&a).is_some() {
            return Ok(vec![phi.clone()]);
        }
        let mut avoid: BTreeSet<Point> = map.dom();
        avoid.insert(a);
        avoid.extend(map.ran());
        let images = self.truncation.extend(&map, &a, &avoid, branching)?;
        Ok(images
            .into_iter()
            .map(|c| if forward { phi.with(a, c) } else { phi.with(c, a) })
            .collect())
    }

    /// Children of a node below the stored levels, memoized.
    fn grown_children(&mut self, k: usize, phi: &PartialMap) -> Result<Vec<PartialMap>> {
        if let Some(kids) = self.grown.get(&(k, phi.clone())) {
            return Ok(kids.clone());
        }
        let kids = self.children(k, phi)?;
        self.grown.insert((k, phi.clone()), kids.clone());
        Ok(kids)
    }
}

pub fn build_tree(class: crate::finstruct::ClassId, depth: usize, seed: u64, search: usize) -> Result<PartialAutTree> {
    if depth == 0 {
        return Err(Error::MalformedStructure("tree depth must be at least 1".into()));
    }
    let mut tree = PartialAutTree {
        truncation: Truncation::new(class, seed, search)?,
        levels: vec![vec![PartialMap::empty()]],
        parents: vec![vec![]],
        grown: HashMap::new(),
    };
    for k in 2..=depth {
        let mut level = Vec::new();
        let mut parents = Vec::new();
        for (i, phi) in tree.levels[k - 2].clone().iter().enumerate() {
            for child in tree.children(k, phi)? {
                level.push(child);
                parents.push(i);
            }
        }
        tree.levels.push(level);
        tree.parents.push(parents);
    }
    Ok(tree)
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub depth: usize,
    pub level_sizes: Vec<usize>,
    /// Every node preserves the relations of the structure.
    pub partial_isomorphisms: bool,
    /// Conditions (1) to (6), in order.
    pub conditions: [bool; 6],
    pub failures: Vec<String>,
}

impl TreeReport {
    pub fn conditions_ok(&self) -> bool {
        self.partial_isomorphisms && self.conditions.iter().all(|&c| c)
    }
}

fn pairwise(children: &[&PartialMap], part: impl Fn(&PartialMap) -> BTreeSet<Point>, base: &BTreeSet<Point>) -> bool {
    children.iter().enumerate().all(|(i, x)| {
        children[i + 1..]
            .iter()
            .all(|y| part(x).intersection(&part(y)).cloned().collect::<BTreeSet<_>>() == *base)
    })
}

/// Exhaustive check of the six tree conditions, recomputing parent links from
/// containment rather than trusting the construction.
pub fn verify_tree(tree: &mut PartialAutTree) -> TreeReport {
    let depth = tree.depth();
    let a = tree.enumeration(depth / 2 + 1);
    let mut failures = Vec::new();
    let mut cond = [true; 6];
    let mut iso = true;
    let mut fail = |cond: &mut [bool; 6], i: usize, msg: String| {
        cond[i] = false;
        if failures.len() < 20 {
            failures.push(msg);
        }
    };
    if tree.level(1) != [PartialMap::empty()] {
        fail(&mut cond, 0, "S_1 is not {∅}".into());
    }
    for k in 1..=depth {
        let n = k / 2;
        let a_n: BTreeSet<Point> = a[..n].iter().cloned().collect();
        for (i, phi) in tree.level(k).iter().enumerate() {
            if !tree.truncation().is_partial_iso(phi) {
                iso = false;
            }
            if k >= 2 {
                let covered = if k % 2 == 0 { phi.dom() } else { phi.ran() };
                if !a_n.is_subset(&covered) {
                    fail(&mut cond, 2, format!("level {k} node {i} misses A_{n}"));
                }
                let inter: BTreeSet<Point> = phi.dom().intersection(&phi.ran()).cloned().collect();
                if !inter.is_subset(&a_n) {
                    fail(&mut cond, 3, format!("level {k} node {i}: dom ∩ ran ⊄ A_{n}"));
                }
            }
        }
    }
    for k in 1..depth {
        let index: HashMap<&PartialMap, usize> = tree.level(k).iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut children: Vec<Vec<&PartialMap>> = vec![Vec::new(); tree.level(k).len()];
        for (j, psi) in tree.level(k + 1).iter().enumerate() {
            let found: Vec<usize> = psi.submaps().filter_map(|s| index.get(&s).copied()).collect();
            if found.len() != 1 {
                fail(&mut cond, 1, format!("level {} node {j} has {} restrictions", k + 1, found.len()));
            }
            if let Some(&p) = found.first() {
                children[p].push(psi);
            }
        }
        let (_, branching) = level_step(k + 1);
        let forward = (k + 1) % 2 == 0;
        for (i, phi) in tree.level(k).iter().enumerate() {
            let kids = &children[i];
            let ok = kids.contains(&phi)
                || (kids.len() >= branching
                    && if forward {
                        pairwise(kids, PartialMap::ran, &phi.ran())
                    } else {
                        pairwise(kids, PartialMap::dom, &phi.dom())
                    });
            if !ok {
                let c = if forward { 4 } else { 5 };
                fail(&mut cond, c, format!("level {k} node {i} lacks {branching} separated extensions"));
            }
        }
    }
    TreeReport {
        depth,
        level_sizes: tree.level_sizes(),
        partial_isomorphisms: iso,
        conditions: cond,
        failures,
    }
}

/// The inequality the greedy rule secures for `a_n`.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub n: usize,
    /// `"forward"` bounds `f(g·a_n)`, `"backward"` bounds `f(g⁻¹·a_n)`.
    pub direction: &'static str,
    #[serde(serialize_with = "display")]
    pub value: Point,
    #[serde(serialize_with = "display")]
    pub bound: Point,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GreedyWitness {
    /// The chosen branch `φ_1 ⊆ φ_2 ⊆ …`.
    pub chain: Vec<PartialMap>,
    pub certificates: Vec<Certificate>,
    /// Whether `min(f(a_n), f(g⁻¹a_n)) ≤ 2^{-(n+1)}` for every `n`.
    pub min_form_holds: bool,
    /// `‖g·f − f‖₁`, exact.
    #[serde(serialize_with = "display")]
    pub displacement: Point,
    pub at_least_half: bool,
    /// Against `1 − Σ_{n ≤ m} 2^{-(n+1)}`, where `A_m` holds the support.
    #[serde(serialize_with = "display")]
    pub partial_sum_bound: Point,
    pub meets_partial_sum: bool,
}

impl GreedyWitness {
    pub fn g(&self) -> &PartialMap {
        self.chain.last().expect("chain starts with the empty map")
    }
}

/// Walks the tree by the greedy rule. The support must lie in `A_N`, `N` the
/// tree depth; levels past the stored ones are grown along the chosen branch.
pub fn greedy_witness(tree: &mut PartialAutTree, f: &Distribution<Point, Point>) -> Result<GreedyWitness> {
    let depth = tree.depth();
    let a = tree.enumeration(depth);
    let m = f
        .support()
        .map(|p| {
            a.iter()
                .position(|x| x == p)
                .map(|i| i + 1)
                .ok_or_else(|| Error::SupportOutsideEnumeration(format!("{p} is not among a_1..a_{depth}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let mut chain = vec![PartialMap::empty()];
    let mut node = Some(0usize);
    let mut certificates = Vec::new();
    for k in 2..=2 * m + 1 {
        let phi = chain.last().unwrap().clone();
        let kids: Vec<(Option<usize>, PartialMap)> = match node.filter(|_| k <= depth) {
            Some(i) => tree.parents[k - 1]
                .iter()
                .enumerate()
                .filter(|(_, &p)| p == i)
                .map(|(j, _)| (Some(j), tree.levels[k - 1][j].clone()))
                .collect(),
            None => tree.grown_children(k, &phi)?.into_iter().map(|c| (None, c)).collect(),
        };
        let (n, _) = level_step(k);
        let a_n = a[n - 1];
        let forward = k % 2 == 0;
        let score = |psi: &PartialMap| {
            let image = if forward { psi.get(&a_n) } else { psi.preimage(&a_n) };
            image.map_or_else(Point::default, |x| f.weight(&x))
        };
        let (j, next) = kids
            .iter()
            .min_by(|x, y| score(&x.1).cmp(&score(&y.1)))
            .cloned()
            .ok_or_else(|| Error::InvariantViolation(format!("level {k} node without children")))?;
        let extended = kids.len() > 1;
        if extended {
            let bound = Point::new(1, 1 << (n + 1));
            let value = score(&next);
            certificates.push(Certificate {
                n,
                direction: if forward { "forward" } else { "backward" },
                holds: value <= bound,
                value,
                bound,
            });
        }
        node = j;
        chain.push(next);
    }
    let g = chain.last().unwrap().clone();
    let min_form_holds = (1..=m).all(|n| {
        let a_n = a[n - 1];
        let back = g.preimage(&a_n).map_or_else(Point::default, |x| f.weight(&x));
        f.weight(&a_n).min(back) <= Point::new(1, 1 << (n + 1))
    });
    let disp = displacement(|x: &Point| g.get(x), f)?;
    let partial_sum_bound =
        Point::from(1) - (1..=m).map(|n| Point::new(1, 1 << (n + 1))).sum::<Point>();
    Ok(GreedyWitness {
        chain,
        certificates,
        min_form_holds,
        at_least_half: disp >= Point::new(1, 2),
        meets_partial_sum: disp >= partial_sum_bound,
        displacement: disp,
        partial_sum_bound,
    })
}
