use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::perm::Perm;

/// One level of a stabilizer chain: the orbit of `base` under `gens` with a transversal.
#[derive(Clone)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    // transversal[b] maps `base` to `b`
    transversal: Vec<Option<Perm>>,
    processed: HashSet<(usize, usize)>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Perm::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            processed: HashSet::new(),
        }
    }

    fn close_orbit(&mut self) {
        let mut queue: VecDeque<usize> = self.orbit.iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            let ub = self.transversal[b].clone().expect("orbit point has transversal");
            for s in &self.gens {
                let c = s.apply(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(s.compose(&ub));
                    self.orbit.push(c);
                    queue.push_back(c);
                }
            }
        }
    }
}

/// Stabilizer chain built by the deterministic Schreier–Sims algorithm.
///
/// Base points are chosen as the first point moved by the element that forces a new level,
/// so the chain depends only on the generator list.
#[derive(Clone)]
struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    fn new(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            chain.insert(0, g.clone());
        }
        chain
    }

    /// Sifts `g` starting at `level`; returns the residue and the level where sifting stopped.
    fn sift(&self, mut g: Perm, level: usize) -> (Perm, usize) {
        for (i, lvl) in self.levels.iter().enumerate().skip(level) {
            let c = g.apply(lvl.base);
            match &lvl.transversal[c] {
                Some(u) => g = u.inverse().compose(&g),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    fn insert(&mut self, level: usize, g: Perm) {
        let (residue, _) = self.sift(g.clone(), level);
        if residue.is_identity() {
            return;
        }
        if level == self.levels.len() {
            let base = g
                .first_moved_point()
                .or_else(|| residue.first_moved_point())
                .expect("non-identity element moves a point");
            self.levels.push(Level::new(base, self.degree));
        }
        self.levels[level].gens.push(g);
        self.levels[level].close_orbit();
        loop {
            let mut pending = Vec::new();
            {
                let lvl = &mut self.levels[level];
                for (bi, &b) in lvl.orbit.iter().enumerate() {
                    for si in 0..lvl.gens.len() {
                        if lvl.processed.insert((bi, si)) {
                            let s = &lvl.gens[si];
                            let ub = lvl.transversal[b].as_ref().unwrap();
                            let usb = lvl.transversal[s.apply(b)].as_ref().unwrap();
                            let schreier = usb.inverse().compose(s).compose(ub);
                            if !schreier.is_identity() {
                                pending.push(schreier);
                            }
                        }
                    }
                }
            }
            if pending.is_empty() {
                break;
            }
            for s in pending {
                self.insert(level + 1, s);
            }
        }
    }

    fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }
}

/// A finite permutation group given by generators, with a cached stabilizer chain.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    /// Builds `<gens>` on `degree` points. Identity generators are dropped.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g:?} has degree {}, expected {degree}",
                    g.degree()
                )));
            }
        }
        let generators: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let chain = StabChain::new(degree, &generators);
        Ok(PermGroup {
            degree,
            generators,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    /// The full symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(Perm::from_images_unchecked(t));
            let c: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            gens.push(Perm::from_images_unchecked(c));
        }
        PermGroup::new(n, gens).expect("symmetric group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit
    }

    /// Pointwise stabilizer of `points`, computed from the element list.
    pub fn pointwise_stabilizer(&self, points: &[usize], limits: &Limits) -> Result<PermGroup> {
        if points.is_empty() {
            return Ok(self.clone());
        }
        let mut gens: Vec<Perm> = Vec::new();
        let mut sub = PermGroup::trivial(self.degree);
        for g in self.elements(limits)? {
            if points.iter().all(|&p| g.apply(p) == p) && !sub.contains(&g) {
                gens.push(g);
                sub = PermGroup::new(self.degree, gens.clone())?;
            }
        }
        Ok(sub)
    }

    /// All elements, in a deterministic order (products of transversal elements).
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Perm>> {
        let order = self.order();
        if order > limits.element_limit {
            return Err(Error::limit("group order for element listing", order, limits.element_limit));
        }
        let mut elems = vec![Perm::identity(self.degree)];
        for lvl in self.chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * lvl.orbit.len());
            let mut orbit = lvl.orbit.clone();
            orbit.sort_unstable();
            for &b in &orbit {
                let u = lvl.transversal[b].as_ref().unwrap();
                for e in &elems {
                    next.push(u.compose(e));
                }
            }
            elems = next;
        }
        elems.sort();
        Ok(elems)
    }

    /// Conjugate group `x G x^-1`.
    pub fn conjugate_by(&self, x: &Perm) -> PermGroup {
        let gens = self.generators.iter().map(|g| g.conjugate_by(x)).collect();
        PermGroup::new(self.degree, gens).expect("same degree")
    }

    /// Relabels points by `map` (point `i` becomes `map[i]`).
    pub fn relabel(&self, map: &[usize]) -> Result<PermGroup> {
        let x = Perm::from_images(map.iter().map(|&i| i as u32).collect())?;
        Ok(self.conjugate_by(&x))
    }

    /// Same group as a set of permutations (order plus mutual containment).
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }
}

/// Element list with index lookup and multiplication by index, for groups small enough to list.
#[derive(Clone)]
pub struct ElementTable {
    pub elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl ElementTable {
    pub fn new(group: &PermGroup, limits: &Limits) -> Result<Self> {
        let elements = group.elements(limits)?;
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(ElementTable { elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closure(degree: usize, gens: &[Perm]) -> HashSet<Perm> {
        let mut set = HashSet::new();
        let id = Perm::identity(degree);
        set.insert(id.clone());
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = g.compose(&x);
                if set.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(PermGroup::trivial(4).order(), 1);
        let s4 = PermGroup::new(
            4,
            vec![
                Perm::from_cycles(4, &[&[1, 2]]).unwrap(),
                Perm::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s4.order(), 24);
        let v4 = PermGroup::new(
            4,
            vec![
                Perm::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap(),
                Perm::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(v4.order(), 4);
    }

    #[test]
    fn chain_agrees_with_closure() {
        let gens = vec![
            Perm::from_cycles(7, &[&[1, 2, 3, 4, 5, 6, 7]]).unwrap(),
            Perm::from_cycles(7, &[&[2, 3, 5], &[4, 7, 6]]).unwrap(),
        ];
        let g = PermGroup::new(7, gens.clone()).unwrap();
        let all = closure(7, &gens);
        assert_eq!(g.order(), all.len() as u128);
        assert_eq!(g.order(), 21);
        let elems = g.elements(&Limits::default()).unwrap();
        assert_eq!(elems.len(), all.len());
        assert!(elems.iter().all(|e| all.contains(e)));
        let s7 = PermGroup::symmetric(7);
        for p in s7.elements(&Limits::default()).unwrap().iter().step_by(37) {
            assert_eq!(g.contains(p), all.contains(p));
        }
    }

    #[test]
    fn orbit_stabilizer() {
        let s5 = PermGroup::symmetric(5);
        let l = Limits::default();
        for p in 0..5 {
            let stab = s5.pointwise_stabilizer(&[p], &l).unwrap();
            assert_eq!(s5.orbit(p).len() as u128 * stab.order(), s5.order());
        }
    }
}
