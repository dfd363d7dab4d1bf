//! Finite structures, canonical forms and the built-in homogeneous classes.
//!
//! The infinite homogeneous structure of each class is never built; it is probed
//! through finite substructures, their algebraic closures, automorphism groups and
//! orbit types of tuples.

mod boolean;
pub mod combinat;
mod graph;
mod order;
mod set;
mod structure;
#[cfg(test)]
mod tests;
mod vector;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

pub use boolean::BooleanAlgebraClass;
pub use graph::GraphClass;
pub use order::LinearOrderClass;
pub use set::PureSetClass;
pub use structure::{ClassId, FinStructure, Payload};
pub use vector::VectorSpaceClass;

pub(crate) use structure::index_names;

/// Which points of the homogeneous structure are fixed by its whole automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedElements {
    None,
    ZeroVector,
    BooleanConstants,
}

impl FixedElements {
    pub fn count(&self) -> usize {
        match self {
            FixedElements::None => 0,
            FixedElements::ZeroVector => 1,
            FixedElements::BooleanConstants => 2,
        }
    }
}

/// Canonical code of an isomorphism type, with a relabeling that realizes it:
/// point `i` goes to position `relabel[i]` of the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub code: String,
    pub relabel: Vec<usize>,
}

/// Isomorphism type of an algebraically closed structure, known without building it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSignature {
    pub code: String,
    pub points: usize,
}

/// Two structures placed jointly: `left[i]` / `right[j]` are the positions of the
/// points of the first / second structure inside `structure`.
#[derive(Debug, Clone)]
pub struct Amalgam {
    pub structure: FinStructure,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Finite probes into one homogeneous structure.
pub trait FraisseClass: Send + Sync {
    fn id(&self) -> ClassId;

    fn is_relational(&self) -> bool;

    /// No algebraicity: `acl(A) = A` for every finite substructure `A`.
    fn has_no_algebraicity(&self) -> bool {
        self.is_relational()
    }

    fn fixed_elements(&self) -> FixedElements {
        FixedElements::None
    }

    fn validate(&self, s: &FinStructure) -> Result<()> {
        if s.class != self.id() {
            return Err(Error::MalformedStructure(format!(
                "structure of class {} given to class {}",
                s.class,
                self.id()
            )));
        }
        s.check_shape()
    }

    /// Membership in the age: every valid structure of the class embeds.
    fn is_member(&self, s: &FinStructure) -> bool {
        self.validate(s).is_ok()
    }

    fn is_fixed_point(&self, _s: &FinStructure, _i: usize) -> bool {
        false
    }

    /// Size used by class enumeration: points, dimension or atoms.
    fn size_measure(&self, s: &FinStructure) -> usize {
        s.len()
    }

    /// Code of the structure with its points kept in place. Equal codes mean the
    /// identity map of positions is an isomorphism.
    fn labeled_code(&self, s: &FinStructure) -> Vec<u8>;

    /// Positions of the points of `s` that lie in the algebraic closure of `subset`.
    fn closure_indices(&self, _s: &FinStructure, subset: &[usize]) -> Vec<usize> {
        let mut v = subset.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Algebraic closure of `subset`, as a structure (it may contain new points).
    fn closure(&self, s: &FinStructure, subset: &[usize]) -> Result<FinStructure> {
        Ok(s.induced(&self.closure_indices(s, subset)))
    }

    fn is_acl_closed(&self, s: &FinStructure) -> Result<bool> {
        let all: Vec<usize> = (0..s.len()).collect();
        Ok(self.closure(s, &all)?.len() == s.len())
    }

    fn canonical_form(&self, s: &FinStructure) -> Result<Canonical> {
        self.validate(s)?;
        brute_canonical(self, s)
    }

    /// The canonical representative of the isomorphism type of `s`.
    fn canonical_structure(&self, s: &FinStructure) -> Result<FinStructure> {
        let c = self.canonical_form(s)?;
        let mut out = s.permuted(&c.relabel);
        out.points = index_names(out.len());
        Ok(out)
    }

    fn automorphisms(&self, s: &FinStructure) -> Result<PermGroup> {
        self.validate(s)?;
        brute_automorphisms(self, s)
    }

    /// One canonical structure per isomorphism type with size measure `≤ k`,
    /// sorted by (size measure, code).
    fn enumerate(&self, k: usize, limits: &Limits) -> Result<Vec<FinStructure>>;

    /// Canonical algebraically closed structures with at most `max_points` points.
    fn closed_structures(&self, max_points: usize, limits: &Limits) -> Result<Vec<FinStructure>>;

    /// All structures on `k` distinguishable points, up to isomorphisms that fix
    /// every point. With `x0_only`, structures containing a fixed element are dropped.
    fn labeled_cores(&self, k: usize, x0_only: bool, limits: &Limits) -> Result<Vec<FinStructure>>;

    fn closure_signature(&self, core: &FinStructure) -> Result<ClosedSignature> {
        let all: Vec<usize> = (0..core.len()).collect();
        let closed = self.closure(core, &all)?;
        Ok(ClosedSignature {
            code: self.canonical_form(&closed)?.code,
            points: closed.len(),
        })
    }

    /// Every way of placing `b` and `c` jointly inside the homogeneous structure,
    /// at least once per joint isomorphism type.
    fn amalgams(&self, b: &FinStructure, c: &FinStructure) -> Result<Vec<Amalgam>>;
}

/// Largest structure handled by exhaustive relabeling.
pub(crate) const BRUTE_LIMIT: usize = 8;

fn brute_check(s: &FinStructure) -> Result<()> {
    if s.len() > BRUTE_LIMIT {
        return Err(Error::limit(
            "points for exhaustive canonical labeling",
            s.len() as u128,
            BRUTE_LIMIT as u128,
        ));
    }
    Ok(())
}

/// Least labeled code over all relabelings.
pub(crate) fn brute_canonical<C: FraisseClass + ?Sized>(class: &C, s: &FinStructure) -> Result<Canonical> {
    brute_check(s)?;
    let (code, relabel) = combinat::permutations(s.len())
        .into_iter()
        .map(|p| (class.labeled_code(&s.permuted(&p)), p))
        .min()
        .expect("at least one permutation");
    Ok(Canonical {
        code: hex::encode(code),
        relabel,
    })
}

pub(crate) fn brute_automorphisms<C: FraisseClass + ?Sized>(class: &C, s: &FinStructure) -> Result<PermGroup> {
    brute_check(s)?;
    let own = class.labeled_code(s);
    let gens = combinat::permutations(s.len())
        .into_iter()
        .filter(|p| class.labeled_code(&s.permuted(p)) == own)
        .map(|p| Perm::from_images(p.into_iter().map(|x| x as u32).collect()))
        .collect::<Result<Vec<_>>>()?;
    group_from_elements(s.len(), gens)
}

/// Group generated by `elems`, keeping only generators that enlarge it.
pub(crate) fn group_from_elements(degree: usize, elems: Vec<Perm>) -> Result<PermGroup> {
    let mut group = PermGroup::trivial(degree);
    let mut gens: Vec<Perm> = Vec::new();
    for e in elems {
        if !group.contains(&e) {
            gens.push(e);
            group = PermGroup::new(degree, gens.clone())?;
        }
    }
    Ok(group)
}

static PURE_SET: PureSetClass = PureSetClass;
static LINEAR_ORDER: LinearOrderClass = LinearOrderClass;
static GRAPH: GraphClass = GraphClass;
static VS2: VectorSpaceClass = VectorSpaceClass { q: 2 };
static VS3: VectorSpaceClass = VectorSpaceClass { q: 3 };
static VS5: VectorSpaceClass = VectorSpaceClass { q: 5 };
static VS7: VectorSpaceClass = VectorSpaceClass { q: 7 };
static BOOLEAN: BooleanAlgebraClass = BooleanAlgebraClass;

/// The plug-in implementing a class.
pub fn class(id: ClassId) -> &'static dyn FraisseClass {
    match id {
        ClassId::PureSet => &PURE_SET,
        ClassId::LinearOrder => &LINEAR_ORDER,
        ClassId::Graph => &GRAPH,
        ClassId::VectorSpace { q: 3 } => &VS3,
        ClassId::VectorSpace { q: 5 } => &VS5,
        ClassId::VectorSpace { q: 7 } => &VS7,
        ClassId::VectorSpace { .. } => &VS2,
        ClassId::BooleanAlgebra => &BOOLEAN,
    }
}

pub fn canonical_form(s: &FinStructure) -> Result<Canonical> {
    class(s.class).canonical_form(s)
}

pub fn automorphisms(s: &FinStructure) -> Result<PermGroup> {
    class(s.class).automorphisms(s)
}

pub fn acl(s: &FinStructure, subset: &[usize]) -> Result<FinStructure> {
    let c = class(s.class);
    c.validate(s)?;
    if let Some(&bad) = subset.iter().find(|&&i| i >= s.len()) {
        return Err(Error::MalformedStructure(format!("point index {bad} out of range")));
    }
    c.closure(s, subset)
}

pub fn enumerate_class(id: ClassId, k: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
    class(id).enumerate(k, limits)
}

/// An orbit type of `G` on `X^n`: which coordinates coincide, and the structure
/// induced on the distinct entries (block `i` of the pattern is core point `i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleType {
    pub arity: usize,
    pub pattern: Vec<usize>,
    pub core: FinStructure,
    pub x0_only: bool,
    /// Hex key; two tuples lie in one orbit iff their keys agree.
    pub key: String,
}

fn type_key(class: &dyn FraisseClass, pattern: &[usize], core: &FinStructure) -> String {
    let mut bytes: Vec<u8> = pattern.iter().map(|&b| b as u8).collect();
    bytes.push(0xff);
    bytes.extend(class.labeled_code(core));
    hex::encode(bytes)
}

/// Orbit-type key of a tuple of points of `s`.
pub fn tuple_key(s: &FinStructure, tuple: &[usize]) -> String {
    let (pattern, distinct) = combinat::equality_pattern(tuple);
    type_key(class(s.class), &pattern, &s.induced(&distinct))
}

/// Complete, duplicate-free list of orbit types of `G` on `X^n` (or `X_0^n`).
pub fn enumerate_tuple_types(id: ClassId, n: usize, x0_only: bool, limits: &Limits) -> Result<Vec<TupleType>> {
    limits.check_arity(n)?;
    let c = class(id);
    let mut cores: Vec<Option<Vec<FinStructure>>> = vec![None; n + 1];
    let mut out = Vec::new();
    for pattern in combinat::set_partitions(n) {
        let k = combinat::block_count(&pattern);
        if cores[k].is_none() {
            cores[k] = Some(c.labeled_cores(k, x0_only, limits)?);
        }
        for core in cores[k].as_ref().expect("filled") {
            out.push(TupleType {
                arity: n,
                key: type_key(c, &pattern, core),
                pattern: pattern.clone(),
                core: core.clone(),
                x0_only,
            });
        }
    }
    Ok(out)
}

/// Appends a length as two big-endian bytes.
pub(crate) fn push_len(code: &mut Vec<u8>, n: usize) {
    code.extend_from_slice(&(n as u16).to_be_bytes());
}

pub(crate) fn check_measure(what: &'static str, k: usize, limit: usize) -> Result<()> {
    if k > limit {
        return Err(Error::limit(what, k as u128, limit as u128));
    }
    Ok(())
}
