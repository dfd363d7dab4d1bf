use std::collections::HashMap;

use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::finstruct::{self, tuple_key, ClassId, FinStructure};
use crate::permgrp::{subgroups_up_to_conjugacy, PermGroup};

/// The open subgroup `V` with `G_(B) ≤ V ≤ G_B` whose image in `Aut(B)` is `K`.
/// The base is always stored in canonical form.
#[derive(Debug, Clone)]
pub struct OpenSubgroup {
    class: ClassId,
    base: FinStructure,
    base_code: String,
    k: PermGroup,
    aut: PermGroup,
}

impl OpenSubgroup {
    pub fn class(&self) -> ClassId {
        self.class
    }

    pub fn base(&self) -> &FinStructure {
        &self.base
    }

    /// Canonical code of the base.
    pub fn base_code(&self) -> &str {
        &self.base_code
    }

    pub fn k(&self) -> &PermGroup {
        &self.k
    }

    /// `Aut(B)`, acting on the points of the base.
    pub fn aut(&self) -> &PermGroup {
        &self.aut
    }

    /// `[G_B : V] = [Aut(B) : K]`.
    pub fn index_in_setwise(&self) -> u128 {
        self.aut.order() / self.k.order()
    }

    /// Same base and same `K` as a set of permutations.
    pub fn same_as(&self, other: &OpenSubgroup) -> bool {
        self.class == other.class && self.base == other.base && self.k.same_group(&other.k)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenSubgroupExport {
    pub class: String,
    pub base_code: String,
    pub base_size: usize,
    pub base: serde_json::Value,
    pub k_order: u128,
    pub aut_order: u128,
    pub k_generators: Vec<Vec<u32>>,
}

impl OpenSubgroup {
    pub fn export(&self) -> OpenSubgroupExport {
        OpenSubgroupExport {
            class: self.class.to_string(),
            base_code: self.base_code.clone(),
            base_size: self.base.len(),
            base: self.base.to_json_value(),
            k_order: self.k.order(),
            aut_order: self.aut.order(),
            k_generators: self.k.generators().iter().map(|g| g.images().to_vec()).collect(),
        }
    }
}

/// Builds `(B, K)` after moving `B` to its canonical form and conjugating `K` along.
pub fn make_open_subgroup(class: ClassId, base: &FinStructure, k: &PermGroup) -> Result<OpenSubgroup> {
    if base.class != class {
        return Err(Error::MalformedStructure(format!(
            "base belongs to {}, expected {class}",
            base.class
        )));
    }
    let c = finstruct::class(class);
    c.validate(base)?;
    if !c.is_acl_closed(base)? {
        let all: Vec<usize> = (0..base.len()).collect();
        let closed = c.closure(base, &all)?;
        return Err(Error::BaseNotAclClosed(format!(
            "{} points generate a closure of {} points",
            base.len(),
            closed.len()
        )));
    }
    let aut = c.automorphisms(base)?;
    if k.degree() != base.len() || !k.is_subgroup_of(&aut) {
        return Err(Error::NotASubgroup("K is not a group of automorphisms of the base".into()));
    }
    let canon = c.canonical_form(base)?;
    let canonical = c.canonical_structure(base)?;
    Ok(OpenSubgroup {
        class,
        aut: c.automorphisms(&canonical)?,
        k: k.relabel(&canon.relabel)?,
        base: canonical,
        base_code: canon.code,
    })
}

/// `Comm_G(V) = G_B`, i.e. `(B, Aut(B))`.
pub fn commensurator(v: &OpenSubgroup) -> OpenSubgroup {
    OpenSubgroup {
        k: v.aut.clone(),
        ..v.clone()
    }
}

/// One open subgroup per conjugacy class with `|B| ≤ max_base`, ordered by base
/// then by the order of `K`.
pub fn enumerate_open_subgroups(class: ClassId, max_base: usize, limits: &Limits) -> Result<Vec<OpenSubgroup>> {
    let c = finstruct::class(class);
    let mut out = Vec::new();
    for base in c.closed_structures(max_base, limits)? {
        let aut = c.automorphisms(&base)?;
        for k in subgroups_up_to_conjugacy(&aut, limits)? {
            out.push(make_open_subgroup(class, &base, &k)?);
        }
    }
    Ok(out)
}

/// Two bases placed jointly in the homogeneous structure; `left` and `right` are
/// the positions of the points of each base. Stands for the double coset
/// `G_(B) g G_(C)` where `g` carries `C` onto the right copy.
#[derive(Debug, Clone, Serialize)]
pub struct JointConfiguration {
    pub key: String,
    pub structure: FinStructure,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

fn joint_key(s: &FinStructure, left: &[usize], right: &[usize]) -> String {
    let mut t = left.to_vec();
    t.extend_from_slice(right);
    tuple_key(s, &t)
}

/// All joint types of `B` and `C`, one configuration each.
pub fn joint_configurations(b: &FinStructure, c: &FinStructure) -> Result<Vec<JointConfiguration>> {
    let class = finstruct::class(b.class);
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for a in class.amalgams(b, c)? {
        let key = joint_key(&a.structure, &a.left, &a.right);
        if seen.insert(key.clone(), out.len()).is_none() {
            out.push(JointConfiguration {
                key,
                structure: a.structure,
                left: a.left,
                right: a.right,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DoubleCosetProfile {
    pub count: usize,
    /// One joint configuration per double coset.
    pub witnesses: Vec<JointConfiguration>,
}

/// `V \ G / W`, as orbits of `K × L` on the joint types of the two bases.
pub fn double_coset_profile(v: &OpenSubgroup, w: &OpenSubgroup) -> Result<DoubleCosetProfile> {
    if v.class != w.class {
        return Err(Error::MalformedStructure("open subgroups of different classes".into()));
    }
    let configs = joint_configurations(&v.base, &w.base)?;
    let index: HashMap<&str, usize> = configs.iter().enumerate().map(|(i, c)| (c.key.as_str(), i)).collect();
    let mut parent: Vec<usize> = (0..configs.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, conf) in configs.iter().enumerate() {
        let moved_left = v
            .k
            .generators()
            .iter()
            .map(|k| ((0..conf.left.len()).map(|j| conf.left[k.apply(j)]).collect(), conf.right.clone()));
        let moved_right = w
            .k
            .generators()
            .iter()
            .map(|l| (conf.left.clone(), (0..conf.right.len()).map(|j| conf.right[l.apply(j)]).collect()));
        for (left, right) in moved_left.chain(moved_right).collect::<Vec<(Vec<usize>, Vec<usize>)>>() {
            let key = joint_key(&conf.structure, &left, &right);
            let j = *index.get(key.as_str()).ok_or_else(|| {
                Error::InvariantViolation("joint configuration missing from the amalgam enumeration".into())
            })?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let witnesses: Vec<JointConfiguration> = (0..configs.len())
        .filter(|&i| find(&mut parent, i) == i)
        .map(|i| configs[i].clone())
        .collect();
    Ok(DoubleCosetProfile {
        count: witnesses.len(),
        witnesses,
    })
}

/// Whether `VgV` is a finite union of left cosets of `V`, and of right cosets,
/// decided separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosetFiniteness {
    pub left: bool,
    pub right: bool,
}

/// `VgV/V` is the orbit of `gB` under `V`, finite iff `gB ⊆ acl(B)`; `V\VgV` is
/// finite iff `B ⊆ acl(gB)`.
pub fn finitely_many_left_cosets(v: &OpenSubgroup, config: &JointConfiguration) -> CosetFiniteness {
    let c = finstruct::class(v.class);
    let inside = |from: &[usize], targets: &[usize]| {
        let closed = c.closure_indices(&config.structure, from);
        targets.iter().all(|t| closed.contains(t))
    };
    CosetFiniteness {
        left: inside(&config.left, &config.right),
        right: inside(&config.right, &config.left),
    }
}
