use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::arith::CycInt;
use crate::chartab::{character_table, decompose, perm_character, Action, CharacterTable};
use crate::config::Limits;
use crate::error::Result;
use crate::finstruct::{self, ClassId, FinStructure};
use crate::permgrp::{Perm, PermGroup};

use super::subgroup::OpenSubgroup;

/// The irreducible `Ind_{G_B}^G(σ)`, for a canonical closed base `B` and an
/// irreducible character `σ` of `Aut(B)`.
///
/// Labels compare by class, base code and character index. The character index
/// is only meaningful for the canonical base, which is where every label built by
/// this module lives; [`induced_equivalent`] compares labels with arbitrary bases.
#[derive(Debug, Clone)]
pub struct IrrepLabel {
    pub class: ClassId,
    pub base: FinStructure,
    pub base_code: String,
    pub sigma_index: usize,
    pub sigma_degree: u64,
    pub sigma_values: Vec<CycInt>,
}

impl IrrepLabel {
    fn sort_key(&self) -> (ClassId, usize, &str, usize) {
        (self.class, self.base.len(), &self.base_code, self.sigma_index)
    }

    /// `σ` is the trivial character.
    pub fn is_trivial_sigma(&self) -> bool {
        self.sigma_values.iter().all(|v| v.as_integer() == Some(1))
    }

    /// The trivial representation of `G`: base `acl(∅)` with trivial `σ`.
    pub fn is_trivial(&self) -> bool {
        self.is_trivial_sigma() && self.base.len() == finstruct::class(self.class).fixed_elements().count()
    }
}

impl PartialEq for IrrepLabel {
    fn eq(&self, other: &Self) -> bool {
        self.sort_key() == other.sort_key()
    }
}

impl Eq for IrrepLabel {}

impl PartialOrd for IrrepLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IrrepLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

#[derive(Serialize)]
struct LabelView<'a> {
    class: String,
    base_code: &'a str,
    base_size: usize,
    sigma_index: usize,
    sigma_degree: u64,
    sigma_values: Vec<String>,
}

impl<'a> From<&'a IrrepLabel> for LabelView<'a> {
    fn from(l: &'a IrrepLabel) -> Self {
        LabelView {
            class: l.class.to_string(),
            base_code: &l.base_code,
            base_size: l.base.len(),
            sigma_index: l.sigma_index,
            sigma_degree: l.sigma_degree,
            sigma_values: l.sigma_values.iter().map(|v| v.to_string()).collect(),
        }
    }
}

impl Serialize for IrrepLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LabelView::from(self).serialize(s)
    }
}

/// A finitely supported multiset of irreducible labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Decomposition {
    terms: BTreeMap<IrrepLabel, u64>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: IrrepLabel, multiplicity: u64) {
        if multiplicity > 0 {
            *self.terms.entry(label).or_insert(0) += multiplicity;
        }
    }

    pub fn merge(&mut self, other: &Decomposition, times: u64) {
        for (l, &m) in &other.terms {
            self.add(l.clone(), m * times);
        }
    }

    pub fn multiplicity(&self, label: &IrrepLabel) -> u64 {
        self.terms.get(label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrepLabel, u64)> {
        self.terms.iter().map(|(l, &m)| (l, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ m_σ · deg σ`.
    pub fn total_degree(&self) -> u128 {
        self.iter().map(|(l, m)| m as u128 * l.sigma_degree as u128).sum()
    }
}

#[derive(Serialize)]
struct TermView<'a> {
    #[serde(flatten)]
    label: LabelView<'a>,
    multiplicity: u64,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|(l, m)| TermView {
            label: l.into(),
            multiplicity: m,
        }))
    }
}

/// Character tables of automorphism groups of canonical bases, by base code.
#[derive(Default)]
pub struct TableCache {
    tables: HashMap<(ClassId, String), Arc<CharacterTable>>,
}

impl TableCache {
    pub fn get(&mut self, class: ClassId, code: &str, aut: &PermGroup, limits: &Limits) -> Result<Arc<CharacterTable>> {
        if let Some(t) = self.tables.get(&(class, code.to_string())) {
            return Ok(t.clone());
        }
        let t = Arc::new(character_table(aut, limits)?);
        self.tables.insert((class, code.to_string()), t.clone());
        Ok(t)
    }
}

fn labels_of(class: ClassId, base: &FinStructure, code: &str, table: &CharacterTable) -> Vec<IrrepLabel> {
    table
        .characters()
        .iter()
        .zip(table.degrees())
        .enumerate()
        .map(|(i, (chi, &d))| IrrepLabel {
            class,
            base: base.clone(),
            base_code: code.to_string(),
            sigma_index: i,
            sigma_degree: d,
            sigma_values: chi.clone(),
        })
        .collect()
}

/// Decomposition of `ℓ²(G/V)` for `V = (B, K)`, from the permutation character of
/// `Aut(B)` on `Aut(B)/K`.
pub(crate) fn quasiregular_with(
    class: ClassId,
    base: &FinStructure,
    code: &str,
    aut: &PermGroup,
    k: &PermGroup,
    cache: &mut TableCache,
    limits: &Limits,
) -> Result<Decomposition> {
    let table = cache.get(class, code, aut, limits)?;
    let chi = perm_character(&table, Action::Cosets(k))?;
    let mults = decompose(&chi, &table)?;
    let mut out = Decomposition::new();
    for (label, m) in labels_of(class, base, code, &table).into_iter().zip(mults) {
        out.add(label, m);
    }
    Ok(out)
}

pub fn decompose_quasiregular(v: &OpenSubgroup, limits: &Limits) -> Result<Decomposition> {
    quasiregular_with(
        v.class(),
        v.base(),
        v.base_code(),
        v.aut(),
        v.k(),
        &mut TableCache::default(),
        limits,
    )
}

/// Every label `(B, σ)` with `B` closed and `|B| ≤ max_base`.
pub fn irrep_catalog(class: ClassId, max_base: usize, limits: &Limits) -> Result<Vec<IrrepLabel>> {
    let c = finstruct::class(class);
    let mut out = Vec::new();
    for base in c.closed_structures(max_base, limits)? {
        let base = c.canonical_structure(&base)?;
        let code = c.canonical_form(&base)?.code;
        let table = character_table(&c.automorphisms(&base)?, limits)?;
        out.extend(labels_of(class, &base, &code, &table));
    }
    out.sort();
    Ok(out)
}

/// Equivalence of induced representations: the bases are isomorphic and the
/// characters agree after transport along an isomorphism.
pub fn induced_equivalent(l1: &IrrepLabel, l2: &IrrepLabel, limits: &Limits) -> Result<bool> {
    if l1.class != l2.class || l1.base.len() != l2.base.len() || l1.sigma_degree != l2.sigma_degree {
        return Ok(false);
    }
    let c = finstruct::class(l1.class);
    let (c1, c2) = (c.canonical_form(&l1.base)?, c.canonical_form(&l2.base)?);
    if c1.code != c2.code {
        return Ok(false);
    }
    // phi: B1 -> B2 through the common canonical form
    let n = l1.base.len();
    let mut from_canon2 = vec![0u32; n];
    for (j, &pos) in c2.relabel.iter().enumerate() {
        from_canon2[pos] = j as u32;
    }
    let phi = Perm::from_images((0..n).map(|i| from_canon2[c1.relabel[i]]).collect())?;
    let t1 = character_table(&c.automorphisms(&l1.base)?, limits)?;
    let t2 = character_table(&c.automorphisms(&l2.base)?, limits)?;
    let phi_inv = phi.inverse();
    for (j, class2) in t2.classes().iter().enumerate() {
        let pulled = class2.representative.conjugate_by(&phi_inv);
        let Some(i) = t1.partition().class_of_perm(&pulled) else {
            return Ok(false);
        };
        if l1.sigma_values[i] != l2.sigma_values[j] {
            return Ok(false);
        }
    }
    Ok(true)
}
