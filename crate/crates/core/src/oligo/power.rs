use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Serialize, Serializer};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::finstruct::{self, enumerate_tuple_types, ClassId};
use crate::permgrp::subgroup_class_key;

use super::catalog::{quasiregular_with, Decomposition, IrrepLabel, TableCache};

/// Closures larger than this are described by their signature only.
const MATERIALIZE_POINTS: usize = 64;

/// A quasi-regular summand `ℓ²(G/V)` with `V = (B, K)`: the canonical code of `B`
/// and the conjugacy class of `K ≤ Aut(B)` (empty when `K` is trivial).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SummandKey {
    pub base_code: String,
    pub base_points: usize,
    pub stabilizer: Vec<Vec<u32>>,
}

/// `ℓ²(Xⁿ)` (or `ℓ²(X₀ⁿ)`) as a sum over orbits of quasi-regular summands and,
/// when every automorphism group is small enough, of irreducibles.
#[derive(Debug, Clone, Serialize)]
pub struct PowerDecomposition {
    pub class: ClassId,
    pub arity: usize,
    pub x0_only: bool,
    pub orbit_count: usize,
    #[serde(serialize_with = "keyed_list")]
    pub summands: BTreeMap<SummandKey, u64>,
    /// `None` when some `Aut(B)` exceeds the character-table limit.
    pub irreps: Option<Decomposition>,
}

#[derive(Serialize)]
struct KeyedEntry<'a, K: Serialize, V: Serialize> {
    #[serde(flatten)]
    key: &'a K,
    value: V,
}

fn keyed_list<S: Serializer, K: Serialize, V: Serialize + Copy>(
    map: &BTreeMap<K, V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(key, &value)| KeyedEntry { key, value }))
}

struct OrbitSummand {
    key: SummandKey,
    irreps: Option<Decomposition>,
}

pub fn decompose_power(class: ClassId, n: usize, x0_only: bool, limits: &Limits) -> Result<PowerDecomposition> {
    let c = finstruct::class(class);
    let types = enumerate_tuple_types(class, n, x0_only, limits)?;
    let mut by_core: HashMap<Vec<u8>, OrbitSummand> = HashMap::new();
    let mut tables = TableCache::default();
    let mut summands = BTreeMap::new();
    let mut irreps = Some(Decomposition::new());
    for t in &types {
        let core_code = c.labeled_code(&t.core);
        if !by_core.contains_key(&core_code) {
            let summand = orbit_summand(t, &mut tables, limits)?;
            by_core.insert(core_code.clone(), summand);
        }
        let s = &by_core[&core_code];
        *summands.entry(s.key.clone()).or_insert(0) += 1;
        match (&mut irreps, &s.irreps) {
            (Some(total), Some(d)) => total.merge(d, 1),
            _ => irreps = None,
        }
    }
    Ok(PowerDecomposition {
        class,
        arity: n,
        x0_only,
        orbit_count: types.len(),
        summands,
        irreps,
    })
}

/// `ℓ²(G/G_ā)` for a tuple of the given type: `G_ā` contains `G_(B)` for `B = acl(ā)`,
/// and its image in `Aut(B)` is the stabilizer of `ā`.
fn orbit_summand(t: &finstruct::TupleType, tables: &mut TableCache, limits: &Limits) -> Result<OrbitSummand> {
    let c = finstruct::class(t.core.class);
    let sig = c.closure_signature(&t.core)?;
    if sig.points > MATERIALIZE_POINTS {
        // the tuple generates its closure, so it is fixed only by the identity
        return Ok(OrbitSummand {
            key: SummandKey {
                base_code: sig.code,
                base_points: sig.points,
                stabilizer: Vec::new(),
            },
            irreps: None,
        });
    }
    let all: Vec<usize> = (0..t.core.len()).collect();
    let closed = c.closure(&t.core, &all)?;
    let canon = c.canonical_form(&closed)?;
    let base = c.canonical_structure(&closed)?;
    let positions = t
        .core
        .points
        .iter()
        .map(|name| {
            closed
                .points
                .iter()
                .position(|p| p == name)
                .map(|i| canon.relabel[i])
                .ok_or_else(|| Error::InvariantViolation(format!("closure lost the point {name}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let aut = c.automorphisms(&base)?;
    let k = aut.pointwise_stabilizer(&positions, limits)?;
    let stabilizer = if k.order() == 1 {
        Vec::new()
    } else {
        subgroup_class_key(&aut, &k, limits)?
    };
    let irreps = if aut.order() <= limits.chartab_limit {
        Some(quasiregular_with(t.core.class, &base, &canon.code, &aut, &k, tables, limits)?)
    } else {
        None
    };
    Ok(OrbitSummand {
        key: SummandKey {
            base_code: canon.code,
            base_points: base.len(),
            stabilizer,
        },
        irreps,
    })
}

/// Residuals of `ℓ²(X^{k+1}) = ⊕_j C(k+1,j)·|Y|^j·ℓ²(X₀^{k+1-j})`, where `Y` is the
/// set of fixed points and `X = X₀ ⊔ Y`.
#[derive(Debug, Clone, Serialize)]
pub struct RecursionReport {
    pub class: ClassId,
    pub k: usize,
    pub fixed_points: usize,
    #[serde(serialize_with = "keyed_list")]
    pub summand_residuals: BTreeMap<SummandKey, i128>,
    /// Per-irreducible residuals, when every term has an irreducible decomposition.
    #[serde(serialize_with = "optional_label_list")]
    pub irrep_residuals: Option<BTreeMap<IrrepLabel, i128>>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.summand_residuals.values().all(|&r| r == 0)
            && self.irrep_residuals.iter().flat_map(|m| m.values()).all(|&r| r == 0)
    }
}

fn optional_label_list<S: Serializer>(
    map: &Option<BTreeMap<IrrepLabel, i128>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match map {
        None => s.serialize_none(),
        Some(m) => keyed_list(m, s),
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn residuals<K: Ord + Clone>(
    actual: impl Iterator<Item = (K, u64)>,
    predicted: impl Iterator<Item = (K, u64)>,
) -> BTreeMap<K, i128> {
    let mut out: BTreeMap<K, i128> = BTreeMap::new();
    for (k, m) in actual {
        *out.entry(k).or_insert(0) += m as i128;
    }
    for (k, m) in predicted {
        *out.entry(k).or_insert(0) -= m as i128;
    }
    out
}

pub fn tensor_recursion_check(class: ClassId, k: usize, limits: &Limits) -> Result<RecursionReport> {
    let fixed = finstruct::class(class).fixed_elements().count();
    let n = k + 1;
    let full = decompose_power(class, n, false, limits)?;
    let mut summands: BTreeMap<SummandKey, u64> = BTreeMap::new();
    let mut irreps = Some(Decomposition::new());
    let last = if fixed == 0 { 0 } else { n };
    for j in 0..=last {
        let times = binomial(n, j) * (fixed as u64).pow(j as u32);
        let part = decompose_power(class, n - j, true, limits)?;
        for (key, m) in &part.summands {
            *summands.entry(key.clone()).or_insert(0) += m * times;
        }
        match (&mut irreps, &part.irreps) {
            (Some(total), Some(d)) => total.merge(d, times),
            _ => irreps = None,
        }
    }
    let summand_residuals = residuals(
        full.summands.iter().map(|(k, &m)| (k.clone(), m)),
        summands.into_iter(),
    );
    let irrep_residuals = match (&full.irreps, &irreps) {
        (Some(a), Some(b)) => {
            let labels: BTreeSet<&IrrepLabel> = a.iter().chain(b.iter()).map(|(l, _)| l).collect();
            Some(
                labels
                    .into_iter()
                    .map(|l| (l.clone(), a.multiplicity(l) as i128 - b.multiplicity(l) as i128))
                    .collect(),
            )
        }
        _ => None,
    };
    Ok(RecursionReport {
        class,
        k,
        fixed_points: fixed,
        summand_residuals,
        irrep_residuals,
    })
}
