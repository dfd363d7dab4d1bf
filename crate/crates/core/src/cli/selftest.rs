//! The acceptance suite, shared by `oligorep selftest` and the integration test.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::oracles::{bell_brute, graph_configurations_brute, stirling2, symmetric_degrees};
use crate::chartab::character_table;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::finstruct::{self, enumerate_tuple_types, ClassId};
use crate::kazhdan::{
    build_tree, cayley_edge_invariance, cayley_extension_check, derived_seeds, f2_embedding, freeness_check,
    greedy_witness, l1_l2_transfer, marginal_check, order_axioms_check, random_distribution, random_unit_vector,
    verify_tree, Distribution, DEFAULT_SEARCH,
};
use crate::oligo::{
    commensurator, decompose_power, decompose_quasiregular, enumerate_open_subgroups, finitely_many_left_cosets,
    irrep_catalog, joint_configurations, tensor_recursion_check,
};
use crate::permgrp::{Perm, PermGroup};
use crate::Rational;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const CRITERIA: usize = 10;

const NAMES: [&str; CRITERIA] = [
    "linear order catalog",
    "pure set multiplicities",
    "graph orbit counts",
    "quasi-regular bookkeeping",
    "commensurator laws",
    "back-and-forth tree",
    "l1/l2 inequalities",
    "F2 certificates",
    "character tables",
    "tensor recursion",
];

/// Wall-clock budget per criterion, in seconds.
const BUDGET: [f64; CRITERIA] = [1.0, 60.0, 60.0, 60.0, 60.0, 120.0, 60.0, 300.0, 60.0, 60.0];

/// Runs criterion `id` (1-based). Errors count as failures.
pub fn run_criterion(id: usize, limits: &Limits) -> Outcome {
    let start = Instant::now();
    let result = match id {
        1 => linear_order_catalog(limits),
        2 => pure_set_multiplicities(limits),
        3 => graph_orbit_counts(limits),
        4 => quasiregular_bookkeeping(limits),
        5 => commensurator_laws(limits),
        6 => kazhdan_tree(limits),
        7 => inequalities(limits),
        8 => f2_certificates(limits),
        9 => character_tables(limits),
        10 => tensor_recursion(limits),
        _ => Err(Error::Config(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let name = NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
    let budget = BUDGET.get(id.wrapping_sub(1)).copied().unwrap_or(0.0);
    let (mut pass, mut detail) = match result {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if seconds > budget {
        pass = false;
        detail = format!("{detail}; took {seconds:.2}s, budget {budget}s");
    }
    Outcome { id, name, pass, detail, seconds }
}

pub fn run_all(limits: &Limits) -> Vec<Outcome> {
    (1..=CRITERIA).map(|id| run_criterion(id, limits)).collect()
}

type Check = Result<(bool, String)>;

fn linear_order_catalog(limits: &Limits) -> Check {
    let labels = irrep_catalog(ClassId::LinearOrder, 5, limits)?;
    let sizes: Vec<usize> = labels.iter().map(|l| l.base.len()).collect();
    let trivial = labels.iter().all(|l| l.is_trivial_sigma() && l.sigma_degree == 1);
    let pass = labels.len() == 6 && trivial && sizes == (0..=5).collect::<Vec<_>>();
    Ok((pass, format!("{} labels, base sizes {sizes:?}, trivial σ: {trivial}", labels.len())))
}

fn pure_set_multiplicities(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let mut orbits = Vec::new();
    for n in 0..=5 {
        let d = decompose_power(ClassId::PureSet, n, false, limits)?;
        orbits.push(d.orbit_count);
        if d.orbit_count != bell_brute(n) {
            bad.push(format!("n={n}: {} orbits", d.orbit_count));
        }
        let Some(irreps) = d.irreps else {
            bad.push(format!("n={n}: no irreducible decomposition"));
            continue;
        };
        let mut degrees: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (label, m) in irreps.iter() {
            let k = label.base.len();
            degrees.entry(k).or_default().push(label.sigma_degree);
            if m != stirling2(n, k) * label.sigma_degree {
                bad.push(format!("n={n} k={k} deg={}: multiplicity {m}", label.sigma_degree));
            }
        }
        for k in 0..=n {
            let mut got = degrees.remove(&k).unwrap_or_default();
            got.sort();
            if stirling2(n, k) > 0 && got != symmetric_degrees(k) {
                bad.push(format!("n={n} k={k}: degrees {got:?}"));
            }
        }
        if !degrees.is_empty() {
            bad.push(format!("n={n}: labels with base larger than n"));
        }
    }
    Ok(summary(bad, format!("orbit counts {orbits:?}")))
}

fn graph_orbit_counts(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let mut counts = Vec::new();
    for n in 0..=4 {
        let got = enumerate_tuple_types(ClassId::Graph, n, false, limits)?.len();
        let formula: u64 = (0..=n).map(|k| stirling2(n, k) << (k * k.saturating_sub(1) / 2)).sum();
        let brute = graph_configurations_brute(n);
        counts.push(got);
        if got as u64 != formula || got != brute {
            bad.push(format!("n={n}: {got} types, formula {formula}, brute force {brute}"));
        }
    }
    Ok(summary(bad, format!("type counts {counts:?}")))
}

fn quasiregular_bookkeeping(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let mut tested = 0;
    for id in ClassId::ALL {
        for v in enumerate_open_subgroups(id, 4, limits)? {
            tested += 1;
            let d = decompose_quasiregular(&v, limits)?;
            let total: u128 = d.iter().map(|(l, m)| m as u128 * l.sigma_degree as u128).sum();
            if total != v.index_in_setwise() {
                bad.push(format!("{id} {}: Σ m·deg = {total}, index {}", v.base_code(), v.index_in_setwise()));
            }
            if v.k().order() == 1 {
                let irreducibles = character_table(v.aut(), limits)?.len();
                if d.len() != irreducibles || d.iter().any(|(l, m)| m != l.sigma_degree) {
                    bad.push(format!("{id} {}: regular decomposition is not the degree vector", v.base_code()));
                }
            }
        }
    }
    Ok(summary(bad, format!("{tested} open subgroups")))
}

fn commensurator_laws(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let (mut subgroups, mut configs) = (0, 0);
    // four-vertex graph bases have 2^16 free cross pairs, so graphs stop at three
    for (id, max) in [
        (ClassId::PureSet, 4),
        (ClassId::LinearOrder, 4),
        (ClassId::Graph, 3),
        (ClassId::VectorSpace { q: 2 }, 4),
        (ClassId::VectorSpace { q: 3 }, 4),
        (ClassId::BooleanAlgebra, 4),
    ] {
        let fixed = finstruct::class(id).fixed_elements().count();
        for v in enumerate_open_subgroups(id, max, limits)? {
            subgroups += 1;
            let c = commensurator(&v);
            if !commensurator(&c).same_as(&c) {
                bad.push(format!("{id} {}: commensurator not idempotent", v.base_code()));
            }
            if c.base() != v.base() || !c.k().same_group(v.aut()) {
                bad.push(format!("{id} {}: commensurator is not (B, Aut(B))", v.base_code()));
            }
            if c.k().order() / v.k().order() != v.index_in_setwise() {
                bad.push(format!("{id} {}: [Comm:V] mismatch", v.base_code()));
            }
            for conf in joint_configurations(v.base(), v.base())? {
                configs += 1;
                let f = finitely_many_left_cosets(&v, &conf);
                let (mut l, mut r) = (conf.left.clone(), conf.right.clone());
                l.sort();
                r.sort();
                // g stabilises B setwise exactly when the two copies coincide
                let expected = l == r || v.base().len() == fixed;
                if f.left != f.right || f.left != expected {
                    bad.push(format!("{id} {}: verdicts {f:?} on {:?}/{:?}", v.base_code(), conf.left, conf.right));
                }
            }
        }
    }
    Ok(summary(bad, format!("{subgroups} open subgroups, {configs} joint configurations")))
}

fn kazhdan_tree(limits: &Limits) -> Check {
    const TRIALS: usize = 1000;
    let depth = crate::kazhdan::DEFAULT_TREE_DEPTH;
    let mut bad = Vec::new();
    let mut parts = Vec::new();
    for id in [ClassId::PureSet, ClassId::LinearOrder, ClassId::Graph] {
        let mut tree = build_tree(id, depth, limits.seed, DEFAULT_SEARCH)?;
        let report = verify_tree(&mut tree);
        if !report.conditions_ok() {
            bad.push(format!("{id}: tree conditions {:?}, {:?}", report.conditions, report.failures));
        }
        let a = tree.enumeration(depth);
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
        let mut min = Rational::from(2);
        let (mut below_half, mut min_form) = (0, 0);
        for _ in 0..TRIALS {
            let points = crate::kazhdan::random_subset(&mut rng, &a);
            let f = random_distribution(&mut rng, &points, 20);
            let w = greedy_witness(&mut tree, &f)?;
            min = min.min(w.displacement);
            below_half += usize::from(!w.at_least_half || !w.meets_partial_sum);
            min_form += usize::from(!w.min_form_holds);
        }
        if below_half > 0 {
            bad.push(format!("{id}: {below_half} distributions displaced by less than the bound"));
        }
        parts.push(format!(
            "{id}: levels {:?}, min displacement {min}, min-form misses {min_form}/{TRIALS}",
            report.level_sizes
        ));
    }
    Ok(summary(bad, parts.join("; ")))
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut p: Vec<i64> = (0..n as i64).collect();
    p.shuffle(rng);
    p
}

fn inequalities(limits: &Limits) -> Check {
    const TRIALS: usize = 10_000;
    const POINTS: usize = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    let (mut marginal_bad, mut transfer_bad) = ([0usize; 2], [0usize; 2]);
    for _ in 0..TRIALS {
        let g = random_perm(&mut rng, POINTS);
        let act = |x: &i64| Some(g[*x as usize]);
        let arity = rng.gen_range(1..=3);
        let size = rng.gen_range(1..=6);
        let tuples: Vec<Vec<i64>> = (0..size)
            .map(|_| (0..arity).map(|_| rng.gen_range(0..POINTS as i64)).collect())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let f = random_distribution(&mut rng, &tuples, 20);
        marginal_bad[0] += usize::from(!marginal_check(act, &f)?.holds);
        let approx = Distribution::new(f.iter().map(|(t, w)| (t.clone(), w.to_f64().unwrap_or(f64::NAN))))?;
        marginal_bad[1] += usize::from(!marginal_check(act, &approx)?.holds);

        let dim = rng.gen_range(1..=POINTS);
        let mut support = random_perm(&mut rng, POINTS);
        support.truncate(dim);
        let v: BTreeMap<i64, Rational> = support.into_iter().zip(random_unit_vector(&mut rng, dim)).collect();
        transfer_bad[0] += usize::from(!l1_l2_transfer(act, &v)?.holds);
        let approx: BTreeMap<i64, f64> = v.iter().map(|(p, w)| (*p, w.to_f64().unwrap_or(f64::NAN))).collect();
        transfer_bad[1] += usize::from(!l1_l2_transfer(act, &approx)?.holds);
    }
    let pass = marginal_bad == [0, 0] && transfer_bad == [0, 0];
    Ok((
        pass,
        format!(
            "{TRIALS} instances each; marginal failures exact/float {marginal_bad:?}, transfer failures exact/float {transfer_bad:?}"
        ),
    ))
}

fn f2_certificates(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let mut parts = Vec::new();
    for (id, l) in [
        (ClassId::PureSet, 8),
        (ClassId::LinearOrder, 8),
        (ClassId::Graph, 8),
        (ClassId::VectorSpace { q: 2 }, 4),
        (ClassId::VectorSpace { q: 3 }, 4),
        (ClassId::BooleanAlgebra, 4),
    ] {
        match freeness_check(&f2_embedding(id, limits.seed), l) {
            Ok(c) => parts.push(format!("{id} free at L={l} on {} points", c.points_tested)),
            Err(e) => bad.push(format!("{id}: {e}")),
        }
    }
    let order = order_axioms_check(10_000, 6, 10, limits.seed)?;
    if order.failures() > 0 {
        bad.push(format!("order axioms: {} failures, {:?}", order.failures(), order.examples));
    }
    parts.push(format!("order axioms 0 failures ({} density cases)", order.density_checked));
    let invariance = cayley_edge_invariance(&f2_embedding(ClassId::Graph, limits.seed), 3, 3)?;
    if invariance > 0 {
        bad.push(format!("{invariance} Cayley edges not invariant"));
    }
    let mut rates = Vec::new();
    for seed in derived_seeds(limits.seed, 20) {
        rates.push(cayley_extension_check(seed, 6, 2)?.rate);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let lowest = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    parts.push(format!("extension rate r=6 t=2 over 20 seeds: mean {mean:.4}, min {lowest:.4}"));
    Ok(summary(bad, parts.join("; ")))
}

/// Conjugacy class sizes by orbiting every element under conjugation.
fn brute_class_sizes(elements: &[Perm]) -> Vec<usize> {
    let mut seen: HashSet<&Perm> = HashSet::new();
    let mut sizes = Vec::new();
    for x in elements {
        if seen.contains(x) {
            continue;
        }
        let class: HashSet<Perm> = elements.iter().map(|g| x.conjugate_by(g)).collect();
        sizes.push(class.len());
        for y in elements.iter().filter(|y| class.contains(*y)) {
            seen.insert(y);
        }
    }
    sizes.sort();
    sizes
}

/// `Aut(B)` and every `K` that arise from open subgroups at desk scale.
fn arising_groups(limits: &Limits) -> Result<Vec<PermGroup>> {
    let mut out: Vec<PermGroup> = Vec::new();
    let mut seen: HashSet<(usize, Vec<Vec<u32>>)> = HashSet::new();
    for (id, max) in [
        (ClassId::PureSet, 5),
        (ClassId::LinearOrder, 5),
        (ClassId::Graph, 5),
        (ClassId::VectorSpace { q: 2 }, 8),
        (ClassId::VectorSpace { q: 3 }, 9),
        (ClassId::BooleanAlgebra, 8),
    ] {
        for v in enumerate_open_subgroups(id, max, limits)? {
            for g in [v.aut(), v.k()] {
                if g.order() > 500 {
                    continue;
                }
                let mut elements: Vec<Vec<u32>> = g.elements(limits)?.iter().map(|p| p.images().to_vec()).collect();
                elements.sort();
                if seen.insert((g.degree(), elements)) {
                    out.push(g.clone());
                }
            }
        }
    }
    Ok(out)
}

fn character_tables(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let groups = arising_groups(limits)?;
    let largest = groups.iter().map(PermGroup::order).max().unwrap_or(0);
    for g in &groups {
        let table = character_table(g, limits)?;
        if let Err(e) = table.verify() {
            bad.push(format!("order {}: {e}", g.order()));
        }
        let squares: u128 = table.degrees().iter().map(|&d| d as u128 * d as u128).sum();
        let mut sizes: Vec<usize> = table.classes().iter().map(|c| c.size).collect();
        sizes.sort();
        if squares != g.order() || sizes != brute_class_sizes(&g.elements(limits)?) {
            bad.push(format!("order {}: Σdeg² = {squares}, class sizes {sizes:?}", g.order()));
        }
    }
    Ok(summary(bad, format!("{} groups, largest order {largest}", groups.len())))
}

fn tensor_recursion(limits: &Limits) -> Check {
    let mut bad = Vec::new();
    let mut irrep_level = Vec::new();
    for id in [ClassId::VectorSpace { q: 2 }, ClassId::BooleanAlgebra] {
        for k in 0..=3 {
            let r = tensor_recursion_check(id, k, limits)?;
            if !r.passed() {
                let nonzero = r.summand_residuals.values().filter(|&&x| x != 0).count()
                    + r.irrep_residuals.iter().flat_map(|m| m.values()).filter(|&&x| x != 0).count();
                bad.push(format!("{id} k={k}: {nonzero} nonzero residuals"));
            }
            if r.irrep_residuals.is_some() {
                irrep_level.push(format!("{id} k={k}"));
            }
        }
    }
    Ok(summary(bad, format!("all residuals zero; irreducible level also checked for {}", irrep_level.join(", "))))
}

fn summary(bad: Vec<String>, ok: String) -> (bool, String) {
    if bad.is_empty() {
        (true, ok)
    } else {
        let shown: Vec<&str> = bad.iter().take(5).map(String::as_str).collect();
        (false, format!("{} problems: {}", bad.len(), shown.join("; ")))
    }
}
