use super::*;
use crate::config::Limits;
use crate::finstruct::{enumerate_tuple_types, ClassId, FinStructure};
use crate::permgrp::{Perm, PermGroup};

fn limits() -> Limits {
    Limits::default()
}

fn stirling2(n: usize, k: usize) -> u64 {
    if n == 0 && k == 0 {
        return 1;
    }
    if n == 0 || k == 0 {
        return 0;
    }
    k as u64 * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
}

#[test]
fn open_subgroups_of_small_bases() {
    let l = limits();
    let set = enumerate_open_subgroups(ClassId::PureSet, 2, &l).unwrap();
    let shape: Vec<(usize, u128)> = set.iter().map(|v| (v.base().len(), v.k().order())).collect();
    assert_eq!(shape, vec![(0, 1), (1, 1), (2, 1), (2, 2)]);
    assert_eq!(enumerate_open_subgroups(ClassId::LinearOrder, 2, &l).unwrap().len(), 3);
    assert_eq!(enumerate_open_subgroups(ClassId::Graph, 2, &l).unwrap().len(), 6);
    // F_2: {0}, a line, a plane with the 6 subgroup classes of GL(2,2) ≅ S3
    let vs = enumerate_open_subgroups(ClassId::VectorSpace { q: 2 }, 4, &l).unwrap();
    assert_eq!(vs.len(), 1 + 1 + 4);
}

#[test]
fn non_closed_base_is_rejected() {
    let s = FinStructure::vectors(2, 2, vec![vec![1, 0], vec![0, 1]]);
    let err = make_open_subgroup(ClassId::VectorSpace { q: 2 }, &s, &PermGroup::trivial(2)).unwrap_err();
    assert!(matches!(err, crate::Error::BaseNotAclClosed(_)));
    let set = FinStructure::pure_set(2);
    let bad = PermGroup::new(3, vec![Perm::from_images(vec![1, 0, 2]).unwrap()]).unwrap();
    assert!(matches!(
        make_open_subgroup(ClassId::PureSet, &set, &bad).unwrap_err(),
        crate::Error::NotASubgroup(_)
    ));
    let chain = FinStructure::chain(2);
    let swap = PermGroup::new(2, vec![Perm::from_images(vec![1, 0]).unwrap()]).unwrap();
    assert!(make_open_subgroup(ClassId::LinearOrder, &chain, &swap).is_err());
}

#[test]
fn commensurator_is_setwise_stabilizer() {
    let l = limits();
    for id in [ClassId::PureSet, ClassId::Graph, ClassId::VectorSpace { q: 2 }, ClassId::BooleanAlgebra] {
        for v in enumerate_open_subgroups(id, 4, &l).unwrap() {
            let c = commensurator(&v);
            assert!(c.k().same_group(v.aut()));
            assert!(commensurator(&c).same_as(&c));
            assert_eq!(c.k().order() / v.k().order(), v.index_in_setwise());
        }
    }
}

#[test]
fn double_coset_counts() {
    let l = limits();
    let point = |id| enumerate_open_subgroups(id, 1, &l).unwrap().into_iter().find(|v| v.base().len() == 1).unwrap();
    let v = point(ClassId::PureSet);
    assert_eq!(double_coset_profile(&v, &v).unwrap().count, 2);
    let v = point(ClassId::LinearOrder);
    assert_eq!(double_coset_profile(&v, &v).unwrap().count, 3);
    let pair = enumerate_open_subgroups(ClassId::PureSet, 2, &l).unwrap();
    assert_eq!(double_coset_profile(&pair[2], &pair[2]).unwrap().count, 7);
    // setwise: {same, one shared, disjoint} and for "same", fixed or swapped merge
    assert_eq!(double_coset_profile(&pair[3], &pair[3]).unwrap().count, 3);
    assert_eq!(double_coset_profile(&pair[0], &pair[3]).unwrap().count, 1);
}

/// Orbits of `G` on pairs of copies of the base, counted from the tuple types of
/// length `2|B|` whose halves both have the type of `B`.
fn roelcke_oracle(v: &OpenSubgroup) -> usize {
    let b = v.base();
    let n = b.len();
    let c = crate::finstruct::class(b.class);
    let own = c.labeled_code(b);
    enumerate_tuple_types(b.class, 2 * n, false, &limits())
        .unwrap()
        .into_iter()
        .filter(|t| {
            let point = |i: usize| t.pattern[i];
            let half = |r: std::ops::Range<usize>| {
                let idx: Vec<usize> = r.map(point).collect();
                let distinct: std::collections::HashSet<_> = idx.iter().collect();
                distinct.len() == n && c.labeled_code(&t.core.induced(&idx)) == own
            };
            half(0..n) && half(n..2 * n)
        })
        .count()
}

#[test]
fn roelcke_certificate_matches_tuple_types() {
    let l = limits();
    for id in [ClassId::PureSet, ClassId::LinearOrder, ClassId::Graph] {
        for v in enumerate_open_subgroups(id, 2, &l).unwrap() {
            if v.k().order() == 1 {
                assert_eq!(double_coset_profile(&v, &v).unwrap().count, roelcke_oracle(&v), "{id}");
            }
        }
    }
}

#[test]
fn coset_finiteness_agrees_on_both_sides() {
    let l = limits();
    // graphs on 4 vertices have 2^16 free cross pairs, so they stop at 3
    for (id, max) in [
        (ClassId::PureSet, 4),
        (ClassId::LinearOrder, 4),
        (ClassId::Graph, 3),
        (ClassId::VectorSpace { q: 2 }, 4),
        (ClassId::BooleanAlgebra, 4),
    ] {
        for v in enumerate_open_subgroups(id, max, &l).unwrap() {
            for conf in joint_configurations(v.base(), v.base()).unwrap() {
                let f = finitely_many_left_cosets(&v, &conf);
                assert_eq!(f.left, f.right);
                let mut r = conf.right.clone();
                let mut left = conf.left.clone();
                r.sort();
                left.sort();
                assert_eq!(f.left, r == left || v.base().len() == finstruct_fixed(id));
            }
        }
    }
}

fn finstruct_fixed(id: ClassId) -> usize {
    crate::finstruct::class(id).fixed_elements().count()
}

#[test]
fn catalog_examples() {
    let l = limits();
    let order = irrep_catalog(ClassId::LinearOrder, 4, &l).unwrap();
    assert_eq!(order.len(), 5);
    assert!(order.iter().all(|x| x.is_trivial_sigma()));
    assert_eq!(irrep_catalog(ClassId::PureSet, 2, &l).unwrap().len(), 4);
    assert_eq!(irrep_catalog(ClassId::Graph, 2, &l).unwrap().len(), 6);
    // p(0) + ... + p(4)
    assert_eq!(irrep_catalog(ClassId::PureSet, 4, &l).unwrap().len(), 1 + 1 + 2 + 3 + 5);
}

#[test]
fn quasiregular_bookkeeping() {
    let l = limits();
    for id in [
        ClassId::PureSet,
        ClassId::LinearOrder,
        ClassId::Graph,
        ClassId::VectorSpace { q: 2 },
        ClassId::BooleanAlgebra,
    ] {
        for v in enumerate_open_subgroups(id, 4, &l).unwrap() {
            let d = decompose_quasiregular(&v, &l).unwrap();
            assert_eq!(d.total_degree(), v.index_in_setwise());
            if v.k().order() == 1 {
                for (label, m) in d.iter() {
                    assert_eq!(m, label.sigma_degree);
                }
            }
            if v.k().same_group(v.aut()) {
                assert_eq!(d.len(), 1);
                assert!(d.iter().all(|(x, m)| m == 1 && x.is_trivial_sigma()));
            }
        }
    }
}

#[test]
fn pure_set_powers_follow_stirling_numbers() {
    let l = limits();
    for n in 0..=5 {
        let d = decompose_power(ClassId::PureSet, n, false, &l).unwrap();
        let irreps = d.irreps.unwrap();
        for (label, m) in irreps.iter() {
            assert_eq!(m, stirling2(n, label.base.len()) * label.sigma_degree);
        }
        let expected: u64 = (0..=n).map(|k| stirling2(n, k)).sum();
        assert_eq!(d.orbit_count as u64, expected);
    }
    let three = decompose_power(ClassId::PureSet, 3, false, &l).unwrap().irreps.unwrap();
    let mults: Vec<u64> = three.iter().map(|(_, m)| m).collect();
    // S3 characters in table order: trivial, sign, standard
    assert_eq!(mults, vec![1, 3, 3, 1, 1, 2]);
}

#[test]
fn boolean_fixed_points_give_trivial_terms() {
    let l = limits();
    let full = decompose_power(ClassId::BooleanAlgebra, 1, false, &l).unwrap().irreps.unwrap();
    let trivial: u64 = full.iter().filter(|(x, _)| x.is_trivial()).map(|(_, m)| m).sum();
    assert_eq!(trivial, 2);
    let x0 = decompose_power(ClassId::BooleanAlgebra, 1, true, &l).unwrap().irreps.unwrap();
    assert!(x0.iter().all(|(x, _)| !x.is_trivial()));
}

#[test]
fn catalog_covers_powers() {
    let l = limits();
    for id in [ClassId::PureSet, ClassId::Graph, ClassId::LinearOrder] {
        let n = 3;
        let catalog = irrep_catalog(id, n, &l).unwrap();
        let d = decompose_power(id, n, false, &l).unwrap().irreps.unwrap();
        for (label, _) in d.iter() {
            assert!(catalog.contains(label));
        }
        // ℓ²(Xⁿ) has no invariant vectors for n ≥ 1, so the empty base is absent
        for label in catalog.iter().filter(|x| !x.base.is_empty()) {
            assert!(d.multiplicity(label) >= 1, "{id}: missing {}", label.base_code);
        }
    }
}

#[test]
fn tensor_recursion_residuals_vanish() {
    let l = limits();
    for id in [ClassId::PureSet, ClassId::VectorSpace { q: 2 }, ClassId::BooleanAlgebra] {
        for k in 0..=2 {
            let r = tensor_recursion_check(id, k, &l).unwrap();
            assert!(r.passed(), "{id} k={k}");
        }
    }
}

#[test]
fn equivalence_of_labels() {
    let l = limits();
    let cat = irrep_catalog(ClassId::PureSet, 2, &l).unwrap();
    assert!(induced_equivalent(&cat[3], &cat[3], &l).unwrap());
    assert!(!induced_equivalent(&cat[2], &cat[3], &l).unwrap());
    let graphs = irrep_catalog(ClassId::Graph, 2, &l).unwrap();
    let trivial_on_two: Vec<&IrrepLabel> =
        graphs.iter().filter(|x| x.base.len() == 2 && x.is_trivial_sigma()).collect();
    assert!(!induced_equivalent(trivial_on_two[0], trivial_on_two[1], &l).unwrap());
    // the same label on a relabeled copy of the base
    let path = FinStructure::graph(3, &[(0, 1), (1, 2)]);
    let moved = path.permuted(&[2, 0, 1]);
    let mut x = irrep_catalog(ClassId::Graph, 3, &l)
        .unwrap()
        .into_iter()
        .find(|x| x.base_code == crate::finstruct::canonical_form(&path).unwrap().code && !x.is_trivial_sigma())
        .unwrap();
    let y = x.clone();
    x.base = moved;
    assert!(induced_equivalent(&x, &y, &l).unwrap());
}
