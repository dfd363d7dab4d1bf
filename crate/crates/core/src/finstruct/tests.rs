use std::collections::HashSet;

use proptest::prelude::*;

use super::*;

fn stirling2(n: usize, k: usize) -> u64 {
    // S(n,k) = k S(n-1,k) + S(n-1,k-1)
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=i {
            t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn type_count(id: ClassId, n: usize) -> usize {
    let types = enumerate_tuple_types(id, n, false, &Limits::default()).unwrap();
    let keys: HashSet<&String> = types.iter().map(|t| &t.key).collect();
    assert_eq!(keys.len(), types.len(), "duplicate keys for {id} n={n}");
    types.len()
}

#[test]
fn tuple_type_counts() {
    for n in 0..=5 {
        let bell: u64 = (0..=n).map(|k| stirling2(n, k)).sum();
        let fubini: u64 = (0..=n).map(|k| stirling2(n, k) * factorial(k)).sum();
        assert_eq!(type_count(ClassId::PureSet, n) as u64, bell);
        assert_eq!(type_count(ClassId::LinearOrder, n) as u64, fubini);
    }
    for n in 0..=4 {
        let graphs: u64 = (0..=n).map(|k| stirling2(n, k) << (k * k.saturating_sub(1) / 2)).sum();
        assert_eq!(type_count(ClassId::Graph, n) as u64, graphs);
    }
    for n in 0..=3 {
        assert_eq!(type_count(ClassId::BooleanAlgebra, n), (1usize << (1 << n)) - 1);
    }
}

#[test]
fn graph_isomorphism_types() {
    let counts: Vec<usize> = (0..=5)
        .map(|n| {
            GraphClass
                .enumerate(n, &Limits::default())
                .unwrap()
                .iter()
                .filter(|g| g.len() == n)
                .count()
        })
        .collect();
    assert_eq!(counts, vec![1, 1, 2, 4, 11, 34]);
}

#[test]
fn automorphism_orders() {
    let l = Limits::default();
    assert_eq!(automorphisms(&FinStructure::chain(3)).unwrap().order(), 1);
    assert_eq!(automorphisms(&FinStructure::graph(2, &[(0, 1)])).unwrap().order(), 2);
    assert_eq!(automorphisms(&FinStructure::graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap().order(), 6);
    assert_eq!(automorphisms(&FinStructure::graph(4, &[(0, 1), (1, 2), (2, 3)])).unwrap().order(), 2);
    assert_eq!(automorphisms(&FinStructure::pure_set(4)).unwrap().order(), 24);
    // GL(d,q) on the standard space, Sym(m) on 2^m
    for (q, d, order) in [(2u8, 2usize, 6u128), (2, 3, 168), (3, 2, 48)] {
        let s = vector::standard_space(q, d);
        assert_eq!(automorphisms(&s).unwrap().order(), order);
    }
    for m in 1..=l.max_atoms {
        let s = boolean::standard_algebra(m);
        assert_eq!(automorphisms(&s).unwrap().order(), factorial(m) as u128);
    }
}

#[test]
fn algebraic_closure() {
    let set = FinStructure::pure_set(4);
    assert_eq!(acl(&set, &[2, 0]).unwrap().len(), 2);
    let v = vector::standard_space(2, 3);
    assert_eq!(acl(&v, &[]).unwrap().len(), 1);
    assert_eq!(acl(&v, &[3]).unwrap().len(), 2);
    assert_eq!(acl(&v, &[1, 2]).unwrap().len(), 4);
    assert_eq!(acl(&v, &[1, 2, 3]).unwrap().len(), 4);
    let b = boolean::standard_algebra(3);
    assert_eq!(acl(&b, &[]).unwrap().len(), 2);
    assert_eq!(acl(&b, &[1]).unwrap().len(), 4);
    assert_eq!(acl(&b, &[1, 2]).unwrap().len(), 8);
    assert!(acl(&b, &[9]).is_err());
    // closure of a non-closed vector configuration adds the missing span
    let partial = FinStructure::vectors(3, 2, vec![vec![1, 0], vec![0, 1]]);
    let cl = acl(&partial, &[0, 1]).unwrap();
    assert_eq!(cl.len(), 9);
    assert!(class(cl.class).is_acl_closed(&cl).unwrap());
}

#[test]
fn closed_catalogs() {
    let l = Limits::default();
    let vs = class(ClassId::VectorSpace { q: 2 }).closed_structures(8, &l).unwrap();
    assert_eq!(vs.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
    let ba = class(ClassId::BooleanAlgebra).closed_structures(8, &l).unwrap();
    assert_eq!(ba.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![2, 4, 8]);
    for s in vs.iter().chain(&ba) {
        assert!(class(s.class).is_acl_closed(s).unwrap());
    }
}

/// Every amalgam must embed both factors.
fn check_amalgams(b: &FinStructure, c: &FinStructure) -> usize {
    let cls = class(b.class);
    let out = cls.amalgams(b, c).unwrap();
    let mut codes = HashSet::new();
    for a in &out {
        cls.validate(&a.structure).unwrap();
        assert_eq!(cls.labeled_code(&a.structure.induced(&a.left)), cls.labeled_code(b));
        assert_eq!(cls.labeled_code(&a.structure.induced(&a.right)), cls.labeled_code(c));
        let mut joint = a.left.clone();
        joint.extend(&a.right);
        codes.insert(tuple_key(&a.structure, &joint));
    }
    assert_eq!(codes.len(), out.len(), "amalgams of {} repeat", b.class);
    out.len()
}

#[test]
fn amalgams_embed_both_sides() {
    // joint types of a pair of points: equal or not
    assert_eq!(check_amalgams(&FinStructure::pure_set(1), &FinStructure::pure_set(1)), 2);
    // equal, below, above
    assert_eq!(check_amalgams(&FinStructure::chain(1), &FinStructure::chain(1)), 3);
    assert_eq!(check_amalgams(&FinStructure::chain(2), &FinStructure::chain(1)), 5);
    let edge = FinStructure::graph(2, &[(0, 1)]);
    assert_eq!(check_amalgams(&FinStructure::graph(1, &[]), &FinStructure::graph(1, &[])), 3);
    check_amalgams(&edge, &edge);
    let line = FinStructure::vectors(2, 1, vec![vec![0], vec![1]]);
    // two lines in F_2^∞: equal or independent
    assert_eq!(check_amalgams(&line, &line), 2);
    let b1 = boolean::standard_algebra(1);
    assert_eq!(check_amalgams(&b1, &b1), 1);
    // the atom cells of two copies of 2^2 meet in a relation with full projections
    assert_eq!(check_amalgams(&boolean::standard_algebra(2), &boolean::standard_algebra(2)), 7);
}

fn arb_graph(max: usize) -> impl Strategy<Value = (FinStructure, Vec<usize>)> {
    (1..=max).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<bool>(), pairs),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(bits, perm)| {
                let mut edges = Vec::new();
                let mut i = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[i] {
                            edges.push((a, b));
                        }
                        i += 1;
                    }
                }
                (FinStructure::graph(n, &edges), perm)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_canonical_form_is_invariant((g, perm) in arb_graph(7)) {
        let h = g.permuted(&perm);
        let cg = canonical_form(&g).unwrap();
        let ch = canonical_form(&h).unwrap();
        prop_assert_eq!(&cg.code, &ch.code);
        let sg = GraphClass.labeled_code(&g.permuted(&cg.relabel));
        let sh = GraphClass.labeled_code(&h.permuted(&ch.relabel));
        prop_assert_eq!(sg, sh);
    }

    #[test]
    fn graph_automorphisms_match_brute_force((g, _) in arb_graph(6)) {
        let ir = automorphisms(&g).unwrap();
        let brute = brute_automorphisms(&GraphClass, &g).unwrap();
        prop_assert!(ir.same_group(&brute));
    }

    #[test]
    fn tuple_keys_are_invariant((g, perm) in arb_graph(6), tuple in proptest::collection::vec(0usize..6, 0..4)) {
        let tuple: Vec<usize> = tuple.into_iter().map(|x| x % g.len()).collect();
        let moved: Vec<usize> = tuple.iter().map(|&x| perm[x]).collect();
        prop_assert_eq!(tuple_key(&g, &tuple), tuple_key(&g.permuted(&perm), &moved));
    }

    #[test]
    fn graph_class_is_hereditary((g, perm) in arb_graph(6), keep in 0usize..6) {
        let sub: Vec<usize> = perm.into_iter().take(keep.min(g.len())).collect();
        prop_assert!(GraphClass.is_member(&g.induced(&sub)));
    }

    #[test]
    fn boolean_keys_ignore_the_ambient(masks in proptest::collection::vec(0u64..8, 1..4)) {
        // the same elements inside 2^3 and inside 2^4 (each atom split in two)
        let small = FinStructure::boolean(3, masks.clone());
        let split: Vec<u64> = masks.iter().map(|&m| (0..3).fold(0, |acc, a| acc | ((m >> a & 1) * (0b11 << (2 * a))))).collect();
        let big = FinStructure::boolean(6, split);
        let t: Vec<usize> = (0..masks.len()).collect();
        prop_assert_eq!(tuple_key(&small, &t), tuple_key(&big, &t));
    }
}
