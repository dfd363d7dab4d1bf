use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::finstruct::ClassId;

const TREE_CLASSES: [ClassId; 3] = [ClassId::PureSet, ClassId::LinearOrder, ClassId::Graph];

fn tree(id: ClassId, depth: usize) -> PartialAutTree {
    build_tree(id, depth, 5, DEFAULT_SEARCH).unwrap()
}

#[test]
fn single_level_tree_is_the_empty_map() {
    let t = tree(ClassId::Graph, 1);
    assert_eq!(t.level(1), [PartialMap::empty()]);
    assert!(build_tree(ClassId::VectorSpace { q: 2 }, 3, 0, 10).is_err());
}

#[test]
fn depth_four_trees_satisfy_conditions() {
    for id in TREE_CLASSES {
        let mut t = tree(id, 4);
        let r = verify_tree(&mut t);
        assert!(r.conditions_ok(), "{id}: {:?}", r.failures);
    }
}

#[test]
fn verification_catches_a_broken_tree() {
    let mut t = tree(ClassId::PureSet, 4);
    let a = t.enumeration(2);
    // extends nothing in S_3, misses a_1 and swaps a_2 with a far point
    t.corrupt_for_test(4, PartialMap::from_pairs(vec![(a[1], Point::from(7)), (Point::from(7), a[1])]));
    let r = verify_tree(&mut t);
    assert!(!r.conditions[1] && !r.conditions[2] && !r.conditions[3]);
}

#[test]
fn point_mass_is_moved_by_two() {
    for id in TREE_CLASSES {
        let mut t = tree(id, 4);
        let a = t.enumeration(1);
        let w = greedy_witness(&mut t, &Distribution::point_mass(a[0])).unwrap();
        assert_eq!(w.displacement, Point::from(2));
    }
}

#[test]
fn uniform_distributions_are_displaced() {
    for id in TREE_CLASSES {
        let mut t = tree(id, 6);
        let a = t.enumeration(6);
        for m in 1..=6 {
            let f = Distribution::uniform(a[..m].iter().cloned()).unwrap();
            let w = greedy_witness(&mut t, &f).unwrap();
            assert!(w.at_least_half && w.meets_partial_sum, "{id} m={m}: {}", w.displacement);
            assert!(w.certificates.iter().all(|c| c.holds));
        }
    }
}

#[test]
fn support_outside_enumeration_is_rejected() {
    let mut t = tree(ClassId::PureSet, 3);
    let f = Distribution::point_mass(Point::from(1000));
    assert!(matches!(greedy_witness(&mut t, &f), Err(crate::Error::SupportOutsideEnumeration(_))));
}

#[test]
fn random_distributions_are_displaced() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for id in TREE_CLASSES {
        let mut t = tree(id, 6);
        let a = t.enumeration(6);
        for _ in 0..100 {
            let pts: Vec<Point> = a.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
            if pts.is_empty() {
                continue;
            }
            let f = random_distribution(&mut rng, &pts, 12);
            let w = greedy_witness(&mut t, &f).unwrap();
            assert!(w.at_least_half, "{id}: {}", w.displacement);
            assert!(w.certificates.iter().all(|c| c.holds));
            assert!(!w.displacement.is_zero());
        }
    }
}

#[test]
fn report_shapes() {
    let l = crate::config::Limits::default();
    let r = kazhdan_report(ClassId::Graph, 4, 20, 6, &l).unwrap();
    assert!(r.tree.as_ref().unwrap().conditions_ok && r.freeness.pass);
    assert!(r.displacement_trials.min_value >= Point::new(1, 2));
    let v = serde_json::to_value(&r).unwrap();
    for key in ["class", "Q", "freeness", "tree", "displacement_trials"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["Q"], serde_json::json!(["x", "y"]));
    let b = kazhdan_report(ClassId::BooleanAlgebra, 4, 5, 3, &l).unwrap();
    assert!(b.tree.is_none() && b.displacement_trials.min_value > Point::from(0));
}
