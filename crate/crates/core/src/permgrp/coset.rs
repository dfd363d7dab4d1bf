use std::collections::HashMap;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::group::PermGroup;
use super::perm::Perm;

/// Action of a group on the left cosets `G/K`; coset 0 is `K` itself.
#[derive(Debug, Clone)]
pub struct CosetAction {
    /// One representative per coset.
    pub representatives: Vec<Perm>,
    /// Image of each generator of `G` as a permutation of the cosets.
    pub generator_images: Vec<Perm>,
}

impl CosetAction {
    pub fn degree(&self) -> usize {
        self.representatives.len()
    }

    pub fn as_group(&self) -> PermGroup {
        PermGroup::new(self.degree(), self.generator_images.clone()).expect("consistent degree")
    }
}

pub fn coset_action(group: &PermGroup, sub: &PermGroup, limits: &Limits) -> Result<CosetAction> {
    if !sub.is_subgroup_of(group) {
        return Err(Error::NotASubgroup("K is not contained in G".into()));
    }
    let sub_elems = sub.elements(limits)?;
    // canonical label of gK: its least element
    let label = |g: &Perm| -> Perm { sub_elems.iter().map(|k| g.compose(k)).min().expect("K non-empty") };
    let mut index: HashMap<Perm, usize> = HashMap::new();
    let id = group.identity();
    index.insert(label(&id), 0);
    let mut reps = vec![id];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i].clone();
        for g in group.generators() {
            let y = g.compose(&r);
            let l = label(&y);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(l) {
                e.insert(reps.len());
                reps.push(y);
            }
        }
        i += 1;
    }
    let expected = group.order() / sub.order();
    if reps.len() as u128 != expected {
        return Err(Error::InvariantViolation(format!(
            "coset enumeration found {} cosets, expected {expected}",
            reps.len()
        )));
    }
    let generator_images = group
        .generators()
        .iter()
        .map(|g| {
            let images = reps.iter().map(|r| index[&label(&g.compose(r))] as u32).collect();
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetAction {
        representatives: reps,
        generator_images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let l = Limits::default();
        let s3 = PermGroup::symmetric(3);
        let whole = coset_action(&s3, &s3, &l).unwrap();
        assert_eq!(whole.degree(), 1);
        let regular = coset_action(&s3, &PermGroup::trivial(3), &l).unwrap();
        assert_eq!(regular.degree(), 6);
        assert_eq!(regular.as_group().order(), 6);
        let t = PermGroup::new(3, vec![Perm::from_cycles(3, &[&[1, 2]]).unwrap()]).unwrap();
        let nat = coset_action(&s3, &t, &l).unwrap();
        assert_eq!(nat.degree(), 3);
        let image = nat.as_group();
        assert_eq!(image.order(), 6);
        // stabilizer of the identity coset has order |K|
        let stab = image.pointwise_stabilizer(&[0], &l).unwrap();
        assert_eq!(stab.order(), 2);
    }

    #[test]
    fn rejects_non_subgroup() {
        let s3 = PermGroup::symmetric(3);
        let other = PermGroup::new(3, vec![Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap()]).unwrap();
        assert!(coset_action(&other, &s3, &Limits::default()).is_err());
    }
}
