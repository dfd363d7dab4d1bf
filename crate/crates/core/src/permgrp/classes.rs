use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};

use super::group::{ElementTable, PermGroup};
use super::perm::Perm;

/// A conjugacy class, represented by its lexicographically least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub representative: Perm,
    pub size: usize,
    pub element_order: u64,
    pub cycle_type: Vec<usize>,
}

/// Conjugacy classes together with the element table they were computed from.
#[derive(Clone)]
pub struct ClassPartition {
    pub table: ElementTable,
    pub classes: Vec<ConjClass>,
    /// Class index of each element of `table`.
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn class_of_perm(&self, p: &Perm) -> Option<usize> {
        self.table.index_of(p).map(|i| self.class_of[i])
    }

    /// Index of the class containing the inverses of class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        let rep = &self.classes[c].representative;
        self.class_of_perm(&rep.inverse()).expect("inverse lies in the group")
    }

    /// Class of `rep^k` for the representative of class `c`.
    pub fn power_class(&self, c: usize, k: u64) -> usize {
        let rep = &self.classes[c].representative;
        self.class_of_perm(&rep.pow(k)).expect("power lies in the group")
    }
}

/// Conjugacy classes ordered by (element order, class size, cycle type, representative).
pub fn conjugacy_classes(group: &PermGroup, limits: &Limits) -> Result<Vec<ConjClass>> {
    Ok(class_partition(group, limits)?.classes)
}

pub fn class_partition(group: &PermGroup, limits: &Limits) -> Result<ClassPartition> {
    let order = group.order();
    if order > limits.chartab_limit {
        return Err(Error::limit("group order for conjugacy classes", order, limits.chartab_limit));
    }
    let table = ElementTable::new(group, limits)?;
    let n = table.len();
    let mut raw_class = vec![usize::MAX; n];
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let gens: Vec<Perm> = group.generators().to_vec();
    for start in 0..n {
        if raw_class[start] != usize::MAX {
            continue;
        }
        let id = raw.len();
        raw_class[start] = id;
        let mut members = vec![start];
        let mut i = 0;
        while i < members.len() {
            let x = &table.elements[members[i]];
            for g in &gens {
                let y = x.conjugate_by(g);
                let j = table.index_of(&y).expect("conjugate lies in the group");
                if raw_class[j] == usize::MAX {
                    raw_class[j] = id;
                    members.push(j);
                }
            }
            i += 1;
        }
        raw.push(members);
    }
    let mut classes: Vec<(ConjClass, usize)> = raw
        .iter()
        .enumerate()
        .map(|(id, members)| {
            let rep = members
                .iter()
                .map(|&m| &table.elements[m])
                .min()
                .expect("non-empty class")
                .clone();
            (
                ConjClass {
                    element_order: rep.order(),
                    cycle_type: rep.cycle_type(),
                    size: members.len(),
                    representative: rep,
                },
                id,
            )
        })
        .collect();
    classes.sort_by(|(a, _), (b, _)| {
        (a.element_order, a.size, &a.cycle_type, &a.representative).cmp(&(
            b.element_order,
            b.size,
            &b.cycle_type,
            &b.representative,
        ))
    });
    let mut remap = vec![0; classes.len()];
    for (new, (_, old)) in classes.iter().enumerate() {
        remap[*old] = new;
    }
    let class_of = raw_class.into_iter().map(|c| remap[c]).collect();
    Ok(ClassPartition {
        table,
        classes: classes.into_iter().map(|(c, _)| c).collect(),
        class_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let cls = conjugacy_classes(&PermGroup::symmetric(3), &Limits::default()).unwrap();
        let sizes: Vec<usize> = cls.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert!(cls[0].representative.is_identity());
    }

    #[test]
    fn cyclic_group_is_abelian() {
        let c4 = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap()]).unwrap();
        let cls = conjugacy_classes(&c4, &Limits::default()).unwrap();
        assert_eq!(cls.len(), 4);
        assert_eq!(conjugacy_classes(&PermGroup::trivial(3), &Limits::default()).unwrap().len(), 1);
    }

    #[test]
    fn class_sizes_sum_to_order() {
        let g = PermGroup::symmetric(5);
        let cls = conjugacy_classes(&g, &Limits::default()).unwrap();
        assert_eq!(cls.len(), 7);
        assert_eq!(cls.iter().map(|c| c.size as u128).sum::<u128>(), g.order());
    }
}
