use std::collections::HashMap;

use serde::Serialize;

use crate::arith::CycInt;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

use super::table::CharacterTable;

/// A class function of the group of a [`CharacterTable`], one exact value per class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassFunction {
    pub values: Vec<CycInt>,
}

impl ClassFunction {
    pub fn from_integers(exponent: u32, values: &[i64]) -> Self {
        ClassFunction {
            values: values.iter().map(|&v| CycInt::integer(exponent, v)).collect(),
        }
    }

    pub fn trivial(table: &CharacterTable) -> Self {
        Self::from_integers(table.exponent(), &vec![1; table.classes().len()])
    }

    pub fn character(table: &CharacterTable, index: usize) -> Self {
        ClassFunction {
            values: table.characters()[index].clone(),
        }
    }

    /// Integer values, if every value is rational.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.values.iter().map(CycInt::as_integer).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        ClassFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ClassFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }
}

/// A finite action of the group whose character is wanted.
#[derive(Debug, Clone, Copy)]
pub enum Action<'a> {
    /// The group's own action on its points.
    Natural,
    /// Left multiplication on the group itself.
    Regular,
    /// Left multiplication on the cosets `G/K` of a subgroup.
    Cosets(&'a PermGroup),
    /// The action in which generator `i` of the group acts as `images[i]`.
    GeneratorImages(&'a [Perm]),
}

/// Permutation character: the value at a class is the number of points fixed by
/// its representative.
pub fn perm_character(table: &CharacterTable, action: Action<'_>) -> Result<ClassFunction> {
    let e = table.exponent();
    let order = table.order() as i64;
    let classes = table.classes();
    let values: Vec<i64> = match action {
        Action::Natural => classes
            .iter()
            .map(|c| c.representative.fixed_points() as i64)
            .collect(),
        Action::Regular => classes
            .iter()
            .map(|c| if c.representative.is_identity() { order } else { 0 })
            .collect(),
        Action::Cosets(sub) => {
            if !sub.is_subgroup_of(table.group()) {
                return Err(Error::NotASubgroup("coset action of a non-subgroup".into()));
            }
            // fix(g) = |C_G(g)| · |g^G ∩ K| / |K|
            let mut meet = vec![0i64; classes.len()];
            let part = table.partition();
            for k in sub.elements(&crate::config::Limits {
                element_limit: u128::MAX,
                ..Default::default()
            })? {
                meet[part.class_of_perm(&k).expect("K ≤ G")] += 1;
            }
            let k_order = sub.order() as i64;
            classes
                .iter()
                .zip(&meet)
                .map(|(c, &m)| order / c.size as i64 * m / k_order)
                .collect()
        }
        Action::GeneratorImages(images) => generator_image_character(table, images)?,
    };
    Ok(ClassFunction::from_integers(e, &values))
}

fn generator_image_character(table: &CharacterTable, images: &[Perm]) -> Result<Vec<i64>> {
    let gens = table.group().generators();
    if images.len() != gens.len() {
        return Err(Error::MalformedStructure(format!(
            "{} generator images for {} generators",
            images.len(),
            gens.len()
        )));
    }
    let degree = images.first().map_or(0, Perm::degree);
    if images.iter().any(|p| p.degree() != degree) {
        return Err(Error::InvalidPermutation("generator images of different degrees".into()));
    }
    // walk the Cayley graph from the identity, carrying the image of each element
    let ident = table.group().identity();
    let mut hom: HashMap<Perm, Perm> = HashMap::new();
    hom.insert(ident.clone(), Perm::identity(degree));
    let mut queue = vec![ident];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i].clone();
        let hx = hom[&x].clone();
        for (g, hg) in gens.iter().zip(images) {
            let y = g.compose(&x);
            let hy = hg.compose(&hx);
            match hom.get(&y) {
                Some(existing) if *existing != hy => {
                    return Err(Error::InvalidPermutation(
                        "generator images do not define a homomorphism".into(),
                    ))
                }
                Some(_) => {}
                None => {
                    hom.insert(y.clone(), hy);
                    queue.push(y);
                }
            }
        }
        i += 1;
    }
    // verify well-definedness on every edge
    for x in &queue {
        for (g, hg) in gens.iter().zip(images) {
            if hom[&g.compose(x)] != hg.compose(&hom[x]) {
                return Err(Error::InvalidPermutation(
                    "generator images do not define a homomorphism".into(),
                ));
            }
        }
    }
    Ok(table
        .classes()
        .iter()
        .map(|c| hom[&c.representative].fixed_points() as i64)
        .collect())
}

/// Multiplicities `⟨χ, χ_i⟩` of every irreducible in `chi`, checked to be
/// non-negative integers that reproduce `chi` exactly.
pub fn decompose(chi: &ClassFunction, table: &CharacterTable) -> Result<Vec<u64>> {
    let r = table.classes().len();
    if chi.values.len() != r {
        return Err(Error::NotACharacter(format!("{} values for {r} classes", chi.values.len())));
    }
    if chi.values.iter().any(|v| v.order() != table.exponent()) {
        return Err(Error::NotACharacter("values live in a different cyclotomic field".into()));
    }
    let order = table.order() as i64;
    let mut mults = Vec::with_capacity(r);
    for (i, row) in table.characters().iter().enumerate() {
        let ip = table.scaled_inner(&chi.values, row);
        let m = ip
            .as_integer()
            .filter(|v| v % order == 0)
            .map(|v| v / order)
            .ok_or_else(|| Error::NotACharacter(format!("inner product with character {i} is not an integer")))?;
        if m < 0 {
            return Err(Error::NotACharacter(format!("negative multiplicity {m} of character {i}")));
        }
        mults.push(m as u64);
    }
    let mut rebuilt = ClassFunction::from_integers(table.exponent(), &vec![0; r]);
    for (m, row) in mults.iter().zip(table.characters()) {
        if *m > 0 {
            let scaled = ClassFunction {
                values: row.iter().map(|v| v.scale(&(*m as i64))).collect(),
            };
            rebuilt = rebuilt.add(&scaled);
        }
    }
    if rebuilt != *chi {
        return Err(Error::NotACharacter("not in the span of the irreducible characters".into()));
    }
    Ok(mults)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::config::Limits;

    fn s3() -> CharacterTable {
        character_table(&PermGroup::symmetric(3), &Limits::default()).unwrap()
    }

    #[test]
    fn permutation_characters() {
        let t = s3();
        let nat = perm_character(&t, Action::Natural).unwrap();
        assert_eq!(nat.as_integers().unwrap(), vec![3, 1, 0]);
        let reg = perm_character(&t, Action::Regular).unwrap();
        assert_eq!(reg.as_integers().unwrap(), vec![6, 0, 0]);
        let point = vec![Perm::identity(1); t.group().generators().len()];
        let triv = perm_character(&t, Action::GeneratorImages(&point)).unwrap();
        assert_eq!(triv.as_integers().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn regular_character_of_c2() {
        let t = character_table(&PermGroup::symmetric(2), &Limits::default()).unwrap();
        let reg = perm_character(&t, Action::Regular).unwrap();
        assert_eq!(reg.as_integers().unwrap(), vec![2, 0]);
    }

    #[test]
    fn decompositions() {
        let t = s3();
        let reg = perm_character(&t, Action::Regular).unwrap();
        assert_eq!(decompose(&reg, &t).unwrap(), vec![1, 1, 2]);
        assert_eq!(decompose(&ClassFunction::trivial(&t), &t).unwrap(), vec![1, 0, 0]);
        let nat = perm_character(&t, Action::Natural).unwrap();
        assert_eq!(decompose(&nat, &t).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn rejects_non_characters() {
        let t = s3();
        let bad = ClassFunction::from_integers(t.exponent(), &[1, 0, 0]);
        assert!(matches!(decompose(&bad, &t), Err(Error::NotACharacter(_))));
        let neg = ClassFunction::from_integers(t.exponent(), &[-1, -1, -1]);
        assert!(matches!(decompose(&neg, &t), Err(Error::NotACharacter(_))));
    }

    #[test]
    fn coset_character_matches_coset_action() {
        let t = s3();
        let sub = PermGroup::new(3, vec![Perm::from_cycles(3, &[&[1, 2]]).unwrap()]).unwrap();
        let by_formula = perm_character(&t, Action::Cosets(&sub)).unwrap();
        let action = crate::permgrp::coset_action(t.group(), &sub, &Limits::default()).unwrap();
        let by_images = perm_character(&t, Action::GeneratorImages(&action.generator_images)).unwrap();
        assert_eq!(by_formula, by_images);
    }
}
