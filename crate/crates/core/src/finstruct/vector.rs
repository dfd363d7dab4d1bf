use std::collections::{HashMap, HashSet};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

use super::{
    brute_automorphisms, brute_canonical, check_measure, push_len, Amalgam, Canonical, ClassId, ClosedSignature,
    FinStructure, FixedElements, FraisseClass, Payload,
};

/// Finite-dimensional vector spaces over `F_q`; the homogeneous limit is the
/// countable-dimensional space. Substructures are subspaces, `acl` is the span.
pub struct VectorSpaceClass {
    pub q: u8,
}

fn payload(s: &FinStructure) -> (u8, usize, &[Vec<u8>]) {
    match &s.data {
        Payload::Vector { q, dim, vectors } => (*q, *dim, vectors),
        _ => unreachable!("validated vector payload"),
    }
}

fn inv_mod(a: u8, q: u8) -> u8 {
    (1..q).find(|&x| (a as u16 * x as u16) % q as u16 == 1).expect("field element is invertible")
}

/// Row reduction in place; zero rows are dropped. Returns pivot columns.
fn rref(rows: &mut Vec<Vec<u8>>, q: u8) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let qq = q as u16;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = inv_mod(rows[r][c], q) as u16;
        for x in rows[r].iter_mut() {
            *x = (*x as u16 * inv % qq) as u8;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c] as u16;
                for j in 0..cols {
                    rows[i][j] = ((rows[i][j] as u16 + (qq - f) * rows[r][j] as u16) % qq) as u8;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Reduced basis of the span of `vectors`, with its pivot coordinates.
fn span_basis(vectors: &[Vec<u8>], q: u8) -> (Vec<Vec<u8>>, Vec<usize>) {
    let mut rows = vectors.to_vec();
    let pivots = rref(&mut rows, q);
    (rows, pivots)
}

fn digits(mut idx: usize, q: u8, d: usize) -> Vec<u8> {
    (0..d)
        .map(|_| {
            let c = (idx % q as usize) as u8;
            idx /= q as usize;
            c
        })
        .collect()
}

fn index_of(coeffs: &[u8], q: u8) -> usize {
    coeffs.iter().rev().fold(0, |acc, &c| acc * q as usize + c as usize)
}

fn combine(coeffs: &[u8], basis: &[Vec<u8>], dim: usize, q: u8) -> Vec<u8> {
    let mut v = vec![0u16; dim];
    for (c, b) in coeffs.iter().zip(basis) {
        for (x, &y) in v.iter_mut().zip(b) {
            *x = (*x + *c as u16 * y as u16) % q as u16;
        }
    }
    v.into_iter().map(|x| x as u8).collect()
}

/// Every vector of the span, listed by coordinate index over the reduced basis.
fn span_vectors(basis: &[Vec<u8>], dim: usize, q: u8) -> Vec<Vec<u8>> {
    let d = basis.len();
    (0..(q as usize).pow(d as u32))
        .map(|idx| combine(&digits(idx, q, d), basis, dim, q))
        .collect()
}

/// `F_q^d` with points listed by coordinate index.
pub(crate) fn standard_space(q: u8, d: usize) -> FinStructure {
    let vectors = (0..(q as usize).pow(d as u32)).map(|i| digits(i, q, d)).collect();
    FinStructure::vectors(q, d, vectors)
}

/// All reduced row echelon matrices with `k` columns (any rank), given by columns.
fn echelon_matrices(q: u8, k: usize) -> Vec<(usize, Vec<Vec<u8>>)> {
    let mut out = Vec::new();
    for d in 0..=k {
        let mut pivots: Vec<usize> = (0..d).collect();
        loop {
            // free entries: row r, column c > pivot r, c not a pivot
            let free: Vec<(usize, usize)> = (0..d)
                .flat_map(|r| {
                    let p = &pivots;
                    (p[r] + 1..k).filter(move |c| !p.contains(c)).map(move |c| (r, c))
                })
                .collect();
            for assign in 0..(q as usize).pow(free.len() as u32) {
                let vals = digits(assign, q, free.len());
                let mut m = vec![vec![0u8; k]; d];
                for (r, &p) in pivots.iter().enumerate() {
                    m[r][p] = 1;
                }
                for (&(r, c), &v) in free.iter().zip(&vals) {
                    m[r][c] = v;
                }
                let columns = (0..k).map(|c| (0..d).map(|r| m[r][c]).collect()).collect();
                out.push((d, columns));
            }
            // next combination of pivot columns
            let Some(i) = (0..d).rev().find(|&i| pivots[i] < k - d + i) else {
                break;
            };
            pivots[i] += 1;
            for j in i + 1..d {
                pivots[j] = pivots[j - 1] + 1;
            }
        }
    }
    out
}

fn rank(vectors: &[Vec<u8>], q: u8) -> usize {
    span_basis(vectors, q).0.len()
}

/// Points of `vectors` chosen greedily as a basis of their span, and the
/// coordinates of every point over that basis.
fn point_basis(vectors: &[Vec<u8>], q: u8) -> (Vec<usize>, Vec<Vec<u8>>) {
    let mut chosen: Vec<usize> = Vec::new();
    let mut picked: Vec<Vec<u8>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        picked.push(v.clone());
        if rank(&picked, q) > chosen.len() {
            chosen.push(i);
        } else {
            picked.pop();
        }
    }
    let r = chosen.len();
    let dim = vectors.first().map_or(0, Vec::len);
    let basis: Vec<Vec<u8>> = chosen.iter().map(|&i| vectors[i].clone()).collect();
    let table: HashMap<Vec<u8>, Vec<u8>> = (0..(q as usize).pow(r as u32))
        .map(|idx| {
            let c = digits(idx, q, r);
            (combine(&c, &basis, dim, q), c)
        })
        .collect();
    let coords = vectors.iter().map(|v| table[v].clone()).collect();
    (chosen, coords)
}

impl VectorSpaceClass {
    fn empty(&self) -> FinStructure {
        FinStructure::vectors(self.q, 0, Vec::new())
    }

    fn is_closed(&self, s: &FinStructure) -> bool {
        let (q, _, vectors) = payload(s);
        (q as usize).pow(rank(vectors, q) as u32) == vectors.len()
    }

    /// Coordinate index of every point over the reduced basis of a closed structure.
    fn closed_labels(&self, s: &FinStructure) -> (usize, Vec<usize>) {
        let (q, _, vectors) = payload(s);
        let (basis, pivots) = span_basis(vectors, q);
        let labels = vectors
            .iter()
            .map(|v| index_of(&pivots.iter().map(|&p| v[p]).collect::<Vec<_>>(), q))
            .collect();
        (basis.len(), labels)
    }

    /// Generators of `GL(d, q)` acting on coordinate vectors.
    fn general_linear_generators(&self, d: usize) -> Vec<Box<dyn Fn(&[u8]) -> Vec<u8>>> {
        let q = self.q;
        let mut gens: Vec<Box<dyn Fn(&[u8]) -> Vec<u8>>> = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    gens.push(Box::new(move |c: &[u8]| {
                        let mut v = c.to_vec();
                        v[i] = ((v[i] as u16 + v[j] as u16) % q as u16) as u8;
                        v
                    }));
                }
            }
        }
        if d > 0 && q > 2 {
            let omega = (2..q)
                .find(|&w| (1..q - 1).all(|e| (w as u32).pow(e as u32) % q as u32 != 1))
                .unwrap_or(1);
            gens.push(Box::new(move |c: &[u8]| {
                let mut v = c.to_vec();
                v[0] = ((v[0] as u16 * omega as u16) % q as u16) as u8;
                v
            }));
        }
        gens
    }
}

impl FraisseClass for VectorSpaceClass {
    fn id(&self) -> ClassId {
        ClassId::VectorSpace { q: self.q }
    }

    fn is_relational(&self) -> bool {
        false
    }

    fn fixed_elements(&self) -> FixedElements {
        FixedElements::ZeroVector
    }

    fn is_fixed_point(&self, s: &FinStructure, i: usize) -> bool {
        payload(s).2[i].iter().all(|&c| c == 0)
    }

    fn size_measure(&self, s: &FinStructure) -> usize {
        let (q, _, vectors) = payload(s);
        rank(vectors, q)
    }

    /// Reduced echelon form of the matrix whose columns are the points; it does
    /// not depend on the ambient coordinates.
    fn labeled_code(&self, s: &FinStructure) -> Vec<u8> {
        let (q, dim, vectors) = payload(s);
        let k = vectors.len();
        let mut rows: Vec<Vec<u8>> = (0..dim).map(|r| vectors.iter().map(|v| v[r]).collect()).collect();
        rref(&mut rows, q);
        let mut code = vec![0, q];
        push_len(&mut code, rows.len());
        push_len(&mut code, k);
        for row in rows {
            code.extend(row);
        }
        code
    }

    fn closure_indices(&self, s: &FinStructure, subset: &[usize]) -> Vec<usize> {
        let (q, dim, vectors) = payload(s);
        let chosen: Vec<Vec<u8>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        let (basis, _) = span_basis(&chosen, q);
        let span: HashSet<Vec<u8>> = span_vectors(&basis, dim, q).into_iter().collect();
        (0..vectors.len()).filter(|&i| span.contains(&vectors[i])).collect()
    }

    fn closure(&self, s: &FinStructure, subset: &[usize]) -> Result<FinStructure> {
        let (q, dim, vectors) = payload(s);
        let chosen: Vec<Vec<u8>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        let (basis, _) = span_basis(&chosen, q);
        let names: HashMap<&Vec<u8>, &String> = vectors.iter().zip(&s.points).collect();
        let mut taken: HashSet<String> = s.points.iter().cloned().collect();
        let span = span_vectors(&basis, dim, q);
        let points = span
            .iter()
            .map(|v| match names.get(v) {
                Some(n) => (*n).clone(),
                None => {
                    let mut name: String = std::iter::once('v').chain(v.iter().map(|c| (b'0' + c) as char)).collect();
                    while !taken.insert(name.clone()) {
                        name.push('\'');
                    }
                    name
                }
            })
            .collect();
        Ok(FinStructure {
            class: s.class,
            points,
            data: Payload::Vector { q, dim, vectors: span },
        })
    }

    fn is_acl_closed(&self, s: &FinStructure) -> Result<bool> {
        self.validate(s)?;
        Ok(self.is_closed(s))
    }

    fn canonical_form(&self, s: &FinStructure) -> Result<Canonical> {
        self.validate(s)?;
        if !self.is_closed(s) {
            return brute_canonical(self, s);
        }
        let (d, relabel) = self.closed_labels(s);
        let mut code = vec![1, self.q];
        push_len(&mut code, d);
        Ok(Canonical {
            code: hex::encode(code),
            relabel,
        })
    }

    fn canonical_structure(&self, s: &FinStructure) -> Result<FinStructure> {
        self.validate(s)?;
        if self.is_closed(s) {
            return Ok(standard_space(self.q, self.size_measure(s)));
        }
        let c = self.canonical_form(s)?;
        let mut out = s.permuted(&c.relabel);
        out.points = super::index_names(out.len());
        Ok(out)
    }

    fn automorphisms(&self, s: &FinStructure) -> Result<PermGroup> {
        self.validate(s)?;
        if !self.is_closed(s) {
            return brute_automorphisms(self, s);
        }
        let (d, labels) = self.closed_labels(s);
        let mut orig = vec![0usize; labels.len()];
        for (i, &l) in labels.iter().enumerate() {
            orig[l] = i;
        }
        let gens = self
            .general_linear_generators(d)
            .iter()
            .map(|g| {
                let images = labels
                    .iter()
                    .map(|&l| orig[index_of(&g(&digits(l, self.q, d)), self.q)] as u32)
                    .collect();
                Perm::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(s.len(), gens)
    }

    fn enumerate(&self, k: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        check_measure("vector space dimension", k, limits.max_dim)?;
        let mut out = vec![self.empty()];
        out.extend((0..=k).map(|d| standard_space(self.q, d)));
        Ok(out)
    }

    fn closed_structures(&self, max_points: usize, limits: &Limits) -> Result<Vec<FinStructure>> {
        let mut out = Vec::new();
        let mut d = 0;
        while (self.q as usize).pow(d as u32) <= max_points {
            check_measure("vector space dimension", d, limits.max_dim)?;
            out.push(standard_space(self.q, d));
            d += 1;
        }
        Ok(out)
    }

    fn labeled_cores(&self, k: usize, x0_only: bool, _limits: &Limits) -> Result<Vec<FinStructure>> {
        let mut out = Vec::new();
        for (d, columns) in echelon_matrices(self.q, k) {
            let distinct: HashSet<&Vec<u8>> = columns.iter().collect();
            if distinct.len() != k {
                continue;
            }
            if x0_only && columns.iter().any(|c| c.iter().all(|&x| x == 0)) {
                continue;
            }
            out.push(FinStructure::vectors(self.q, d, columns));
        }
        Ok(out)
    }

    fn closure_signature(&self, core: &FinStructure) -> Result<ClosedSignature> {
        let d = self.size_measure(core);
        let mut code = vec![1, self.q];
        push_len(&mut code, d);
        Ok(ClosedSignature {
            code: hex::encode(code),
            points: (self.q as usize).pow(d as u32),
        })
    }

    fn amalgams(&self, b: &FinStructure, c: &FinStructure) -> Result<Vec<Amalgam>> {
        let q = self.q;
        let (_, _, bv) = payload(b);
        let (_, _, cv) = payload(c);
        let (b_basis, b_coords) = point_basis(bv, q);
        let (c_basis, c_coords) = point_basis(cv, q);
        let (rb, rc) = (b_basis.len(), c_basis.len());
        if rb + rc > 8 {
            return Err(Error::limit("joint dimension of a vector space amalgam", (rb + rc) as u128, 8u128));
        }
        let mut out = Vec::new();
        for (u, columns) in echelon_matrices(q, rb + rc) {
            if rank(&columns[..rb], q) != rb || rank(&columns[rb..], q) != rc {
                continue;
            }
            let mut vectors: Vec<Vec<u8>> = Vec::new();
            let mut place = |v: Vec<u8>| match vectors.iter().position(|w| *w == v) {
                Some(p) => p,
                None => {
                    vectors.push(v);
                    vectors.len() - 1
                }
            };
            let left: Vec<usize> = b_coords.iter().map(|co| place(combine(co, &columns[..rb], u, q))).collect();
            let right: Vec<usize> = c_coords.iter().map(|co| place(combine(co, &columns[rb..], u, q))).collect();
            out.push(Amalgam {
                structure: FinStructure::vectors(q, u, vectors),
                left,
                right,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_counts_are_gaussian_binomials() {
        // Σ_d [k d]_2 for k = 0..4
        let totals: Vec<usize> = (0..5).map(|k| echelon_matrices(2, k).len()).collect();
        assert_eq!(totals, vec![1, 2, 5, 16, 67]);
    }

    #[test]
    fn span_and_labels() {
        let vs = VectorSpaceClass { q: 3 };
        let s = standard_space(3, 2);
        assert!(vs.is_closed(&s));
        let (d, labels) = vs.closed_labels(&s);
        assert_eq!(d, 2);
        assert_eq!(labels, (0..9).collect::<Vec<_>>());
    }
}
