//! Independent counts used by the self-test. Nothing here calls the engine.

use std::collections::{BTreeMap, BTreeSet};

/// Stirling numbers of the second kind by the usual recurrence.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for i in 1..=n {
        let mut next = vec![0u64; i + 1];
        for j in 1..=i {
            let stay = if j < i { j as u64 * row[j] } else { 0 };
            next[j] = stay + row[j - 1];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Restricted-growth form of a map `[n] → [n]`: the equality pattern it induces.
fn pattern(values: &[usize]) -> Vec<usize> {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    values
        .iter()
        .map(|v| {
            let next = seen.len();
            *seen.entry(*v).or_insert(next)
        })
        .collect()
}

/// All maps `[n] → [n]`, as digit vectors.
fn all_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(n as u32).max(1);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % n.max(1);
                code /= n.max(1);
                d
            })
            .collect()
    })
}

/// Bell numbers by counting distinct equality patterns of all `n`-tuples.
pub fn bell_brute(n: usize) -> usize {
    all_maps(n).map(|m| pattern(&m)).collect::<BTreeSet<_>>().len()
}

/// Labeled configurations of `n` graph vertices: an equivalence relation on the
/// positions (which coincide) plus an adjacency relation that is irreflexive,
/// symmetric and constant on classes. Counted over all boolean matrices.
pub fn graph_configurations_brute(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    let mut count = 0;
    for eq_mask in 0u32..1 << m {
        let eq = |i: usize, j: usize| {
            i == j || {
                let (a, b) = (i.min(j), i.max(j));
                let idx = pairs.iter().position(|&p| p == (a, b)).unwrap();
                eq_mask >> idx & 1 == 1
            }
        };
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(eq(i, j) && eq(j, k)) || eq(i, k))));
        if !transitive {
            continue;
        }
        for adj_mask in 0u32..1 << m {
            let adj = |i: usize, j: usize| {
                i != j && {
                    let (a, b) = (i.min(j), i.max(j));
                    let idx = pairs.iter().position(|&p| p == (a, b)).unwrap();
                    adj_mask >> idx & 1 == 1
                }
            };
            let ok = (0..n).all(|i| {
                (0..n).all(|j| {
                    (!eq(i, j) || !adj(i, j)) && (0..n).all(|k| !eq(j, k) || adj(i, j) == adj(i, k))
                })
            });
            count += usize::from(ok);
        }
    }
    count
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Degrees of the irreducible characters of `S_k` by the hook length formula, sorted.
pub fn symmetric_degrees(k: usize) -> Vec<u64> {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    let mut out: Vec<u64> = partitions(k, k)
        .into_iter()
        .map(|shape| {
            let mut hooks = 1u64;
            for (i, &row) in shape.iter().enumerate() {
                for j in 0..row {
                    let arm = row - j - 1;
                    let leg = shape[i + 1..].iter().filter(|&&r| r > j).count();
                    hooks *= (arm + leg + 1) as u64;
                }
            }
            fact(k) / hooks
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!((0..=5).map(bell_brute).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52]);
        assert_eq!(stirling2(5, 2), 15);
        assert_eq!(stirling2(0, 0), 1);
        assert_eq!(symmetric_degrees(4), vec![1, 1, 2, 3, 3]);
        // Σ_k S(3,k)·2^{C(k,2)} = 1 + 6 + 8
        assert_eq!((1..=3).map(graph_configurations_brute).collect::<Vec<_>>(), vec![1, 3, 15]);
    }
}
