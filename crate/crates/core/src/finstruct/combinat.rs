//! Small combinatorial generators shared by the class plug-ins.

/// All set partitions of `0..n` as restricted growth strings: entry `i` is the
/// block of coordinate `i`, and blocks are numbered in order of first appearance.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(n, cur, max.max(b + 1), out);
            cur.pop();
        }
    }
    rec(n, &mut cur, 0, &mut out);
    out
}

/// Number of blocks of a restricted growth string.
pub fn block_count(pattern: &[usize]) -> usize {
    pattern.iter().max().map_or(0, |m| m + 1)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
        out.push(p.clone());
    }
}

/// All partial injections between `0..a` and `0..b`, as sorted pair lists.
pub fn partial_matchings(a: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; b];
    fn rec(i: usize, a: usize, b: usize, cur: &mut Vec<(usize, usize)>, used: &mut [bool], out: &mut Vec<Vec<(usize, usize)>>) {
        if i == a {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, a, b, cur, used, out);
        for j in 0..b {
            if !used[j] {
                used[j] = true;
                cur.push((i, j));
                rec(i + 1, a, b, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(0, a, b, &mut cur, &mut used, &mut out);
    out
}

/// Restricted growth string of a tuple of point indices, plus its distinct
/// entries in order of first appearance.
pub fn equality_pattern(tuple: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut distinct: Vec<usize> = Vec::new();
    let pattern = tuple
        .iter()
        .map(|x| match distinct.iter().position(|d| d == x) {
            Some(b) => b,
            None => {
                distinct.push(*x);
                distinct.len() - 1
            }
        })
        .collect();
    (pattern, distinct)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let bell: Vec<usize> = (0..6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52]);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        // Σ_j C(2,j)^2 j! = 1 + 4 + 2
        assert_eq!(partial_matchings(2, 2).len(), 7);
    }

    #[test]
    fn pattern_of_tuple() {
        assert_eq!(equality_pattern(&[5, 3, 5, 9]), (vec![0, 1, 0, 2], vec![5, 3, 9]));
    }
}
