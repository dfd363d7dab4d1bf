//! Arithmetic and linear algebra over prime fields `F_p` with `p < 2^32`.

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverting zero mod {p}");
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime `p > lower` with `p ≡ 1 (mod e)`.
pub fn prime_one_mod(e: u64, lower: u64) -> u64 {
    let mut p = lower / e * e + 1;
    if p <= lower {
        p += e;
    }
    while !is_prime(p) {
        p += e;
    }
    p
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .unwrap_or(1)
}

/// Dense square or rectangular matrix, row-major.
pub type Matrix = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn row_reduce(m: &mut Matrix, p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, sel);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rref = m.clone();
    let pivots = row_reduce(&mut rref, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in rref.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI - a)`, constant term first, via Hessenberg reduction.
pub fn char_poly(a: &Matrix, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.clone();
    // similarity transform to upper Hessenberg form
    for k in 0..n.saturating_sub(2) {
        let Some(sel) = (k + 1..n).find(|&i| h[i][k] != 0) else {
            continue;
        };
        if sel != k + 1 {
            h.swap(sel, k + 1);
            for row in h.iter_mut() {
                row.swap(sel, k + 1);
            }
        }
        let inv = inv_mod(h[k + 1][k], p);
        for i in k + 2..n {
            let f = h[i][k] * inv % p;
            if f == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + (p - f) * h[k + 1][j]) % p;
            }
            for row in h.iter_mut() {
                row[k + 1] = (row[k + 1] + f * row[i]) % p;
            }
        }
    }
    // polys[m] = char poly of leading m×m block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        // (x - h[m-1][m-1]) * polys[m-1]
        for (i, &c) in polys[m - 1].iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + (p - h[m - 1][m - 1]) * c % p) % p;
        }
        let mut prod = 1u64;
        for i in (1..m).rev() {
            prod = prod * h[i][i - 1] % p;
            if prod == 0 {
                break;
            }
            let coef = prod * h[i - 1][m - 1] % p;
            for (j, &c) in polys[i - 1].iter().enumerate() {
                next[j] = (next[j] + (p - coef) * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n+1 polynomials")
}

pub fn eval_poly(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Distinct roots of `poly` in `F_p`, by exhaustive search (`p` is small here).
pub fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| eval_poly(poly, x, p) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_roots() {
        assert_eq!(prime_one_mod(6, 10), 13);
        assert_eq!(prime_one_mod(4, 100), 101);
        let g = primitive_root(13);
        let mut seen: Vec<u64> = (1..13).map(|k| pow_mod(g, k, 13)).collect();
        seen.sort();
        assert_eq!(seen, (1..13).collect::<Vec<_>>());
    }

    #[test]
    fn nullspace_dimension() {
        let p = 7;
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ns = nullspace(&m, 3, p);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % p, 0);
        }
    }

    fn det(m: &Matrix, p: u64) -> u64 {
        // Leibniz expansion for tiny matrices
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0u64;
        loop {
            let mut sign = 1i64;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        sign = -sign;
                    }
                }
            }
            let prod = (0..n).fold(1u64, |a, i| a * m[i][perm[i]] % p);
            total = if sign > 0 { (total + prod) % p } else { (total + p - prod) % p };
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    #[test]
    fn char_poly_matches_determinant() {
        let p = 101;
        let a: Matrix = vec![
            vec![3, 1, 4, 1],
            vec![5, 9, 2, 6],
            vec![5, 3, 5, 8],
            vec![9, 7, 9, 3],
        ];
        let cp = char_poly(&a, p);
        assert_eq!(cp.len(), 5);
        for x in [0u64, 1, 2, 17, 50] {
            let shifted: Matrix = (0..4)
                .map(|i| (0..4).map(|j| ((if i == j { x } else { 0 }) + p - a[i][j]) % p).collect())
                .collect();
            assert_eq!(eval_poly(&cp, x, p), det(&shifted, p));
        }
    }
}
