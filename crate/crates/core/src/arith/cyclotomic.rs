use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Coefficient ring for [`Cyclotomic`]: any exact signed integer type.
pub trait CycCoeff:
    Clone + Integer + Signed + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync
{
}

impl<T> CycCoeff for T where
    T: Clone + Integer + Signed + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + Send + Sync
{
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_div(&num, &div);
        }
    }
    let arc = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    debug_assert!(lead == 1);
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `Z[ζ_e]`, stored in the power basis `1, ζ, …, ζ^(φ(e)-1)`.
///
/// The representation is reduced modulo the cyclotomic polynomial, so equality of
/// coefficient vectors is equality of numbers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cyclotomic<T> {
    order: u32,
    coeffs: Vec<T>,
}

impl<T: CycCoeff> Cyclotomic<T> {
    fn phi_degree(order: u32) -> usize {
        cyclotomic_polynomial(order).len() - 1
    }

    /// Reduces a polynomial in ζ (any length) modulo `x^e - 1` and `Φ_e`.
    pub fn from_poly(order: u32, poly: &[T]) -> Self {
        let e = order as usize;
        let mut wrapped = vec![T::zero(); e];
        for (i, c) in poly.iter().enumerate() {
            wrapped[i % e] = wrapped[i % e].clone() + c.clone();
        }
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        for i in (deg..e).rev() {
            let c = wrapped[i].clone();
            if !c.is_zero() {
                for (j, &p) in phi.iter().enumerate() {
                    let idx = i - deg + j;
                    wrapped[idx] = wrapped[idx].clone() - c.clone() * T::from_i64(p).unwrap();
                }
            }
        }
        wrapped.truncate(deg);
        Cyclotomic {
            order,
            coeffs: wrapped,
        }
    }

    pub fn integer(order: u32, n: T) -> Self {
        let mut coeffs = vec![T::zero(); Self::phi_degree(order)];
        coeffs[0] = n;
        Cyclotomic { order, coeffs }
    }

    pub fn zero(order: u32) -> Self {
        Self::integer(order, T::zero())
    }

    pub fn one(order: u32) -> Self {
        Self::integer(order, T::one())
    }

    /// `ζ_e^k`.
    pub fn root_power(order: u32, k: u64) -> Self {
        let e = order as u64;
        let mut poly = vec![T::zero(); order as usize];
        poly[(k % e) as usize] = T::one();
        Self::from_poly(order, &poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Complex conjugate: `ζ ↦ ζ^-1`.
    pub fn conj(&self) -> Self {
        let e = self.order as usize;
        let mut poly = vec![T::zero(); e];
        for (k, c) in self.coeffs.iter().enumerate() {
            let idx = (e - k) % e;
            poly[idx] = poly[idx].clone() + c.clone();
        }
        Self::from_poly(self.order, &poly)
    }

    pub fn scale(&self, s: &T) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// Exact division by a rational integer, if every coefficient is divisible.
    pub fn div_exact(&self, d: &T) -> Option<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Cyclotomic {
            order: self.order,
            coeffs,
        })
    }

    /// Numerical value `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let e = self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / e;
            (re + c * angle.cos(), im + c * angle.sin())
        })
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "cyclotomic numbers over different fields");
    }
}

impl<T: CycCoeff> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: Self) -> Cyclotomic<T> {
        self.check_order(rhs);
        Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: CycCoeff> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        self + &(-rhs)
    }
}

impl<T: CycCoeff> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: CycCoeff> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        self.check_order(rhs);
        let n = self.coeffs.len();
        let mut poly = vec![T::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                poly[i + j] = poly[i + j].clone() + a.clone() * b.clone();
            }
        }
        Cyclotomic::from_poly(self.order, &poly)
    }
}

impl<T: CycCoeff> Ord for Cyclotomic<T> {
    /// Lexicographic order on reduced coefficient vectors (a bookkeeping order,
    /// not a field order).
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, &self.coeffs).cmp(&(other.order, &other.coeffs))
    }
}

impl<T: CycCoeff> PartialOrd for Cyclotomic<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: CycCoeff> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: CycCoeff> fmt::Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*z{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Cyclotomic<i64>;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for e in [2u32, 3, 4, 6, 12] {
            let mut s = C::zero(e);
            for k in 0..e as u64 {
                s = &s + &C::root_power(e, k);
            }
            assert!(s.is_zero(), "order {e}");
        }
    }

    #[test]
    fn conjugation_and_products() {
        let z = C::root_power(5, 1);
        let zc = z.conj();
        assert_eq!(&z * &zc, C::one(5));
        assert_eq!(C::root_power(6, 3), C::integer(6, -1));
        let w = C::root_power(3, 1);
        // 1 + w + w^2 = 0  =>  w^2 = -1 - w
        assert_eq!(&w * &w, &C::integer(3, -1) - &w);
    }

    #[test]
    fn complex_value() {
        let (re, im) = C::root_power(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }
}
