//! Multi-indices over the interaction components, with the componentwise
//! partial order and the combinatorial helpers the renormalization layer
//! needs (factorials, binomials, box enumeration, lower sets).

use crate::rational::{rat_int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        MultiIndex(parts)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Order `|beta| = sum_i beta_i`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise `self <= other` with `self != other`.
    pub fn lt(&self, other: &MultiIndex) -> bool {
        self.le(other) && self != other
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; requires `other <= self`.
    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        assert!(other.le(self), "multi-index subtraction underflow");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|&b| b % 2 == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i] > 0).collect()
    }

    /// `beta! = prod_i beta_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&b| factorial(b)).product()
    }

    /// `C(self, other) = prod_i C(self_i, other_i)`; zero unless `other <= self`.
    pub fn binomial(&self, other: &MultiIndex) -> BigInt {
        if !other.le(self) {
            return BigInt::zero();
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| binomial(a, b))
            .product()
    }

    /// Inner product with a rational vector.
    pub fn dot(&self, r: &[Rat]) -> Rat {
        debug_assert_eq!(self.dim(), r.len());
        self.0
            .iter()
            .zip(r)
            .map(|(&b, ri)| rat_int(b as i64) * ri)
            .sum()
    }

    pub fn dot_u32(&self, r: &[u32]) -> u64 {
        debug_assert_eq!(self.dim(), r.len());
        self.0
            .iter()
            .zip(r)
            .map(|(&b, &ri)| b as u64 * ri as u64)
            .sum()
    }

    /// All `gamma` with `gamma <= self`, in lexicographic order.
    pub fn box_below(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.dim()];
        loop {
            out.push(MultiIndex(cur.clone()));
            let mut i = self.dim();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.0[i] {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Double factorial `(n)!! = n (n-2) (n-4) ...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    if n <= 0 {
        return BigInt::one();
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

/// Strict lower closure `{beta : beta < xi for some xi in generators}`,
/// sorted. Contains the origin whenever some generator is nonzero.
pub fn strict_lower_set(generators: &[MultiIndex]) -> Vec<MultiIndex> {
    let mut out = BTreeSet::new();
    for g in generators {
        for beta in g.box_below() {
            if beta.lt(g) {
                out.insert(beta);
            }
        }
    }
    out.into_iter().collect()
}
