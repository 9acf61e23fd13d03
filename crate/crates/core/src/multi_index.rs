//! Exponent vectors and the multi-index conventions `|a|`, `a!`, `binom(a, b)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Index, Range};

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

use crate::rational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 8]>);

impl MultiIndex {
    pub fn zeros(len: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, len))
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut m = Self::zeros(len);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(e: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn set(&mut self, i: usize, v: u32) {
        self.0[i] = v;
    }

    /// `|a|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of the exponents in a block of positions.
    pub fn degree_in(&self, r: Range<usize>) -> u32 {
        self.0[r].iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `a!` = product of the entry factorials.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &e| acc * rational::factorial(e))
    }

    /// `binom(a, b)` = product of entrywise binomials; zero unless `b <= a`.
    pub fn binomial(&self, b: &MultiIndex) -> BigInt {
        self.0
            .iter()
            .zip(b.0.iter())
            .fold(BigInt::one(), |acc, (&x, &y)| {
                acc * rational::binomial(x, y)
            })
    }

    /// Entrywise `self <= other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(MultiIndex)
    }

    /// All `b` with `b <= self` entrywise, in no particular order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(self.len())];
        for (i, &e) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for base in &out {
                for k in 0..=e {
                    let mut m = base.clone();
                    m.0[i] = k;
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// All exponent vectors of length `len` with `|a| = degree`.
    pub fn all_of_degree(len: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(pos: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur.0[pos] = left;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur.0[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
        }
        if len == 0 {
            return if degree == 0 {
                vec![MultiIndex::zeros(0)]
            } else {
                Vec::new()
            };
        }
        let mut out = Vec::new();
        rec(0, degree, &mut MultiIndex::zeros(len), &mut out);
        out
    }

    /// All exponent vectors of length `len` with `|a| <= max_degree`.
    pub fn all_up_to(len: usize, max_degree: u32) -> Vec<MultiIndex> {
        (0..=max_degree)
            .flat_map(|d| Self::all_of_degree(len, d))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &u32> {
        self.0.iter()
    }
}

impl Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// Graded lexicographic: total degree first, then the earlier variable
/// with the larger exponent wins.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_slice(e)
    }

    #[test]
    fn conventions() {
        let a = mi(&[2, 0, 3]);
        assert_eq!(a.degree(), 5);
        assert_eq!(a.factorial(), BigInt::from(12));
        assert_eq!(a.binomial(&mi(&[1, 0, 2])), BigInt::from(6));
        assert_eq!(a.binomial(&mi(&[3, 0, 0])), BigInt::from(0));
        assert!(mi(&[1, 0, 2]).divides(&a));
        assert_eq!(a.checked_sub(&mi(&[0, 1, 0])), None);
    }

    #[test]
    fn grlex_order() {
        assert!(mi(&[0, 2]) > mi(&[1, 0]));
        assert!(mi(&[2, 0]) > mi(&[1, 1]));
        assert!(mi(&[1, 1]) > mi(&[0, 2]));
    }

    #[test]
    fn enumeration_counts() {
        // C(d + n - 1, n - 1)
        assert_eq!(MultiIndex::all_of_degree(3, 4).len(), 15);
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(mi(&[2, 1]).sub_indices().len(), 6);
        assert_eq!(MultiIndex::all_of_degree(0, 0).len(), 1);
    }
}
