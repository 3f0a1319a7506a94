//! Finite sets of rationals and their elementwise set arithmetic.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::conv::{convolve_minus, convolve_plus};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite set of rationals, stored strictly increasing.
///
/// Constructors reject empty input. The empty set only appears as the
/// result of filters such as [`crate::level_set`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRealSet {
    elems: Vec<Rational>,
}

impl FiniteRealSet {
    /// Sorts and deduplicates `values`.
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut elems: Vec<Rational> = values.into_iter().collect();
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(FiniteRealSet { elems })
    }

    pub fn from_integers(values: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(values.into_iter().map(Rational::from))
    }

    pub fn empty() -> Self {
        FiniteRealSet { elems: Vec::new() }
    }

    /// Caller guarantees `elems` is strictly increasing.
    pub(crate) fn from_sorted(elems: Vec<Rational>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FiniteRealSet { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elems
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.elems.iter()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    /// Position of `x` in the sorted element list.
    pub fn index_of(&self, x: &Rational) -> Option<usize> {
        self.elems.binary_search(x).ok()
    }

    pub fn is_subset(&self, other: &FiniteRealSet) -> bool {
        self.elems.iter().all(|x| other.contains(x))
    }

    pub fn min(&self) -> Option<&Rational> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.elems.last()
    }

    /// `A + B = {a + b}`.
    pub fn sumset(&self, other: &FiniteRealSet) -> FiniteRealSet {
        convolve_plus(self, other).support()
    }

    /// `A - B = {a - b}`.
    pub fn difference_set(&self, other: &FiniteRealSet) -> FiniteRealSet {
        // (B∘A)(x) counts a - b = x.
        convolve_minus(other, self).support()
    }

    /// `AB = {a b}`.
    pub fn product_set(&self, other: &FiniteRealSet) -> FiniteRealSet {
        let mut out = BTreeSet::new();
        for a in &self.elems {
            for b in &other.elems {
                out.insert(a * b);
            }
        }
        FiniteRealSet::from_sorted(out.into_iter().collect())
    }

    /// Strictly increasing consecutive gaps. Sets with fewer than three
    /// elements are vacuously convex.
    pub fn is_convex(&self) -> bool {
        let gaps: Vec<Rational> = self.elems.windows(2).map(|w| &w[1] - &w[0]).collect();
        gaps.windows(2).all(|g| g[0] < g[1])
    }

    /// `{-a}`.
    pub fn negate(&self) -> FiniteRealSet {
        FiniteRealSet::from_sorted(self.elems.iter().rev().map(|x| -x).collect())
    }

    /// `{λ a + t}`. Panics if `λ` is zero.
    pub fn affine(&self, lambda: &Rational, shift: &Rational) -> FiniteRealSet {
        assert!(!lambda.is_zero(), "affine map needs a nonzero dilation");
        let mut elems: Vec<Rational> = self.elems.iter().map(|x| lambda * x + shift).collect();
        if lambda.is_negative() {
            elems.reverse();
        }
        FiniteRealSet::from_sorted(elems)
    }

    pub fn translate(&self, shift: &Rational) -> FiniteRealSet {
        self.affine(&Rational::one(), shift)
    }
}

impl fmt::Debug for FiniteRealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a FiniteRealSet {
    type Item = &'a Rational;
    type IntoIter = core::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl Serialize for FiniteRealSet {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteRealSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let v = Vec::<Rational>::deserialize(d)?;
        FiniteRealSet::new(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(v: &[i64]) -> FiniteRealSet {
        FiniteRealSet::from_integers(v.iter().copied()).unwrap()
    }

    fn ints(s: &FiniteRealSet) -> Vec<i64> {
        s.iter().map(|x| x.to_f64() as i64).collect()
    }

    #[test]
    fn make_set_sorts_and_dedupes() {
        assert_eq!(ints(&set(&[2, 0, 1, 1])), vec![0, 1, 2]);
        assert_eq!(ints(&set(&[5])), vec![5]);
        let s = FiniteRealSet::new(["1/2", "1/3", "1/2"].iter().map(|t| t.parse().unwrap())).unwrap();
        assert_eq!(s.elements(), &[Rational::new(1, 3), Rational::new(1, 2)]);
        assert_eq!(FiniteRealSet::new(vec![]), Err(Error::EmptySet));
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(ints(&set(&[0, 1, 2]).sumset(&set(&[0, 1, 2]))), vec![0, 1, 2, 3, 4]);
        let gp = set(&[1, 2, 4, 8]);
        assert_eq!(gp.sumset(&gp).len(), 10);
        let b = set(&[-3, 7, 11]);
        assert_eq!(set(&[0]).sumset(&b), b);
    }

    #[test]
    fn difference_and_product_examples() {
        let gp = set(&[1, 2, 4, 8]);
        assert_eq!(ints(&gp.product_set(&gp)), vec![1, 2, 4, 8, 16, 32, 64]);
        let a = set(&[0, 1, 2]);
        assert_eq!(ints(&a.difference_set(&a)), vec![-2, -1, 0, 1, 2]);
        assert_eq!(ints(&set(&[3]).product_set(&set(&[3]))), vec![9]);
        // A - B is oriented as a - b.
        assert_eq!(ints(&set(&[10]).difference_set(&set(&[1, 2]))), vec![8, 9]);
    }

    #[test]
    fn convexity() {
        assert!(set(&[1, 4, 9, 16]).is_convex());
        assert!(!set(&[0, 1, 2, 3]).is_convex());
        assert!(set(&[0, 1]).is_convex());
        assert!(set(&[7]).is_convex());
        assert!(!set(&[1, 4, 9, 16]).negate().is_convex());
    }

    #[test]
    fn affine_keeps_order() {
        let a = set(&[1, 4, 9]);
        let b = a.affine(&Rational::new(-1, 2), &Rational::from(3));
        assert_eq!(
            b.elements(),
            &[Rational::new(-3, 2), Rational::from(1), Rational::new(5, 2)]
        );
    }
}
