//! Representation functions `(A*B)(x)` and `(A∘B)(x)`.
//!
//! Three evaluation paths produce bit-identical maps:
//! a dense histogram over the common-denominator integer images (small
//! spans), a sort-and-count over the same images, and a generic ordered-map
//! accumulation over arbitrary rationals. [`convolve_plus`] and
//! [`convolve_minus`] pick the cheapest applicable path.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::FiniteRealSet;

/// Largest histogram span the dense path will allocate.
const DENSE_SPAN_LIMIT: i128 = 1 << 23;

/// A finitely supported map from rationals to positive counts, sorted by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMap {
    entries: Vec<(Rational, u64)>,
}

impl MultiplicityMap {
    /// Validates strictly increasing keys and positive counts.
    pub fn from_entries(entries: Vec<(Rational, u64)>) -> Result<Self> {
        if entries.iter().any(|(_, c)| *c == 0) {
            return Err(Error::Precondition("multiplicities must be positive".into()));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Precondition("keys must be strictly increasing".into()));
        }
        Ok(MultiplicityMap { entries })
    }

    pub fn entries(&self) -> &[(Rational, u64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, u64)> + '_ {
        self.entries.iter().map(|(x, c)| (x, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Count at `x`, zero off the support.
    pub fn get(&self, x: &Rational) -> u64 {
        match self.entries.binary_search_by(|(k, _)| k.cmp(x)) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn support(&self) -> FiniteRealSet {
        FiniteRealSet::from_sorted(self.entries.iter().map(|(x, _)| x.clone()).collect())
    }

    pub fn total_mass(&self) -> u128 {
        self.entries.iter().map(|(_, c)| *c as u128).sum()
    }

    pub fn max_value(&self) -> u64 {
        self.entries.iter().map(|(_, c)| *c).max().unwrap_or(0)
    }

    /// `tail[τ-1] = #{x : m(x) ≥ τ}` for `τ = 1..=max_tau`.
    pub fn tail_counts(&self, max_tau: usize) -> Vec<u64> {
        let mut hist = alloc::vec![0u64; max_tau + 2];
        for (_, c) in &self.entries {
            let c = (*c as usize).min(max_tau + 1);
            hist[c] += 1;
        }
        let mut tail = alloc::vec![0u64; max_tau];
        let mut acc = hist[max_tau + 1];
        for tau in (1..=max_tau).rev() {
            acc += hist[tau];
            tail[tau - 1] = acc;
        }
        tail
    }
}

/// Which combination of `a ∈ A`, `b ∈ B` is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvOp {
    /// `a + b`
    Plus,
    /// `b - a`
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvPath {
    Auto,
    Dense,
    Sorted,
    Generic,
}

/// `(A*B)(x) = #{(a, b) : a + b = x}`.
pub fn convolve_plus(a: &FiniteRealSet, b: &FiniteRealSet) -> MultiplicityMap {
    convolve_with(a, b, ConvOp::Plus, ConvPath::Auto).expect("auto path always applies")
}

/// `(A∘B)(x) = #{(a, b) : b - a = x}`.
pub fn convolve_minus(a: &FiniteRealSet, b: &FiniteRealSet) -> MultiplicityMap {
    convolve_with(a, b, ConvOp::Minus, ConvPath::Auto).expect("auto path always applies")
}

/// Evaluates on a forced path. Returns `None` when the requested integer
/// path does not apply (elements too large or span too wide).
pub fn convolve_with(
    a: &FiniteRealSet,
    b: &FiniteRealSet,
    op: ConvOp,
    path: ConvPath,
) -> Option<MultiplicityMap> {
    if a.is_empty() || b.is_empty() {
        return Some(MultiplicityMap { entries: Vec::new() });
    }
    if path == ConvPath::Generic {
        return Some(generic(a, b, op));
    }
    let scaled = Scaled::new(a, b);
    let scaled = match (scaled, path) {
        (Some(s), _) => s,
        (None, ConvPath::Auto) => return Some(generic(a, b, op)),
        (None, _) => return None,
    };
    let (lo, hi) = scaled.range(op);
    let span = hi - lo + 1;
    let pairs = (a.len() * b.len()) as i128;
    match path {
        ConvPath::Dense if span <= DENSE_SPAN_LIMIT => Some(scaled.dense(op, lo, span as usize)),
        ConvPath::Dense => None,
        ConvPath::Sorted => Some(scaled.sorted(op)),
        _ => {
            if span <= DENSE_SPAN_LIMIT && span <= 8 * pairs + 1024 {
                Some(scaled.dense(op, lo, span as usize))
            } else {
                Some(scaled.sorted(op))
            }
        }
    }
}

fn generic(a: &FiniteRealSet, b: &FiniteRealSet, op: ConvOp) -> MultiplicityMap {
    let mut acc: BTreeMap<Rational, u64> = BTreeMap::new();
    for x in a {
        for y in b {
            let key = match op {
                ConvOp::Plus => x + y,
                ConvOp::Minus => y - x,
            };
            *acc.entry(key).or_insert(0) += 1;
        }
    }
    MultiplicityMap {
        entries: acc.into_iter().collect(),
    }
}

/// Integer images `a·L` of both sets over their common denominator `L`.
struct Scaled {
    denom: BigInt,
    a: Vec<i64>,
    b: Vec<i64>,
}

impl Scaled {
    fn new(a: &FiniteRealSet, b: &FiniteRealSet) -> Option<Scaled> {
        let mut denom = BigInt::one();
        for x in a.iter().chain(b.iter()) {
            if !x.denom().is_one() {
                denom = denom.lcm(x.denom());
            }
        }
        let scale = |s: &FiniteRealSet| -> Option<Vec<i64>> {
            s.iter()
                .map(|x| {
                    if denom.is_one() {
                        x.numer().to_i64()
                    } else {
                        (x.numer() * (&denom / x.denom())).to_i64()
                    }
                })
                .collect()
        };
        Some(Scaled {
            a: scale(a)?,
            b: scale(b)?,
            denom: denom.clone(),
        })
    }

    fn combine(op: ConvOp, x: i64, y: i64) -> i128 {
        match op {
            ConvOp::Plus => x as i128 + y as i128,
            ConvOp::Minus => y as i128 - x as i128,
        }
    }

    fn range(&self, op: ConvOp) -> (i128, i128) {
        // Both vectors are increasing.
        let (a0, a1) = (self.a[0], *self.a.last().unwrap());
        let (b0, b1) = (self.b[0], *self.b.last().unwrap());
        match op {
            ConvOp::Plus => (Self::combine(op, a0, b0), Self::combine(op, a1, b1)),
            ConvOp::Minus => (Self::combine(op, a1, b0), Self::combine(op, a0, b1)),
        }
    }

    fn key(&self, k: i128) -> Rational {
        if self.denom.is_one() {
            Rational::from_integer(k)
        } else {
            Rational::new(k, self.denom.clone())
        }
    }

    fn dense(&self, op: ConvOp, lo: i128, span: usize) -> MultiplicityMap {
        let mut counts = alloc::vec![0u32; span];
        for &x in &self.a {
            for &y in &self.b {
                counts[(Self::combine(op, x, y) - lo) as usize] += 1;
            }
        }
        let entries = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, c)| (self.key(lo + i as i128), *c as u64))
            .collect();
        MultiplicityMap { entries }
    }

    fn sorted(&self, op: ConvOp) -> MultiplicityMap {
        let mut vals: Vec<i128> = Vec::with_capacity(self.a.len() * self.b.len());
        for &x in &self.a {
            for &y in &self.b {
                vals.push(Self::combine(op, x, y));
            }
        }
        vals.sort_unstable();
        let mut entries: Vec<(Rational, u64)> = Vec::new();
        let mut i = 0;
        while i < vals.len() {
            let mut j = i + 1;
            while j < vals.len() && vals[j] == vals[i] {
                j += 1;
            }
            entries.push((self.key(vals[i]), (j - i) as u64));
            i = j;
        }
        MultiplicityMap { entries }
    }
}

/// `{x : m(x) ≥ τ}`. May be empty.
pub fn level_set(conv: &MultiplicityMap, tau: &Rational) -> Result<FiniteRealSet> {
    if !tau.is_positive() {
        return Err(Error::Precondition("level threshold must be positive".into()));
    }
    let elems = conv
        .iter()
        .filter(|(_, c)| Rational::from_integer(*c) >= *tau)
        .map(|(x, _)| x.clone())
        .collect();
    Ok(FiniteRealSet::from_sorted(elems))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn set(v: &[i64]) -> FiniteRealSet {
        FiniteRealSet::from_integers(v.iter().copied()).unwrap()
    }

    fn as_pairs(m: &MultiplicityMap) -> Vec<(i64, u64)> {
        m.iter().map(|(x, c)| (x.to_f64() as i64, c)).collect()
    }

    /// Pair enumeration with no maps involved.
    fn enumerate(a: &[i64], b: &[i64], x: i64, plus: bool) -> u64 {
        let mut n = 0;
        for &p in a {
            for &q in b {
                if (plus && p + q == x) || (!plus && q - p == x) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn plus_examples() {
        let a = set(&[0, 1, 2]);
        assert_eq!(as_pairs(&convolve_plus(&a, &a)), vec![(0, 1), (1, 2), (2, 3), (3, 2), (4, 1)]);
        let gp = set(&[1, 2, 4, 8]);
        let m = convolve_plus(&gp, &gp);
        for x in [3, 5, 6, 9, 10, 12] {
            assert_eq!(m.get(&Rational::from(x)), 2);
            assert_eq!(enumerate(&[1, 2, 4, 8], &[1, 2, 4, 8], x, true), 2);
        }
        for x in [2, 4, 8, 16] {
            assert_eq!(m.get(&Rational::from(x)), 1);
        }
        assert_eq!(m.len(), 10);
        assert_eq!(as_pairs(&convolve_plus(&set(&[0]), &set(&[7]))), vec![(7, 1)]);
    }

    #[test]
    fn minus_examples() {
        let a = set(&[0, 1, 2]);
        assert_eq!(
            as_pairs(&convolve_minus(&a, &a)),
            vec![(-2, 1), (-1, 2), (0, 3), (1, 2), (2, 1)]
        );
        let sq = set(&[1, 4, 9, 16]);
        let m = convolve_minus(&sq, &sq);
        for x in [3, 5, 7, 8, 12, 15] {
            assert_eq!(m.get(&Rational::from(x)), 1);
            assert_eq!(m.get(&Rational::from(-x)), 1);
        }
        assert_eq!(m.get(&Rational::zero()), 4);
        assert_eq!(m.len(), 13);
    }

    #[test]
    fn minus_orientation_is_b_minus_a() {
        let m = convolve_minus(&set(&[0]), &set(&[5]));
        assert_eq!(as_pairs(&m), vec![(5, 1)]);
    }

    #[test]
    fn level_sets() {
        let gp = set(&[1, 2, 4, 8]);
        let m = convolve_plus(&gp, &gp);
        let two = level_set(&m, &Rational::from(2)).unwrap();
        assert_eq!(two, set(&[3, 5, 6, 9, 10, 12]));
        assert!(level_set(&m, &Rational::new(9, 2)).unwrap().is_empty());
        assert_eq!(level_set(&m, &Rational::one()).unwrap(), gp.sumset(&gp));
        assert!(level_set(&m, &Rational::zero()).is_err());
    }

    #[test]
    fn tail_counts_match_level_sets() {
        let a = set(&[0, 1, 2, 3, 4]);
        let m = convolve_plus(&a, &a);
        let tail = m.tail_counts(5);
        assert_eq!(tail, vec![9, 7, 5, 3, 1]);
    }

    #[test]
    fn rational_and_huge_inputs_agree_across_paths() {
        let a = FiniteRealSet::new(["1/2", "1/3", "5/6", "-7/4"].iter().map(|s| s.parse().unwrap())).unwrap();
        let b = FiniteRealSet::new(["2/3", "1/4", "3"].iter().map(|s| s.parse().unwrap())).unwrap();
        for op in [ConvOp::Plus, ConvOp::Minus] {
            let g = convolve_with(&a, &b, op, ConvPath::Generic).unwrap();
            assert_eq!(convolve_with(&a, &b, op, ConvPath::Sorted).unwrap(), g);
            assert_eq!(convolve_with(&a, &b, op, ConvPath::Dense).unwrap(), g);
        }
        let big = FiniteRealSet::new((0..70).map(|i| Rational::from_integer(BigInt::from(2).pow(i)))).unwrap();
        assert!(convolve_with(&big, &big, ConvOp::Plus, ConvPath::Sorted).is_none());
        assert_eq!(convolve_plus(&big, &big).len(), 70 * 71 / 2);
    }

    prop_compose! {
        fn arb_set(max_len: usize)(v in proptest::collection::vec(-200i64..200, 1..max_len)) -> FiniteRealSet {
            FiniteRealSet::from_integers(v).unwrap()
        }
    }

    proptest! {
        #[test]
        fn paths_agree(a in arb_set(30), b in arb_set(30)) {
            for op in [ConvOp::Plus, ConvOp::Minus] {
                let g = convolve_with(&a, &b, op, ConvPath::Generic).unwrap();
                prop_assert_eq!(&convolve_with(&a, &b, op, ConvPath::Sorted).unwrap(), &g);
                prop_assert_eq!(&convolve_with(&a, &b, op, ConvPath::Dense).unwrap(), &g);
            }
        }

        #[test]
        fn mass_support_symmetry(a in arb_set(25), b in arb_set(25)) {
            let plus = convolve_plus(&a, &b);
            let minus = convolve_minus(&a, &b);
            let mass = (a.len() * b.len()) as u128;
            prop_assert_eq!(plus.total_mass(), mass);
            prop_assert_eq!(minus.total_mass(), mass);
            prop_assert!(plus.max_value() as usize <= a.len().min(b.len()));
            prop_assert_eq!(plus.support(), a.sumset(&b));
            prop_assert_eq!(minus.support(), b.difference_set(&a));
            prop_assert_eq!(a.sumset(&b), b.sumset(&a));
            prop_assert_eq!(a.difference_set(&b), b.difference_set(&a).negate());
            let self_corr = convolve_minus(&a, &a);
            prop_assert_eq!(self_corr.get(&Rational::zero()), a.len() as u64);
            for (x, c) in self_corr.iter() {
                prop_assert_eq!(self_corr.get(&-x), c);
            }
        }

        #[test]
        fn reflection_preserves_statistics(a in arb_set(25)) {
            let m = convolve_plus(&a, &a);
            let neg = a.negate();
            let r = convolve_plus(&neg, &neg);
            for (x, c) in m.iter() {
                prop_assert_eq!(r.get(&-x), c);
            }
            prop_assert_eq!(m.len(), r.len());
        }

        #[test]
        fn level_sets_are_monotone(a in arb_set(25), t1 in 1u64..6, dt in 0u64..4) {
            let m = convolve_plus(&a, &a);
            let lo = level_set(&m, &Rational::from(t1 as i64)).unwrap();
            let hi = level_set(&m, &Rational::from((t1 + dt) as i64)).unwrap();
            prop_assert!(hi.is_subset(&lo));
        }
    }
}
