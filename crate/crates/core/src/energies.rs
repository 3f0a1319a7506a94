//! Higher additive energies, correlation tensors and their enumeration oracle.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::conv::{convolve_minus, MultiplicityMap};
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, pow};
use crate::rational::Rational;
use crate::set::FiniteRealSet;
use crate::Budget;

/// An energy: exact for integral orders over indicator sets, a double otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum EnergyValue {
    Exact(BigUint),
    Approx(f64),
}

impl EnergyValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            EnergyValue::Exact(n) => n.to_f64().unwrap_or(f64::INFINITY),
            EnergyValue::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            EnergyValue::Exact(n) => Some(n),
            EnergyValue::Approx(_) => None,
        }
    }

    /// Exact value; panics on an approximate energy.
    pub fn unwrap_exact(self) -> BigUint {
        match self {
            EnergyValue::Exact(n) => n,
            EnergyValue::Approx(x) => panic!("energy {x} is not exact"),
        }
    }
}

impl Serialize for EnergyValue {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            EnergyValue::Exact(n) => s.collect_str(n),
            EnergyValue::Approx(x) => s.serialize_f64(*x),
        }
    }
}

impl From<u64> for EnergyValue {
    fn from(v: u64) -> Self {
        EnergyValue::Exact(BigUint::from(v))
    }
}

/// Exact accumulator that stays in `u128` until it would overflow.
#[derive(Default)]
struct ExactSum {
    small: u128,
    big: BigUint,
}

impl ExactSum {
    fn add_product(&mut self, factors: &[u64]) {
        let mut prod: Option<u128> = Some(1);
        for &f in factors {
            prod = prod.and_then(|p| p.checked_mul(f as u128));
        }
        match prod {
            Some(p) => match self.small.checked_add(p) {
                Some(s) => self.small = s,
                None => {
                    self.big += self.small;
                    self.small = p;
                }
            },
            None => {
                let mut p = BigUint::from(1u32);
                for &f in factors {
                    p *= f;
                }
                self.big += p;
            }
        }
    }

    fn finish(self) -> BigUint {
        self.big + self.small
    }
}

/// `Σ_x Π_j m_j(x)` over the common support.
pub fn product_sum(maps: &[&MultiplicityMap]) -> BigUint {
    let Some(pivot) = maps.iter().enumerate().min_by_key(|(_, m)| m.len()).map(|(i, _)| i) else {
        return BigUint::zero();
    };
    let mut acc = ExactSum::default();
    let mut factors = alloc::vec![0u64; maps.len()];
    'outer: for (x, c) in maps[pivot].iter() {
        for (j, m) in maps.iter().enumerate() {
            factors[j] = if j == pivot { c } else { m.get(x) };
            if factors[j] == 0 {
                continue 'outer;
            }
        }
        acc.add_product(&factors);
    }
    acc.finish()
}

/// Summation order fixed by value, so reflecting a set cannot change the
/// rounding.
fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    pairwise_sum(&terms)
}

/// Self-correlations `(A_j∘A_j)`, computed once per distinct set.
fn self_correlations(sets: &[FiniteRealSet]) -> Vec<MultiplicityMap> {
    let mut out: Vec<MultiplicityMap> = Vec::with_capacity(sets.len());
    for (j, s) in sets.iter().enumerate() {
        match sets[..j].iter().position(|t| t == s) {
            Some(i) => {
                let m = out[i].clone();
                out.push(m);
            }
            None => out.push(convolve_minus(s, s)),
        }
    }
    out
}

/// `E_k(A_1, …, A_k) = Σ_x Π_j (A_j∘A_j)(x)`, exactly.
pub fn energy_k(sets: &[FiniteRealSet]) -> Result<EnergyValue> {
    if sets.len() < 2 {
        return Err(Error::EnergyOrder(sets.len()));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySet);
    }
    let maps = self_correlations(sets);
    let refs: Vec<&MultiplicityMap> = maps.iter().collect();
    Ok(EnergyValue::Exact(product_sum(&refs)))
}

/// `E_k(A) = Σ_x (A∘A)(x)^k` for real `k > 0`.
pub fn energy_fractional(a: &FiniteRealSet, k: f64) -> Result<EnergyValue> {
    if !(k > 0.0) {
        return Err(Error::Precondition("energy order must be positive".into()));
    }
    let m = convolve_minus(a, a);
    let terms: Vec<f64> = m.iter().map(|(_, c)| pow(c as f64, k)).collect();
    Ok(EnergyValue::Approx(sorted_sum(terms)))
}

/// `Σ_x (X∘Y)(x) (Z∘W)(x)`.
///
/// With `X = Y = A`, `Z = W = B` this is `E(A, B)`.
pub fn mixed_energy(
    x: &FiniteRealSet,
    y: &FiniteRealSet,
    z: &FiniteRealSet,
    w: &FiniteRealSet,
) -> EnergyValue {
    let left = convolve_minus(x, y);
    let right = if (x, y) == (z, w) { left.clone() } else { convolve_minus(z, w) };
    EnergyValue::Exact(product_sum(&[&left, &right]))
}

/// `Σ_x (X∘X)(x)^p (Y∘Y)(x)^q` over the common support.
pub fn weighted_corr(x: &FiniteRealSet, y: &FiniteRealSet, p: f64, q: f64) -> Result<EnergyValue> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Precondition("exponents must be positive".into()));
    }
    let mx = convolve_minus(x, x);
    let my = if x == y { mx.clone() } else { convolve_minus(y, y) };
    let terms: Vec<f64> = mx
        .iter()
        .filter_map(|(t, c)| {
            let d = my.get(t);
            (d > 0).then(|| pow(c as f64, p) * pow(d as f64, q))
        })
        .collect();
    Ok(EnergyValue::Approx(sorted_sum(terms)))
}

/// Sparse `C_{k+1}(A_1, …, A_{k+1})(x_1, …, x_k) = #{z ∈ A_1 : z + x_j ∈ A_{j+1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationTensor {
    order: usize,
    entries: BTreeMap<Vec<Rational>, u64>,
}

impl CorrelationTensor {
    /// Number of sets the tensor correlates (`k + 1`).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, xs: &[Rational]) -> u64 {
        self.entries.get(xs).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Rational], u64)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn sum_of_squares(&self) -> BigUint {
        let mut acc = ExactSum::default();
        for v in self.entries.values() {
            acc.add_product(&[*v, *v]);
        }
        acc.finish()
    }
}

fn checked_budget(sizes: impl Iterator<Item = usize>, what: &'static str, budget: u64) -> Result<u64> {
    let mut required: u64 = 1;
    for s in sizes {
        required = required.saturating_mul(s as u64);
    }
    if required > budget {
        return Err(Error::Budget { what, required, budget });
    }
    Ok(required)
}

pub fn correlation_tensor(sets: &[FiniteRealSet], budget: &Budget) -> Result<CorrelationTensor> {
    if sets.len() < 2 {
        return Err(Error::EnergyOrder(sets.len()));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySet);
    }
    checked_budget(sets.iter().map(|s| s.len()), "correlation tensor tuples", budget.tuples)?;
    let k = sets.len() - 1;
    let mut entries: BTreeMap<Vec<Rational>, u64> = BTreeMap::new();
    let mut idx = alloc::vec![0usize; k];
    for z in &sets[0] {
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let key: Vec<Rational> = (0..k).map(|j| &sets[j + 1].elements()[idx[j]] - z).collect();
            *entries.entry(key).or_insert(0) += 1;
            // odometer over A_2 × … × A_{k+1}
            let mut j = 0;
            while j < k {
                idx[j] += 1;
                if idx[j] < sets[j + 1].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
    }
    Ok(CorrelationTensor { order: k + 1, entries })
}

/// Counts `2k`-tuples `(a_1, a_1', …, a_k, a_k')` with all `a_j' - a_j` equal.
///
/// Enumerates every pair of `A_1` and, for its difference, scans every pair
/// of each other set; no representation function is involved. The work is
/// `|A_1|² · Σ_{j≥2} |A_j|²` and must fit in `budget.tuples`.
pub fn energy_bruteforce(sets: &[FiniteRealSet], budget: &Budget) -> Result<EnergyValue> {
    if sets.len() < 2 {
        return Err(Error::EnergyOrder(sets.len()));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySet);
    }
    let first = (sets[0].len() as u64).pow(2);
    let rest: u64 = sets[1..].iter().map(|s| (s.len() as u64).pow(2)).sum();
    let required = first.saturating_mul(rest);
    if required > budget.tuples {
        return Err(Error::Budget {
            what: "brute-force energy tuples",
            required,
            budget: budget.tuples,
        });
    }
    let diffs: Vec<Vec<Rational>> = sets[1..]
        .iter()
        .map(|s| {
            let mut v = Vec::with_capacity(s.len() * s.len());
            for p in s {
                for q in s {
                    v.push(q - p);
                }
            }
            v
        })
        .collect();
    let mut acc = ExactSum::default();
    let mut factors = alloc::vec![0u64; sets.len() - 1];
    for p in &sets[0] {
        for q in &sets[0] {
            let d = q - p;
            for (f, dj) in factors.iter_mut().zip(&diffs) {
                *f = dj.iter().filter(|e| **e == d).count() as u64;
            }
            acc.add_product(&factors);
        }
    }
    Ok(EnergyValue::Exact(acc.finish()))
}
