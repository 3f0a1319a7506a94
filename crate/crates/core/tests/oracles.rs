//! Library results against naive enumeration written here from the
//! definitions.

use std::collections::BTreeMap;

use proptest::prelude::*;
use szt_core::{
    convolve_minus, convolve_plus, correlation_tensor, energy_k, mixed_energy, tail_profile, Budget,
    FiniteRealSet, Rational,
};

fn ints(v: &[i64]) -> FiniteRealSet {
    FiniteRealSet::from_integers(v.iter().copied()).unwrap()
}

fn dedup(v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    v.sort();
    v.dedup();
    v
}

/// `#{(a, b) : b - a = x}` for every x.
fn naive_minus(a: &[i64], b: &[i64]) -> BTreeMap<i64, u64> {
    let mut m = BTreeMap::new();
    for &x in a {
        for &y in b {
            *m.entry(y - x).or_insert(0) += 1;
        }
    }
    m
}

/// Number of `2k`-tuples `(a_1, b_1, …, a_k, b_k)` with `a_j ∈ A_j`,
/// `b_j ∈ A_j` and all `a_j - b_j` equal.
fn naive_energy(sets: &[Vec<i64>]) -> u64 {
    let mut total = 0;
    let first = naive_minus(&sets[0], &sets[0]);
    for (x, c) in first {
        let mut prod = c;
        for s in &sets[1..] {
            let mut n = 0;
            for &p in s {
                for &q in s {
                    if q - p == x {
                        n += 1;
                    }
                }
            }
            prod *= n;
        }
        total += prod;
    }
    total
}

/// Additive quadruples `a + b = c + d` with `a, c ∈ A` and `b, d ∈ B`.
fn naive_quadruples(a: &[i64], b: &[i64]) -> u64 {
    let mut n = 0;
    for &p in a {
        for &q in b {
            for &r in a {
                for &s in b {
                    if p + q == r + s {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

#[test]
fn worked_values() {
    let a = [0, 1, 2];
    assert_eq!(naive_energy(&[a.to_vec(), a.to_vec()]), 19);
    assert_eq!(energy_k(&[ints(&a), ints(&a)]).unwrap().unwrap_exact(), 19u32.into());
    assert_eq!(naive_energy(&[a.to_vec(), a.to_vec(), a.to_vec()]), 45);
    let sq = [1, 4, 9, 16];
    assert_eq!(naive_quadruples(&sq, &sq), 28);
    let s = ints(&sq);
    assert_eq!(mixed_energy(&s, &s, &s, &s).unwrap_exact(), 28u32.into());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convolutions_match_enumeration(
        a in proptest::collection::vec(-30i64..30, 1..16),
        b in proptest::collection::vec(-30i64..30, 1..16),
    ) {
        let (a, b) = (dedup(&a), dedup(&b));
        let m = convolve_minus(&ints(&a), &ints(&b));
        let naive = naive_minus(&a, &b);
        prop_assert_eq!(m.len(), naive.len());
        for (x, c) in &naive {
            prop_assert_eq!(m.get(&Rational::from(*x)), *c);
        }
        let p = convolve_plus(&ints(&a), &ints(&b));
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        let naive_p = naive_minus(&neg, &b);
        for (x, c) in &naive_p {
            prop_assert_eq!(p.get(&Rational::from(*x)), *c);
        }
    }

    #[test]
    fn energies_match_enumeration(
        a in proptest::collection::vec(-20i64..20, 1..10),
        b in proptest::collection::vec(-20i64..20, 1..10),
        c in proptest::collection::vec(-20i64..20, 1..10),
    ) {
        let (a, b, c) = (dedup(&a), dedup(&b), dedup(&c));
        let sets = [ints(&a), ints(&b), ints(&c)];
        let e2 = energy_k(&sets[..2]).unwrap().unwrap_exact();
        prop_assert_eq!(e2, naive_energy(&[a.clone(), b.clone()]).into());
        let e3 = energy_k(&sets).unwrap().unwrap_exact();
        prop_assert_eq!(e3, naive_energy(&[a.clone(), b.clone(), c.clone()]).into());
        let t = correlation_tensor(&sets, &Budget::default()).unwrap();
        prop_assert_eq!(t.sum_of_squares(), naive_energy(&[a.clone(), b.clone(), c]).into());
        let mixed = mixed_energy(&sets[0], &sets[0], &sets[1], &sets[1]).unwrap_exact();
        prop_assert_eq!(mixed, naive_quadruples(&a, &b).into());
    }

    #[test]
    fn tail_matches_enumeration(
        a in proptest::collection::vec(0i64..25, 1..12),
        b in proptest::collection::vec(0i64..25, 1..12),
    ) {
        let (a, b) = (dedup(&a), dedup(&b));
        let mut reps: BTreeMap<i64, u64> = BTreeMap::new();
        for x in &a {
            for y in &b {
                *reps.entry(x + y).or_insert(0) += 1;
            }
        }
        let t = tail_profile(&ints(&a), &ints(&b));
        for (tau, tail) in &t.tails {
            let naive = reps.values().filter(|&&r| r >= *tau).count() as u64;
            prop_assert_eq!(*tail, naive);
        }
    }
}
