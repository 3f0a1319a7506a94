//! Finite-search measurements of the SzT condition
//! `|{x : (A*B)(x) ≥ τ}| ≪ c(A) |B|^α τ^{-3}`.
//!
//! Every quantity here replaces a quantifier over all finite sets by a
//! caller-supplied probe or candidate list, so `c_hat` is a lower bound on
//! the true constant and `q_of`/`q_prime` are upper bounds on the true minima.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xorshift::XorShiftRng;
use serde::{Deserialize, Serialize};

use crate::conv::convolve_plus;
use crate::error::{Error, Result};
use crate::families::{generate, FamilyKind, FamilySpec};
use crate::numeric::{log2, pow};
use crate::rational::Rational;
use crate::set::FiniteRealSet;

/// `tail(τ) = |{x ∈ A+B : (A*B)(x) ≥ τ}|` for `τ = 1 … min(|A|, |B|)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailProfile {
    pub tails: Vec<(u64, u64)>,
}

impl TailProfile {
    /// Zero beyond the profiled range.
    pub fn tail(&self, tau: u64) -> u64 {
        if tau == 0 {
            return self.tails.first().map_or(0, |t| t.1);
        }
        self.tails.get(tau as usize - 1).map_or(0, |t| t.1)
    }

    /// `Σ_τ tail(τ)`, which equals `Σ_x (A*B)(x) = |A||B|`.
    pub fn mass(&self) -> u128 {
        self.tails.iter().map(|(_, t)| *t as u128).sum()
    }

    /// Least-squares slope of `log tail` against `log τ` over the nonzero
    /// tail. Diagnostic only.
    pub fn tail_exponent(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .tails
            .iter()
            .filter(|(_, t)| *t > 0)
            .map(|(tau, t)| (log2(*tau as f64), log2(*t as f64)))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        Some(sxy / sxx)
    }
}

pub fn tail_profile(a: &FiniteRealSet, b: &FiniteRealSet) -> TailProfile {
    let max_tau = a.len().min(b.len());
    let counts = convolve_plus(a, b).tail_counts(max_tau);
    TailProfile {
        tails: counts.into_iter().enumerate().map(|(i, t)| (i as u64 + 1, t)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzTEstimate {
    pub alpha: f64,
    /// `max_{B, τ} tail(τ) τ³ / |B|^α` over the probes.
    pub c_hat: f64,
    pub witness_probe: usize,
    pub witness_tau: u64,
}

/// Ties keep the first `(probe index, τ)` in lexicographic order.
pub fn estimate_c(a: &FiniteRealSet, probes: &[FiniteRealSet], alpha: f64) -> Result<SzTEstimate> {
    if probes.is_empty() {
        return Err(Error::Precondition("probe list is empty".into()));
    }
    if !(alpha >= 1.0) {
        return Err(Error::Precondition("alpha must be at least 1".into()));
    }
    let mut best = SzTEstimate {
        alpha,
        c_hat: f64::NEG_INFINITY,
        witness_probe: 0,
        witness_tau: 1,
    };
    for (i, b) in probes.iter().enumerate() {
        let denom = pow(b.len() as f64, alpha);
        for (tau, tail) in tail_profile(a, b).tails {
            let v = tail as f64 * pow(tau as f64, 3.0) / denom;
            if v > best.c_hat {
                best.c_hat = v;
                best.witness_probe = i;
                best.witness_tau = tau;
            }
        }
    }
    Ok(best)
}

/// `A`, `-A`, a random `|A|`-subset of `A+A`, a random set of size `|A|`
/// and the progression `{0, …, |A|-1}`.
pub fn default_probes(a: &FiniteRealSet, seed: u64) -> Vec<FiniteRealSet> {
    let n = a.len();
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let sums = a.sumset(a);
    let mut pool: Vec<Rational> = sums.elements().to_vec();
    pool.shuffle(&mut rng);
    pool.truncate(n.max(1));
    let mut probes = alloc::vec![a.clone(), a.negate()];
    probes.push(FiniteRealSet::new(pool).expect("sumset of a nonempty set is nonempty"));
    if let Ok(r) = generate(&FamilySpec::new(FamilyKind::RandomUniform, n).with_seed(seed)) {
        probes.push(r);
    }
    if let Ok(ap) = generate(&FamilySpec::new(FamilyKind::ArithmeticProgression, n)) {
        probes.push(ap);
    }
    probes
}

/// `min_C |A+C|² / |C|` over the candidate list, exactly.
pub fn q_of(a: &FiniteRealSet, candidates: &[FiniteRealSet]) -> Result<Rational> {
    min_ratio(candidates, |c| a.sumset(c).len())
}

/// `min_C |(A+a)C|² / |C|` for `A ⊂ ℝ⁺`, `a ≠ 0` and candidates avoiding zero.
pub fn q_prime(a: &FiniteRealSet, shift: &Rational, candidates: &[FiniteRealSet]) -> Result<Rational> {
    if shift.is_zero() {
        return Err(Error::Precondition("shift must be nonzero".into()));
    }
    if a.iter().any(|x| !x.is_positive()) {
        return Err(Error::Precondition("A must consist of positive elements".into()));
    }
    if candidates.iter().any(|c| c.contains(&Rational::zero())) {
        return Err(Error::Precondition("candidates must avoid zero".into()));
    }
    let shifted = a.translate(shift);
    min_ratio(candidates, |c| shifted.product_set(c).len())
}

fn min_ratio(candidates: &[FiniteRealSet], size: impl Fn(&FiniteRealSet) -> usize) -> Result<Rational> {
    candidates
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| {
            let s = size(c) as i64;
            Rational::new(s * s, c.len() as i64)
        })
        .min()
        .ok_or_else(|| Error::Precondition("candidate list is empty".into()))
}

/// How the constant `c(A)` is prescribed for a family.
#[derive(Clone, Debug, PartialEq)]
pub enum CKind {
    /// `c(A) = |A|`; `A` must be convex.
    Convex,
    /// `c = q(A)` over the given candidates, for the image of `A` under a
    /// strictly convex map.
    ConvexImage(Vec<FiniteRealSet>),
    /// `c(A) = M² |A|` with `M = |AA| / |A|`.
    SmallProduct,
}

pub fn family_c(a: &FiniteRealSet, kind: &CKind) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.len() as i64;
    match kind {
        CKind::Convex => {
            if !a.is_convex() {
                return Err(Error::Precondition("set is not convex".into()));
            }
            Ok(Rational::from(n))
        }
        CKind::ConvexImage(candidates) => q_of(a, candidates),
        CKind::SmallProduct => {
            let m = a.product_set(a).len() as i64;
            Ok(Rational::new(m * m, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(v: &[i64]) -> FiniteRealSet {
        FiniteRealSet::from_integers(v.iter().copied()).unwrap()
    }

    #[test]
    fn tail_examples() {
        let gp = set(&[1, 2, 4, 8]);
        let t = tail_profile(&gp, &gp);
        assert_eq!(t.tails, vec![(1, 10), (2, 6), (3, 0), (4, 0)]);
        assert_eq!(t.mass(), 16);
        assert_eq!(t.tail(9), 0);

        let a = set(&[3, 5, 11]);
        let t = tail_profile(&a, &set(&[4]));
        assert_eq!(t.tails, vec![(1, 3)]);
        assert_eq!(t.tail(2), 0);

        let n = 5i64;
        let ap = FiniteRealSet::from_integers(0..n).unwrap();
        let t = tail_profile(&ap, &ap);
        for tau in 1..=n {
            assert_eq!(t.tail(tau as u64), (2 * n - 2 * tau + 1) as u64);
        }
        assert!(t.tail_exponent().unwrap() < 0.0);
    }

    #[test]
    fn estimate_examples() {
        let single = set(&[3]);
        let probes = vec![set(&[1, 2, 3]), set(&[0, 10])];
        let e = estimate_c(&single, &probes, 2.0).unwrap();
        // tail(1)=|B| → |B|^{1-α}
        assert!((e.c_hat - 0.5).abs() < 1e-15);
        assert_eq!((e.witness_probe, e.witness_tau), (1, 1));

        let a = set(&[1, 4, 9, 16, 25]);
        let e = estimate_c(&a, &[set(&[0])], 2.0).unwrap();
        assert_eq!(e.c_hat, 5.0);
        assert!(estimate_c(&a, &[], 2.0).is_err());
        assert!(estimate_c(&a, &probes, 0.5).is_err());
    }

    #[test]
    fn estimate_is_monotone_in_probes() {
        let a = generate(&FamilySpec::new(FamilyKind::ConvexSquares, 64)).unwrap();
        let mut probes = default_probes(&a, 3);
        assert_eq!(probes.len(), 5);
        let before = estimate_c(&a, &probes[..2], 2.0).unwrap().c_hat;
        let after = estimate_c(&a, &probes, 2.0).unwrap().c_hat;
        assert!(after >= before);
        probes.reverse();
        assert_eq!(estimate_c(&a, &probes, 2.0).unwrap().c_hat, after);
        // convex with α = 2: the sweep statistic stays at a small multiple of |A|
        assert!(after / 64.0 < 4.0);
    }

    #[test]
    fn q_examples() {
        let a = set(&[0, 1, 2]);
        assert_eq!(q_of(&a, &[a.clone()]).unwrap(), Rational::new(25, 3));
        assert_eq!(q_of(&a, &[a.clone(), set(&[0])]).unwrap(), Rational::new(25, 3));
        let c = set(&[4, 8, 9]);
        assert_eq!(q_of(&set(&[7]), &[c.clone(), set(&[1, 2])]).unwrap(), Rational::from(2));
        assert!(q_of(&a, &[]).is_err());
    }

    #[test]
    fn q_prime_examples() {
        let a = set(&[1, 2]);
        let one = Rational::one();
        assert_eq!(q_prime(&a, &one, &[set(&[1])]).unwrap(), Rational::from(4));
        assert_eq!(q_prime(&a, &one, &[set(&[1]), set(&[1, 2])]).unwrap(), Rational::from(4));
        assert_eq!(q_prime(&set(&[5]), &one, &[set(&[2, 3, 7])]).unwrap(), Rational::from(3));
        assert!(q_prime(&a, &Rational::zero(), &[set(&[1])]).is_err());
        assert!(q_prime(&set(&[0, 1]), &one, &[set(&[1])]).is_err());
        assert!(q_prime(&a, &one, &[set(&[0, 1])]).is_err());
    }

    #[test]
    fn family_c_examples() {
        assert_eq!(family_c(&set(&[1, 4, 9, 16]), &CKind::Convex).unwrap(), Rational::from(4));
        assert_eq!(family_c(&set(&[1, 2, 4, 8]), &CKind::SmallProduct).unwrap(), Rational::new(49, 4));
        let a = set(&[0, 1, 2]);
        assert_eq!(
            family_c(&a, &CKind::ConvexImage(vec![a.clone()])).unwrap(),
            q_of(&a, &[a.clone()]).unwrap()
        );
        assert!(family_c(&set(&[0, 1, 2, 3]), &CKind::Convex).is_err());
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn tail_mass_and_monotonicity(
            a in proptest::collection::vec(-60i64..60, 1..25),
            b in proptest::collection::vec(-60i64..60, 1..25),
        ) {
            let a = FiniteRealSet::from_integers(a).unwrap();
            let b = FiniteRealSet::from_integers(b).unwrap();
            let t = tail_profile(&a, &b);
            prop_assert_eq!(t.mass(), (a.len() * b.len()) as u128);
            prop_assert_eq!(t.tail(1), a.sumset(&b).len() as u64);
            prop_assert!(t.tails.windows(2).all(|w| w[0].1 >= w[1].1));
        }

        #[test]
        fn q_never_increases_with_more_candidates(
            a in proptest::collection::vec(0i64..40, 1..10),
            c1 in proptest::collection::vec(0i64..40, 1..10),
            c2 in proptest::collection::vec(0i64..40, 1..10),
        ) {
            let a = FiniteRealSet::from_integers(a).unwrap();
            let c1 = FiniteRealSet::from_integers(c1).unwrap();
            let c2 = FiniteRealSet::from_integers(c2).unwrap();
            let one = q_of(&a, &[c1.clone()]).unwrap();
            let two = q_of(&a, &[c1, c2]).unwrap();
            prop_assert!(two <= one);
        }
    }
}
