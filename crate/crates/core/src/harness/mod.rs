//! Concrete instances of the energy, spectral and sumset inequalities.
//!
//! Each check returns [`InequalityReport`]s with both sides in log₂ form and
//! an assert constant of 1; [`InequalityReport::with_assert_constant`]
//! re-judges a report against another constant. All logarithms are base 2,
//! and sets smaller than 4 are rejected so that `log₂|A| ≥ 2`.

mod plan;

pub use plan::{assert_multiplier, evaluate, family_constant, CheckOptions, Statement};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::conv::{convolve_minus, convolve_plus, level_set};
use crate::energies::{energy_fractional, energy_k, mixed_energy, weighted_corr, EnergyValue};
use crate::error::{Error, Result};
use crate::families::{apply_convex_map, ConvexMap};
use crate::numeric::{abs, biguint_pow, log2, log2_biguint};
use crate::operators::{
    apply_action, build_operator, eigen_spectrum, verify_action_g_bound, OperatorKind, WeightFunction,
};
use crate::rational::Rational;
use crate::report::{InequalityReport, Relation, REL_TOL};
use crate::set::FiniteRealSet;
use crate::Budget;

const MIN_SIZE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, a: &FiniteRealSet, b: &FiniteRealSet) -> FiniteRealSet {
        match self {
            Sign::Plus => a.sumset(b),
            Sign::Minus => a.difference_set(b),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

fn require_size(sets: &[&FiniteRealSet]) -> Result<()> {
    for s in sets {
        if s.len() < MIN_SIZE {
            return Err(Error::Precondition(format!(
                "set of size {} is below the minimum {MIN_SIZE}",
                s.len()
            )));
        }
    }
    Ok(())
}

fn lg(n: usize) -> f64 {
    log2(n as f64)
}

fn lg_energy(e: &EnergyValue) -> f64 {
    match e {
        EnergyValue::Exact(b) => log2_biguint(b),
        EnergyValue::Approx(x) => log2(*x),
    }
}

fn lg_constant(c: f64) -> Result<f64> {
    if c > 0.0 && c.is_finite() {
        Ok(log2(c))
    } else {
        Err(Error::Precondition(format!("constant must be positive and finite, got {c}")))
    }
}

fn report(id: &str, relation: Relation, log2_lhs: f64, log2_rhs: f64) -> InequalityReport {
    InequalityReport::from_log2(id, relation, log2_lhs, log2_rhs, 1.0)
}

fn exact_lhs(mut r: InequalityReport, value: &BigUint) -> InequalityReport {
    r.lhs = value.to_f64().filter(|x| x.is_finite());
    r
}

fn cube(a: &FiniteRealSet) -> [FiniteRealSet; 3] {
    [a.clone(), a.clone(), a.clone()]
}

/// The three bounds available for a set of SzT type with constant `c` and
/// parameter `α`: `E_3(A) ≤ c|A|^α log|A|`, `E(A)³ ≤ E_{3/2}(A)² c|A|^α` and
/// `E(A,B) ≤ (c|B|^α |A||B|)^{1/2}`.
pub fn check_lemma_szt(a: &FiniteRealSet, b: &FiniteRealSet, c: f64, alpha: f64) -> Result<Vec<InequalityReport>> {
    require_size(&[a])?;
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (la, lb, lc) = (lg(a.len()), lg(b.len()), lg_constant(c)?);
    let sizes = [a.len(), b.len()];

    let e3 = energy_k(&cube(a))?.unwrap_exact();
    let r1 = report("lemma-szt-e3", Relation::AtMost, log2_biguint(&e3), lc + alpha * la + log2(la));

    let e = energy_k(&[a.clone(), a.clone()])?.unwrap_exact();
    let e32 = energy_fractional(a, 1.5)?;
    let e_cubed = &e * &e * &e;
    let r2 = report(
        "lemma-szt-energy-cube",
        Relation::AtMost,
        log2_biguint(&e_cubed),
        2.0 * lg_energy(&e32) + lc + alpha * la,
    );

    let eab = mixed_energy(a, a, b, b).unwrap_exact();
    let r3 = report(
        "lemma-szt-mixed",
        Relation::AtMost,
        log2_biguint(&eab),
        0.5 * (lc + alpha * lb + la + lb),
    );
    Ok(alloc::vec![
        exact_lhs(r1, &e3).with_sizes(&sizes),
        exact_lhs(r2, &e_cubed).with_sizes(&sizes),
        exact_lhs(r3, &eab).with_sizes(&sizes),
    ])
}

/// `E(A_*,A)^{2α-1} ≤ W^{2α-2} c^{1/3} c_*^{α/3} |A|^{2/3} |A_*|^{α²/3}` with
/// `W = Σ_x (A_*∘A_*)(x)^{1/2} (A∘A)(x)`.
///
/// The bound's constant depends on `(α-1)^{-1}`; see [`assert_multiplier`].
pub fn check_lemma_szt1(
    a_star: &FiniteRealSet,
    a: &FiniteRealSet,
    c: f64,
    c_star: f64,
    alpha: f64,
) -> Result<InequalityReport> {
    if !(alpha > 1.0) {
        return Err(Error::Precondition(format!("alpha must exceed 1, got {alpha}")));
    }
    require_size(&[a_star, a])?;
    let (la, las) = (lg(a.len()), lg(a_star.len()));
    let (lc, lcs) = (lg_constant(c)?, lg_constant(c_star)?);
    let e = mixed_energy(a_star, a_star, a, a).unwrap_exact();
    let w = weighted_corr(a_star, a, 0.5, 1.0)?;
    let lhs = (2.0 * alpha - 1.0) * log2_biguint(&e);
    let rhs = (2.0 * alpha - 2.0) * lg_energy(&w)
        + lc / 3.0
        + alpha * lcs / 3.0
        + 2.0 * la / 3.0
        + alpha * alpha * las / 3.0;
    Ok(report("lemma-szt1", Relation::AtMost, lhs, rhs).with_sizes(&[a_star.len(), a.len()]))
}

/// Whether `B` lies in `{x : (A∘A)(x) ≥ Δ}` or in `{x : (A*A)(x) ≥ Δ}`.
pub fn in_popular_set(a: &FiniteRealSet, b: &FiniteRealSet, delta: &Rational) -> Result<bool> {
    Ok(b.is_subset(&level_set(&convolve_minus(a, a), delta)?)
        || b.is_subset(&level_set(&convolve_plus(a, a), delta)?))
}

/// `E_3(A,A,B) ≤ Δ^{-4/(3α-1)} c^{(5α+1)/(2(3α-1))} |A|^{(2α²+5α-1)/(2(3α-1))}
/// |B|^{3(α²-1)/(2(3α-1))} log|A|` for `B` inside a popular set of level `Δ`.
///
/// A `B` outside both popular sets is an error, not a failed report.
pub fn check_lemma_e3(
    a: &FiniteRealSet,
    b: &FiniteRealSet,
    delta: &Rational,
    c: f64,
    alpha: f64,
) -> Result<InequalityReport> {
    require_size(&[a])?;
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    if *delta < Rational::one() {
        return Err(Error::Precondition(format!("Delta must be at least 1, got {delta}")));
    }
    if !in_popular_set(a, b, delta)? {
        return Err(Error::Precondition(format!("B is not contained in the level-{delta} popular set")));
    }
    let (la, lb, lc) = (lg(a.len()), lg(b.len()), lg_constant(c)?);
    let ld = log2(delta.to_f64());
    let k = 3.0 * alpha - 1.0;
    let e = energy_k(&[a.clone(), a.clone(), b.clone()])?.unwrap_exact();
    let rhs = -4.0 / k * ld
        + (5.0 * alpha + 1.0) / (2.0 * k) * lc
        + (2.0 * alpha * alpha + 5.0 * alpha - 1.0) / (2.0 * k) * la
        + 3.0 * (alpha * alpha - 1.0) / (2.0 * k) * lb
        + log2(la);
    Ok(exact_lhs(report("lemma-e3", Relation::AtMost, log2_biguint(&e), rhs), &e).with_sizes(&[a.len(), b.len()]))
}

/// Dyadic classes `Q_j = {x : 2^j ≤ (A∘A)(x) < 2^{j+1}}` with their
/// contributions to `E_3(A,A,B)`.
pub fn dyadic_classes(a: &FiniteRealSet, b: &FiniteRealSet) -> BTreeMap<u32, BigUint> {
    let m = convolve_minus(a, a);
    let mb = convolve_minus(b, b);
    let mut classes: BTreeMap<u32, BigUint> = BTreeMap::new();
    for (x, c) in m.iter() {
        let j = 63 - c.leading_zeros();
        let term = BigUint::from(c as u128 * c as u128) * mb.get(x);
        *classes.entry(j).or_default() += term;
    }
    classes
}

/// The classes must add up to `E_3(A,A,B)` exactly, and one class must
/// carry at least `1/⌈log₂|A| + 1⌉` of the total.
pub fn check_dyadic_decomposition(a: &FiniteRealSet, b: &FiniteRealSet) -> Result<InequalityReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let classes = dyadic_classes(a, b);
    let total: BigUint = classes.values().sum();
    let e3 = energy_k(&[a.clone(), a.clone(), b.clone()])?.unwrap_exact();
    let best = classes.values().max().cloned().unwrap_or_else(BigUint::zero);
    // ⌈log₂ n + 1⌉ = ⌈log₂ n⌉ + 1
    let n = a.len();
    let slots = (usize::BITS - (n - 1).leading_zeros()) as f64 + 1.0;
    let r = report(
        "dyadic-decomposition",
        Relation::AtLeast,
        log2_biguint(&best) - log2_biguint(&total),
        -log2(slots),
    );
    Ok(r.with_identity(total == e3).with_sizes(&[a.len(), b.len(), classes.len()]))
}

/// `|A+A| ≥ c^{(1-11α)/D} |A|^{(-8α²+57α-3)/D} (log|A|)^{-4(3α-1)/D}` with
/// `D = 3α² + 12α + 1`.
pub fn check_thm_main(a: &FiniteRealSet, c: f64, alpha: f64) -> Result<InequalityReport> {
    require_size(&[a])?;
    let (la, lc) = (lg(a.len()), lg_constant(c)?);
    let d = 3.0 * alpha * alpha + 12.0 * alpha + 1.0;
    let rhs = (1.0 - 11.0 * alpha) / d * lc + (-8.0 * alpha * alpha + 57.0 * alpha - 3.0) / d * la
        - 4.0 * (3.0 * alpha - 1.0) / d * log2(la);
    let s = a.sumset(a).len();
    let mut r = report("thm-main", Relation::AtLeast, lg(s), rhs);
    r.lhs = Some(s as f64);
    Ok(r.with_sizes(&[a.len(), s]))
}

/// The spectral steps behind the sumset bound, on one set.
///
/// With `S_1 = {z : (A*A)(z) ≥ |A|²/(2|A+A|)}`, `(μ_j, f_j)` the eigenpairs of
/// the sum-kind operator with weight `1_{S_1}` and `M` the difference-kind
/// operator with weight `A∘A`, the reports check `μ_1 ≥ |A|/2`,
/// `σ ≥ μ_1² ⟨M f_1, f_1⟩` where `σ = Σ_j μ_j² ⟨M f_j, f_j⟩` is also computed
/// exactly as `Σ_{x,y,z} M(x,y) 1_{S_1}(x+z) 1_{S_1}(y+z)`,
/// `σ ≥ |A|⁵ / (32 |A+A|)`, and `σ² ≤ E_3(A) E_3(A,A,S_1)`.
pub fn check_thm_main_chain(a: &FiniteRealSet, budget: &Budget) -> Result<Vec<InequalityReport>> {
    require_size(&[a])?;
    let n = a.len();
    let d = a.sumset(a).len();
    let tau = Rational::new((n * n) as i64, (2 * d) as i64);
    let s1 = level_set(&convolve_plus(a, a), &tau)?;
    let corr = convolve_minus(a, a);

    let big_n = build_operator(&WeightFunction::indicator(&s1), a, a, OperatorKind::Sum, budget)?;
    let big_m = build_operator(&WeightFunction::from_multiplicity(&corr), a, a, OperatorKind::Difference, budget)?;
    let spec = eigen_spectrum(&big_n)?;
    let mut pairings = Vec::with_capacity(n);
    for (mu, f) in spec.values.iter().zip(&spec.vectors) {
        pairings.push((*mu, apply_action(&big_m, f, f)?));
    }
    let sigma_spectral: f64 = crate::numeric::pairwise_sum(
        &pairings.iter().map(|(mu, p)| mu * mu * p).collect::<Vec<_>>(),
    );

    // σ exactly: Σ_{x,y} (A∘A)(x-y) · #{z : x+z, y+z ∈ S_1}
    let elems = a.elements();
    let rows: Vec<Vec<bool>> = elems
        .iter()
        .map(|x| elems.iter().map(|z| s1.contains(&(x + z))).collect())
        .collect();
    let mut sigma: u128 = 0;
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            let m = corr.get(&(x - y)) as u128;
            let common = rows[i].iter().zip(&rows[j]).filter(|(p, q)| **p && **q).count() as u128;
            sigma += m * common;
        }
    }
    let sigma_big = BigUint::from(sigma);
    let sigma_f = sigma as f64;
    let identity = abs(sigma_f - sigma_spectral) <= REL_TOL * sigma_f;

    let (mu1, p1) = pairings[0];
    let sizes = [n, d, s1.len()];
    let r_mu = report("thm-main-chain-mu1", Relation::AtLeast, log2(mu1), lg(n) - 1.0);
    let r_sigma = report(
        "thm-main-chain-sigma",
        Relation::AtLeast,
        log2(sigma_f),
        log2(mu1 * mu1 * p1),
    )
    .with_identity(identity);
    let r_lower = report(
        "thm-main-chain-lower",
        Relation::AtLeast,
        log2(sigma_f),
        5.0 * lg(n) - 5.0 - lg(d),
    );
    let e3 = energy_k(&cube(a))?.unwrap_exact();
    let e3s = energy_k(&[a.clone(), a.clone(), s1.clone()])?.unwrap_exact();
    let sq = &sigma_big * &sigma_big;
    let r_cs = report(
        "thm-main-chain-cs",
        Relation::AtMost,
        log2_biguint(&sq),
        log2_biguint(&e3) + log2_biguint(&e3s),
    );
    Ok(alloc::vec![
        r_mu.with_sizes(&sizes),
        exact_lhs(r_sigma, &sigma_big).with_sizes(&sizes),
        exact_lhs(r_lower, &sigma_big).with_sizes(&sizes),
        exact_lhs(r_cs, &sq).with_sizes(&sizes),
    ])
}

/// Lower bounds for `|A ± A_*|` when both sets are of SzT type with the same
/// `α`: the general min-form bound, the bound for `α > 1`, the `α = 2`
/// max/min form (only when `α = 2`), and the mixed bound for
/// `|A ± A_*|^{(α+1)/2} |A - A|`. Logarithms are of `|A||A_*|`.
pub fn check_thm_main_diff(
    a: &FiniteRealSet,
    a_star: &FiniteRealSet,
    c: f64,
    c_star: f64,
    alpha: f64,
    sign: Sign,
) -> Result<Vec<InequalityReport>> {
    require_size(&[a, a_star])?;
    let (la, las) = (lg(a.len()), lg(a_star.len()));
    let (lc, lcs) = (lg_constant(c)?, lg_constant(c_star)?);
    let ll = log2(la + las);
    let s = sign.apply(a, a_star).len();
    let ls = lg(s);
    let sizes = [a.len(), a_star.len(), s];
    let tag = format!("sign={}", sign.symbol());
    let mut out = Vec::new();

    // Term with the roles (c, |A|) and (c_*, |A_*|) as given, then swapped.
    let general = |lc: f64, lcs: f64, la: f64, las: f64| {
        let k = 3.0 * (7.0 + alpha);
        -2.0 / k * lcs - 13.0 / k * lc + 2.0 * (24.0 - alpha) / k * las + (33.0 - 10.0 * alpha) / k * la
    };
    let rhs = general(lc, lcs, la, las).min(general(lcs, lc, las, la)) - 2.0 / (7.0 + alpha) * ll;
    out.push(report("thm-main-diff-general", Relation::AtLeast, ls, rhs));

    if alpha > 1.0 {
        let d = alpha * alpha + 4.0 * alpha - 3.0;
        let rhs = -(4.0 * alpha - 2.0) / (3.0 * d) * lc - (7.0 * alpha - 5.0) / (3.0 * d) * lcs
            + (28.0 * alpha - 4.0 * alpha * alpha - 16.0) / (3.0 * d) * la
            + (35.0 * alpha - 4.0 * alpha * alpha - 21.0) / (3.0 * d) * las
            - 2.0 * (alpha - 1.0) / d * ll;
        out.push(report("thm-main-diff-new", Relation::AtLeast, ls, rhs));
    }

    if alpha == 2.0 {
        let x = |lc: f64, lcs: f64, la: f64, las: f64| -lcs / 3.0 - 2.0 * lc / 9.0 + 11.0 * las / 9.0 + 8.0 * la / 9.0;
        let y = |lc: f64, lcs: f64, la: f64, las: f64| {
            -2.0 * lcs / 27.0 - 13.0 * lc / 27.0 + 44.0 * las / 27.0 + 13.0 * la / 27.0
        };
        let rhs = x(lc, lcs, la, las)
            .max(x(lcs, lc, las, la))
            .max(y(lc, lcs, la, las).min(y(lcs, lc, las, la)))
            - 2.0 * ll / 9.0;
        out.push(report("thm-main-diff-alpha2", Relation::AtLeast, ls, rhs));
    }

    let diff = a.difference_set(a).len();
    let lhs = (alpha + 1.0) / 2.0 * ls + lg(diff);
    let rhs = (33.0 - 4.0 * alpha) / 6.0 * la + (6.0 - alpha) / 3.0 * las - 7.0 * lc / 6.0 - lcs / 3.0 - ll;
    out.push(report("thm-main-diff-mixed", Relation::AtLeast, lhs, rhs));

    Ok(out
        .into_iter()
        .map(|mut r| {
            if r.statement_id != "thm-main-diff-mixed" {
                r.lhs = Some(s as f64);
            }
            r.with_sizes(&sizes).with_instance(tag.clone())
        })
        .collect())
}

/// `|A ± A_*| ≥ max{|A|^{8/9}|A_*|^{2/3}, |A_*|^{8/9}|A|^{2/3}} log^{-2/9}(|A||A_*|)`
/// for convex `A`, `A_*`.
pub fn check_corollary_convex_diff(a: &FiniteRealSet, a_star: &FiniteRealSet, sign: Sign) -> Result<InequalityReport> {
    require_size(&[a, a_star])?;
    if !a.is_convex() || !a_star.is_convex() {
        return Err(Error::Precondition("both sets must be convex".into()));
    }
    let (la, las) = (lg(a.len()), lg(a_star.len()));
    let s = sign.apply(a, a_star).len();
    let rhs = (8.0 * la / 9.0 + 2.0 * las / 3.0).max(8.0 * las / 9.0 + 2.0 * la / 3.0) - 2.0 * log2(la + las) / 9.0;
    let mut r = report("corollary-convex-diff", Relation::AtLeast, lg(s), rhs);
    r.lhs = Some(s as f64);
    Ok(r.with_sizes(&[a.len(), a_star.len(), s])
        .with_instance(format!("sign={}", sign.symbol())))
}

/// Sumset bounds for images under a convex map `f`, and the product-set
/// bounds that follow through `log`.
///
/// `|C|/|A|` must lie in `ratio`; with `|C| ≠ |A|` the first bound uses
/// `|A|^{79}|C|^{21}` in place of `|A|^{100}`. The product-set reports
/// need `A ⊂ (0, ∞)` and are omitted otherwise.
pub fn check_convex_map_theorems(
    a: &FiniteRealSet,
    c_set: &FiniteRealSet,
    map: ConvexMap,
    ratio: (f64, f64),
) -> Result<Vec<InequalityReport>> {
    require_size(&[a])?;
    if c_set.is_empty() {
        return Err(Error::EmptySet);
    }
    let q = c_set.len() as f64 / a.len() as f64;
    if q < ratio.0 || q > ratio.1 {
        return Err(Error::Precondition(format!(
            "|C|/|A| = {q} is outside [{}, {}]",
            ratio.0, ratio.1
        )));
    }
    let fa = apply_convex_map(a, map)?;
    let n = a.len();
    let (la, lcn) = (lg(n), lg(c_set.len()));
    let ll = log2(la);
    let sizes = [n, c_set.len()];
    let tag = format!("f={}", map.name());
    let power = |x: usize, e: u32| biguint_pow(x as u64, e);
    let mut out = Vec::new();

    let aa_sum = a.sumset(a).len();
    let fc = fa.sumset(c_set).len();
    let lhs = power(fc, 42) * power(aa_sum, 37);
    let r = report("convex-map-lrn", Relation::AtLeast, log2_biguint(&lhs), 79.0 * la + 21.0 * lcn - 20.0 * ll);
    out.push(exact_lhs(r, &lhs));

    let ff = fa.sumset(&fa).len();
    let m = ff.max(aa_sum);
    let mut r = report("convex-map-max", Relation::AtLeast, lg(m), 100.0 * la / 79.0 - 20.0 * ll / 79.0);
    r.lhs = Some(m as f64);
    out.push(r);

    let af = a.sumset(&fa).len();
    let mut r = report("convex-map-sum-image", Relation::AtLeast, lg(af), 24.0 * la / 19.0 - 2.0 * ll / 19.0);
    r.lhs = Some(af as f64);
    out.push(r);

    if a.iter().all(Rational::is_positive) {
        let prod = a.product_set(a).len();
        let diff = a.difference_set(a).len();
        let lhs = power(prod, 42) * power(aa_sum, 37);
        let r = report("convex-map-product-lrn", Relation::AtLeast, log2_biguint(&lhs), 100.0 * la - 20.0 * ll);
        out.push(exact_lhs(r, &lhs));

        let lhs = power(prod, 6) * power(diff, 5);
        let r = report("convex-map-product-diff", Relation::AtLeast, log2_biguint(&lhs), 14.0 * la - 2.0 * ll);
        out.push(exact_lhs(r, &lhs));

        let m = prod.max(diff);
        let mut r = report(
            "convex-map-product-diff-max",
            Relation::AtLeast,
            lg(m),
            14.0 * la / 11.0 - 2.0 * ll / 11.0,
        );
        r.lhs = Some(m as f64);
        out.push(r);
    }
    Ok(out
        .into_iter()
        .map(|r| r.with_sizes(&sizes).with_instance(tag.clone()))
        .collect())
}

/// `⟨T^{A∘A}_A f_1, f_1⟩ ≥ μ_1³/(‖g‖₂²‖g‖_∞)` for three weights: the
/// indicator of `A+A` and of the popular sums `S_1` (sum kind), and `A∘A`
/// itself (difference kind).
pub fn check_action_g(a: &FiniteRealSet, budget: &Budget) -> Result<Vec<InequalityReport>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a.len();
    let d = a.sumset(a).len();
    let pc = convolve_plus(a, a);
    let s1 = level_set(&pc, &Rational::new((n * n) as i64, (2 * d) as i64))?;
    let cases = [
        ("lemma-action-g-sumset", WeightFunction::indicator(&pc.support()), OperatorKind::Sum),
        ("lemma-action-g-s1", WeightFunction::indicator(&s1), OperatorKind::Sum),
        (
            "lemma-action-g-self-corr",
            WeightFunction::from_multiplicity(&convolve_minus(a, a)),
            OperatorKind::Difference,
        ),
    ];
    let mut out = Vec::with_capacity(cases.len());
    for (id, g, kind) in cases {
        let mut r = verify_action_g_bound(a, &g, kind, budget)?;
        r.statement_id = id.into();
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
