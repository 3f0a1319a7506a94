//! Statement catalogue and the per-instance evaluation used by suites.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::*;
use crate::conv::convolve_minus;
use crate::families::{generate, FamilyKind, FamilySpec};
use crate::szt::{default_probes, estimate_c, family_c, CKind};

/// A group of related reports that a suite can select by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// The three SzT energy bounds; partner `B` defaults to a progression.
    LemmaSzt,
    /// Mixed-energy bound with `A` = squares and `A_*` = the family.
    LemmaSzt1,
    /// `E_3(A,A,B)` for `B` the level-`Δ` popular differences.
    LemmaE3,
    DyadicDecomposition,
    ThmMain,
    /// Spectral steps of the sumset bound; skipped above `chain_max_n`.
    ThmMainChain,
    /// Bounds for `|A ± A_*|` with `A_*` = cubes by default, both signs.
    ThmMainDiff,
    /// Convex-image and product-set bounds with `C = f(A)` by default.
    ConvexMap,
    ActionG,
}

impl Statement {
    pub const ALL: [Statement; 9] = [
        Statement::LemmaSzt,
        Statement::LemmaSzt1,
        Statement::LemmaE3,
        Statement::DyadicDecomposition,
        Statement::ThmMain,
        Statement::ThmMainChain,
        Statement::ThmMainDiff,
        Statement::ConvexMap,
        Statement::ActionG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statement::LemmaSzt => "lemma-szt",
            Statement::LemmaSzt1 => "lemma-szt1",
            Statement::LemmaE3 => "lemma-e3",
            Statement::DyadicDecomposition => "dyadic-decomposition",
            Statement::ThmMain => "thm-main",
            Statement::ThmMainChain => "thm-main-chain",
            Statement::ThmMainDiff => "thm-main-diff",
            Statement::ConvexMap => "convex-map",
            Statement::ActionG => "action-g",
        }
    }

    /// Family used for the second set when none is configured.
    pub fn default_partner(self) -> Option<FamilyKind> {
        match self {
            Statement::LemmaSzt => Some(FamilyKind::ArithmeticProgression),
            Statement::LemmaSzt1 => Some(FamilyKind::ConvexSquares),
            Statement::ThmMainDiff => Some(FamilyKind::ConvexCubes),
            _ => None,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown statement {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckOptions {
    pub alpha: f64,
    pub assert_constant: f64,
    /// Popularity level for the `E_3(A,A,B)` and dyadic checks.
    pub delta: Rational,
    pub map: ConvexMap,
    /// Accepted range of `|C|/|A|` for the convex-map bounds.
    pub size_ratio: (f64, f64),
    pub chain_max_n: usize,
    pub signs: Vec<Sign>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            alpha: 2.0,
            assert_constant: 1.0,
            delta: Rational::from(2),
            map: ConvexMap::Square,
            size_ratio: (0.5, 2.0),
            chain_max_n: 64,
            signs: alloc::vec![Sign::Plus, Sign::Minus],
        }
    }
}

/// Extra factor on the assert constant for bounds whose implied constant
/// depends on `(α-1)^{-1}`.
pub fn assert_multiplier(statement_id: &str, alpha: f64) -> f64 {
    match statement_id {
        "lemma-szt1" | "thm-main-diff-new" if alpha > 1.0 => (1.0 / (alpha - 1.0)).max(1.0),
        _ => 1.0,
    }
}

/// `c(A)` for a generated set, and whether reports built on it are asserted.
///
/// Geometric progressions use the small-product constant and convex sets
/// `|A|`. Anything else falls back to the probe estimate, which only
/// bounds the constant from below, so its reports are diagnostic.
pub fn family_constant(a: &FiniteRealSet, kind: FamilyKind, seed: u64) -> Result<(f64, bool)> {
    if kind == FamilyKind::GeometricProgression {
        return Ok((family_c(a, &CKind::SmallProduct)?.to_f64(), true));
    }
    if a.is_convex() {
        return Ok((family_c(a, &CKind::Convex)?.to_f64(), true));
    }
    let est = estimate_c(a, &default_probes(a, seed), 2.0)?;
    Ok((est.c_hat, false))
}

fn partner_spec(statement: Statement, spec: &FamilySpec, partner: Option<FamilyKind>) -> Option<FamilySpec> {
    partner
        .or_else(|| statement.default_partner())
        .map(|kind| FamilySpec::new(kind, spec.n).with_seed(spec.seed))
}

/// Runs one statement on the family instance `spec`.
///
/// Instance strings name the family and partner; each report is judged
/// against `opts.assert_constant` times [`assert_multiplier`].
pub fn evaluate(
    statement: Statement,
    spec: &FamilySpec,
    partner: Option<FamilyKind>,
    opts: &CheckOptions,
    budget: &Budget,
) -> Result<Vec<InequalityReport>> {
    let a = generate(spec)?;
    let (c, asserted) = family_constant(&a, spec.kind, spec.seed)?;
    let alpha = opts.alpha;
    let other = partner_spec(statement, spec, partner);
    let mut label = spec.label();
    if let Some(p) = &other {
        label = format!("{label} with {}", p.label());
    }
    let other_set = other.as_ref().map(generate).transpose()?;

    let reports = match statement {
        Statement::LemmaSzt => check_lemma_szt(&a, other_set.as_ref().unwrap(), c, alpha)?,
        Statement::LemmaSzt1 => {
            let base = other_set.as_ref().unwrap();
            let (c_base, _) = family_constant(base, other.as_ref().unwrap().kind, spec.seed)?;
            alloc::vec![check_lemma_szt1(&a, base, c_base, c, alpha)?]
        }
        Statement::LemmaE3 => {
            let b = level_set(&convolve_minus(&a, &a), &opts.delta)?;
            alloc::vec![check_lemma_e3(&a, &b, &opts.delta, c, alpha)?]
        }
        Statement::DyadicDecomposition => {
            let b = level_set(&convolve_minus(&a, &a), &opts.delta)?;
            alloc::vec![check_dyadic_decomposition(&a, &b)?]
        }
        Statement::ThmMain => {
            let est = estimate_c(&a, &default_probes(&a, spec.seed), alpha)?;
            let side = InequalityReport::from_values("szt-c-estimate", Relation::AtMost, est.c_hat, c, 1.0)
                .with_sizes(&[a.len()])
                .diagnostic();
            alloc::vec![check_thm_main(&a, c, alpha)?, side]
        }
        Statement::ThmMainChain => {
            if a.len() > opts.chain_max_n {
                Vec::new()
            } else {
                check_thm_main_chain(&a, budget)?
            }
        }
        Statement::ThmMainDiff => {
            let a_star = other_set.as_ref().unwrap();
            let (c_star, _) = family_constant(a_star, other.as_ref().unwrap().kind, spec.seed)?;
            let mut out = Vec::new();
            for &sign in &opts.signs {
                out.extend(check_thm_main_diff(&a, a_star, c, c_star, alpha, sign)?);
                if a.is_convex() && a_star.is_convex() {
                    out.push(check_corollary_convex_diff(&a, a_star, sign)?);
                }
            }
            out
        }
        Statement::ConvexMap => {
            let c_set = match &other_set {
                Some(s) => s.clone(),
                None => apply_convex_map(&a, opts.map)?,
            };
            check_convex_map_theorems(&a, &c_set, opts.map, opts.size_ratio)?
        }
        Statement::ActionG => check_action_g(&a, budget)?,
    };

    Ok(reports
        .into_iter()
        .map(|r| {
            let instance = if r.instance.is_empty() {
                label.clone()
            } else {
                format!("{label} {}", r.instance)
            };
            let keep_diagnostic = !r.asserted;
            let mult = assert_multiplier(&r.statement_id, alpha);
            let r = r.with_instance(instance).with_assert_constant(opts.assert_constant * mult);
            if keep_diagnostic || !asserted {
                r.diagnostic()
            } else {
                r
            }
        })
        .collect::<Vec<_>>())
}

