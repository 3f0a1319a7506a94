//! Spectral facts about the operators, checked on concrete sets.

use alloc::format;

use super::{build_operator, eigen_spectrum, singular_spectrum, OperatorKind, WeightFunction};
use crate::conv::convolve_minus;
use crate::error::{Error, Result};
use crate::numeric::{abs, pow, sqrt};
use crate::report::{InequalityReport, Relation, REL_TOL};
use crate::set::FiniteRealSet;
use crate::Budget;

/// Per-coordinate tolerance for the main singular vectors.
const VECTOR_TOL: f64 = 1e-8;

/// For `A - B ⊆ D` (difference kind) or `A + B ⊆ S` (sum kind) the operator
/// with weight `1_S` has `λ_1 = (|A||B|)^{1/2}`, main singular vectors the
/// normalized indicators of `A` and `B`, and no other nonzero singular value.
///
/// A violated containment is an error, not a failed report.
pub fn verify_rank_one_lemma(
    a: &FiniteRealSet,
    b: &FiniteRealSet,
    s: &FiniteRealSet,
    kind: OperatorKind,
    budget: &Budget,
) -> Result<InequalityReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if b.len() > a.len() {
        return Err(Error::Precondition(format!("|B| = {} exceeds |A| = {}", b.len(), a.len())));
    }
    let reach = match kind {
        OperatorKind::Sum => a.sumset(b),
        OperatorKind::Difference => a.difference_set(b),
        OperatorKind::Explicit => return Err(Error::Precondition("rank-one lemma needs a sum or difference operator".into())),
    };
    if !reach.is_subset(s) {
        return Err(Error::Precondition("support set does not contain A ± B".into()));
    }
    let op = build_operator(&WeightFunction::indicator(s), a, b, kind, budget)?;
    let spec = singular_spectrum(&op);
    let expected = sqrt((a.len() * b.len()) as f64);
    let lambda1 = spec.values[0];
    let rest_ok = spec.values.get(1).map_or(true, |l2| *l2 <= REL_TOL * lambda1);
    let v_ok = spec.vectors[0]
        .iter()
        .all(|x| abs(x - 1.0 / sqrt(b.len() as f64)) <= VECTOR_TOL);
    let u_ok = spec.left_vectors[0]
        .iter()
        .all(|x| abs(x - 1.0 / sqrt(a.len() as f64)) <= VECTOR_TOL);
    Ok(
        InequalityReport::from_values("lemma-rank-one", Relation::Equal, lambda1, expected, 1.0)
            .with_identity(rest_ok && v_ok && u_ok)
            .with_sizes(&[a.len(), b.len(), s.len()]),
    )
}

/// `⟨T^{A∘A}_A f_1, f_1⟩ ≥ μ_1³ / (‖g‖₂² ‖g‖_∞)` where `(μ_1, f_1)` is the main
/// eigenpair of `T^g_A` (difference kind) or `T̃^g_A` (sum kind).
pub fn verify_action_g_bound(
    a: &FiniteRealSet,
    g: &WeightFunction,
    kind: OperatorKind,
    budget: &Budget,
) -> Result<InequalityReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if g.is_zero() {
        return Err(Error::Precondition("weight must not vanish identically".into()));
    }
    if kind == OperatorKind::Difference && !g.is_hermitian() {
        return Err(Error::NotSymmetric);
    }
    let op = build_operator(g, a, a, kind, budget)?;
    let spec = eigen_spectrum(&op)?;
    let mu1 = spec.values[0].max(0.0);
    let f1 = &spec.vectors[0];
    let corr = WeightFunction::from_multiplicity(&convolve_minus(a, a));
    let t = build_operator(&corr, a, a, OperatorKind::Difference, budget)?;
    let lhs = super::apply_action(&t, f1, f1)?;
    let rhs = pow(mu1, 3.0) / (g.l2_squared() * g.sup());
    Ok(InequalityReport::from_values("lemma-action-g", Relation::AtLeast, lhs, rhs, 1.0).with_sizes(&[a.len()]))
}
