//! Per-instance inequality records.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::numeric::{exp2, log2};

/// Relative slack applied to every real-valued comparison.
pub const REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs ≤ C · rhs`
    AtMost,
    /// `lhs ≥ rhs / C`
    AtLeast,
    /// `lhs = rhs` up to [`REL_TOL`]
    Equal,
}

/// One inequality instantiated on concrete sets.
///
/// Both sides are carried as base-2 logarithms so that products such as
/// `|AA|^42 |A+A|^37` stay comparable; `lhs`/`rhs_without_constant` are the
/// plain values when they fit in a double.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub statement_id: String,
    pub instance: String,
    pub sizes: Vec<usize>,
    pub relation: Relation,
    pub lhs: Option<f64>,
    pub rhs_without_constant: Option<f64>,
    pub log2_lhs: f64,
    pub log2_rhs: f64,
    /// `lhs/rhs` for upper bounds, `rhs/lhs` for lower bounds.
    pub effective_constant: f64,
    pub log2_effective_constant: f64,
    pub assert_constant: f64,
    /// Diagnostic records are computed but never count as failures.
    pub asserted: bool,
    /// Outcome of any exact identity the check carries besides the inequality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_holds: Option<bool>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl InequalityReport {
    pub fn from_log2(
        statement_id: impl Into<String>,
        relation: Relation,
        log2_lhs: f64,
        log2_rhs: f64,
        assert_constant: f64,
    ) -> Self {
        let log2_eff = match relation {
            Relation::AtMost | Relation::Equal => log2_lhs - log2_rhs,
            Relation::AtLeast => log2_rhs - log2_lhs,
        };
        // Equal sides (including both zero) give a unit constant.
        let log2_eff = if log2_lhs == log2_rhs { 0.0 } else { log2_eff };
        InequalityReport {
            statement_id: statement_id.into(),
            instance: String::new(),
            sizes: Vec::new(),
            relation,
            lhs: finite(exp2(log2_lhs)),
            rhs_without_constant: finite(exp2(log2_rhs)),
            log2_lhs,
            log2_rhs,
            effective_constant: exp2(log2_eff),
            log2_effective_constant: log2_eff,
            assert_constant,
            asserted: true,
            identity_holds: None,
            passed: false,
            runtime_ms: None,
        }
        .with_assert_constant(assert_constant)
    }

    /// Both sides given directly; they must be nonnegative.
    pub fn from_values(
        statement_id: impl Into<String>,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        assert_constant: f64,
    ) -> Self {
        let mut r = Self::from_log2(statement_id, relation, log2(lhs), log2(rhs), assert_constant);
        r.lhs = finite(lhs);
        r.rhs_without_constant = finite(rhs);
        r
    }

    /// Re-evaluates `passed` against a new constant.
    pub fn with_assert_constant(mut self, assert_constant: f64) -> Self {
        let slack = log2(1.0 + REL_TOL);
        let holds = match self.relation {
            Relation::Equal => self.log2_effective_constant.abs() <= slack,
            _ => self.log2_effective_constant <= log2(assert_constant) + slack,
        };
        self.assert_constant = assert_constant;
        self.passed = holds && self.identity_holds != Some(false);
        self
    }

    pub fn with_instance(mut self, instance: impl Into<String>) -> Self {
        self.instance = instance.into();
        self
    }

    pub fn with_sizes(mut self, sizes: &[usize]) -> Self {
        self.sizes = sizes.to_vec();
        self
    }

    pub fn diagnostic(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn with_identity(mut self, holds: bool) -> Self {
        self.identity_holds = Some(holds);
        self.passed &= holds;
        self
    }

    /// Whether this record should fail a run.
    pub fn is_failure(&self) -> bool {
        self.asserted && !self.passed
    }
}
