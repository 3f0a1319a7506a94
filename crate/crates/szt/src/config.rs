//! Suite configuration in TOML.
//!
//! ```toml
//! suite_version = 1
//! seed = 0
//! workers = 4            # optional, defaults to the available cores
//!
//! [budgets]
//! tuples = 100000000
//! dense_entries = 4000000
//!
//! [options]              # every key optional
//! alpha = 2.0
//! assert_constant = 1.0
//! delta = 2
//! map = "square"
//! size_ratio = [0.5, 2.0]
//! chain_max_n = 64
//! signs = ["plus", "minus"]
//!
//! [[checks]]
//! statement = "thm-main"
//! families = ["squares", "cubes", "random-gaps", "gp"]
//! sizes = [16, 32, 64, 128, 256]
//! # partner = "ap", assert_constant = 1.0, alpha = 2.0, params = ["3"]
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use szt_core::{Budget, CheckOptions, FamilyKind, Rational, Statement};
use thiserror::Error;

pub const SUITE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("infeasible budget: {0}")]
    Budget(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub statement: Statement,
    pub families: Vec<FamilyKind>,
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<FamilyKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assert_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Family parameters, passed to every family in the sweep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_version")]
    pub suite_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Adds wall-clock `runtime_ms` to every report, which makes output
    /// run-dependent.
    #[serde(default)]
    pub record_runtime: bool,
    #[serde(default)]
    pub budgets: Budget,
    #[serde(default)]
    pub options: CheckOptions,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
}

fn default_version() -> u32 {
    SUITE_VERSION
}

pub const DEFAULT_FAMILIES: [FamilyKind; 4] = [
    FamilyKind::ConvexSquares,
    FamilyKind::ConvexCubes,
    FamilyKind::ConvexRandomGaps,
    FamilyKind::GeometricProgression,
];

pub const DEFAULT_SIZES: [usize; 5] = [16, 32, 64, 128, 256];

impl Default for SuiteConfig {
    /// Every statement over the default families and sizes.
    fn default() -> Self {
        SuiteConfig {
            suite_version: SUITE_VERSION,
            seed: 0,
            workers: None,
            record_runtime: false,
            budgets: Budget::default(),
            options: CheckOptions::default(),
            checks: Statement::ALL
                .into_iter()
                .map(|statement| CheckConfig {
                    statement,
                    families: DEFAULT_FAMILIES.to_vec(),
                    sizes: DEFAULT_SIZES.to_vec(),
                    partner: None,
                    assert_constant: None,
                    alpha: None,
                    params: Vec::new(),
                })
                .collect(),
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: SuiteConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("suite config serializes")
    }

    /// Keeps the checks of one statement.
    pub fn only(&mut self, statement: Statement) {
        self.checks.retain(|c| c.statement == statement);
    }

    /// Replaces the families of every check.
    pub fn with_families(&mut self, families: &[FamilyKind]) {
        for c in &mut self.checks {
            c.families = families.to_vec();
        }
    }

    /// Replaces the sizes of every check.
    pub fn with_sizes(&mut self, sizes: &[usize]) {
        for c in &mut self.checks {
            c.sizes = sizes.to_vec();
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.suite_version != SUITE_VERSION {
            return invalid(format!(
                "suite_version {} is not supported (expected {SUITE_VERSION})",
                self.suite_version
            ));
        }
        if self.workers == Some(0) {
            return invalid("workers must be at least 1".into());
        }
        let o = &self.options;
        if !(o.alpha >= 1.0 && o.alpha.is_finite()) {
            return invalid(format!("alpha must be at least 1, got {}", o.alpha));
        }
        if !(o.assert_constant > 0.0 && o.assert_constant.is_finite()) {
            return invalid("assert_constant must be positive".into());
        }
        if o.delta < Rational::one() {
            return invalid(format!("delta must be at least 1, got {}", o.delta));
        }
        let (lo, hi) = o.size_ratio;
        if !(lo > 0.0 && lo <= 1.0 && hi >= 1.0 && hi.is_finite()) {
            return invalid(format!("size_ratio [{lo}, {hi}] must contain 1"));
        }
        if o.signs.is_empty() {
            return invalid("signs must not be empty".into());
        }
        if self.budgets.tuples == 0 || self.budgets.dense_entries == 0 {
            return Err(ConfigError::Budget("budgets must be positive".into()));
        }
        for (i, c) in self.checks.iter().enumerate() {
            let at = format!("checks[{i}] ({})", c.statement);
            if c.families.is_empty() || c.sizes.is_empty() {
                return invalid(format!("{at}: families and sizes must not be empty"));
            }
            if let Some(&n) = c.sizes.iter().find(|&&n| n < 4) {
                return invalid(format!("{at}: size {n} is below 4"));
            }
            let alpha = c.alpha.unwrap_or(o.alpha);
            if !(alpha >= 1.0 && alpha.is_finite()) {
                return invalid(format!("{at}: alpha must be at least 1"));
            }
            if c.statement == Statement::LemmaSzt1 && alpha <= 1.0 {
                return invalid(format!("{at}: alpha must exceed 1"));
            }
            if let Some(k) = c.assert_constant {
                if !(k > 0.0 && k.is_finite()) {
                    return invalid(format!("{at}: assert_constant must be positive"));
                }
            }
            let largest = *c.sizes.iter().max().unwrap() as u64;
            let dense_n = match c.statement {
                Statement::ActionG => largest,
                Statement::ThmMainChain => largest.min(o.chain_max_n as u64),
                _ => 0,
            };
            if dense_n * dense_n > self.budgets.dense_entries {
                return Err(ConfigError::Budget(format!(
                    "{at}: a {dense_n}x{dense_n} operator exceeds dense_entries = {}",
                    self.budgets.dense_entries
                )));
            }
        }
        Ok(())
    }
}
