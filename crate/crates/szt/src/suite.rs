//! Runs a [`SuiteConfig`] and aggregates the reports.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use szt_core::{evaluate, CheckOptions, FamilyKind, FamilySpec, InequalityReport, Statement};

use crate::config::{ConfigError, SuiteConfig};

/// One family instance of one configured statement.
#[derive(Debug, Clone)]
pub struct Task {
    pub statement: Statement,
    pub spec: FamilySpec,
    pub partner: Option<FamilyKind>,
    pub options: CheckOptions,
}

/// A check that could not be evaluated. It counts as a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub statement: String,
    pub instance: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub reports: usize,
    pub asserted: usize,
    pub passed: usize,
    /// Passed over asserted; 1 when nothing is asserted.
    pub pass_rate: f64,
    pub min_effective_constant: f64,
    pub max_effective_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_version: u32,
    pub seed: u64,
    pub reports: Vec<InequalityReport>,
    pub errors: Vec<CheckFailure>,
    /// Keyed by statement id.
    pub summary: BTreeMap<String, StatementSummary>,
}

/// Expands the sweeps in configuration order.
pub fn plan(config: &SuiteConfig) -> Vec<Task> {
    let mut tasks = Vec::new();
    for check in &config.checks {
        let mut options = config.options.clone();
        if let Some(a) = check.alpha {
            options.alpha = a;
        }
        if let Some(c) = check.assert_constant {
            options.assert_constant = c;
        }
        for &kind in &check.families {
            for &n in &check.sizes {
                tasks.push(Task {
                    statement: check.statement,
                    spec: FamilySpec::new(kind, n)
                        .with_seed(config.seed)
                        .with_params(check.params.clone()),
                    partner: check.partner,
                    options: options.clone(),
                });
            }
        }
    }
    tasks
}

/// Validates, then evaluates every task on a pool of `workers` threads.
/// The report does not depend on the worker count.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, ConfigError> {
    config.validate()?;
    let tasks = plan(config);
    let workers = config
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start {workers} workers: {e}")))?;
    let budget = config.budgets;
    let timed = config.record_runtime;
    let outcomes: Vec<Result<Vec<InequalityReport>, CheckFailure>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let start = Instant::now();
                evaluate(t.statement, &t.spec, t.partner, &t.options, &budget)
                    .map(|rs| {
                        let ms = start.elapsed().as_millis() as u64;
                        rs.into_iter()
                            .map(|mut r| {
                                r.runtime_ms = timed.then_some(ms);
                                r
                            })
                            .collect()
                    })
                    .map_err(|e| CheckFailure {
                        statement: t.statement.to_string(),
                        instance: t.spec.label(),
                        message: e.to_string(),
                    })
            })
            .collect()
    });

    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Ok(rs) => reports.extend(rs),
            Err(e) => errors.push(e),
        }
    }
    Ok(SuiteReport {
        suite_version: config.suite_version,
        seed: config.seed,
        summary: summarize(&reports),
        reports,
        errors,
    })
}

fn summarize(reports: &[InequalityReport]) -> BTreeMap<String, StatementSummary> {
    let mut out: BTreeMap<String, StatementSummary> = BTreeMap::new();
    for r in reports {
        let s = out.entry(r.statement_id.clone()).or_insert(StatementSummary {
            reports: 0,
            asserted: 0,
            passed: 0,
            pass_rate: 1.0,
            min_effective_constant: f64::INFINITY,
            max_effective_constant: f64::NEG_INFINITY,
        });
        s.reports += 1;
        if r.asserted {
            s.asserted += 1;
            s.passed += r.passed as usize;
        }
        s.min_effective_constant = s.min_effective_constant.min(r.effective_constant);
        s.max_effective_constant = s.max_effective_constant.max(r.effective_constant);
    }
    for s in out.values_mut() {
        if s.asserted > 0 {
            s.pass_rate = s.passed as f64 / s.asserted as f64;
        }
    }
    out
}

#[derive(Serialize)]
struct CsvRow<'a> {
    statement_id: &'a str,
    instance: &'a str,
    sizes: String,
    relation: String,
    lhs: Option<f64>,
    rhs_without_constant: Option<f64>,
    log2_lhs: f64,
    log2_rhs: f64,
    effective_constant: f64,
    log2_effective_constant: f64,
    assert_constant: f64,
    asserted: bool,
    identity_holds: Option<bool>,
    passed: bool,
    runtime_ms: Option<u64>,
}

impl SuiteReport {
    /// Asserted reports that failed plus checks that could not run.
    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| r.is_failure()).count() + self.errors.len()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    /// Pretty JSON with object keys sorted.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("suite report serializes");
        serde_json::to_string_pretty(&value).expect("json value serializes") + "\n"
    }

    /// One row per report.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.reports {
            let relation = serde_json::to_value(r.relation).expect("relation serializes");
            out.serialize(CsvRow {
                statement_id: &r.statement_id,
                instance: &r.instance,
                sizes: r.sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";"),
                relation: relation.as_str().unwrap_or_default().to_owned(),
                lhs: r.lhs,
                rhs_without_constant: r.rhs_without_constant,
                log2_lhs: r.log2_lhs,
                log2_rhs: r.log2_rhs,
                effective_constant: r.effective_constant,
                log2_effective_constant: r.log2_effective_constant,
                assert_constant: r.assert_constant,
                asserted: r.asserted,
                identity_holds: r.identity_holds,
                passed: r.passed,
                runtime_ms: r.runtime_ms,
            })?;
        }
        out.flush()?;
        Ok(())
    }

    /// Per-statement table followed by any failing records.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite v{} seed {}: {} reports, {} failures\n",
            self.suite_version,
            self.seed,
            self.reports.len(),
            self.failures()
        );
        s += &format!(
            "{:<30} {:>7} {:>8} {:>9} {:>12} {:>12}\n",
            "statement", "reports", "asserted", "pass_rate", "min_eff", "max_eff"
        );
        for (id, m) in &self.summary {
            s += &format!(
                "{:<30} {:>7} {:>8} {:>9.3} {:>12.4e} {:>12.4e}\n",
                id, m.reports, m.asserted, m.pass_rate, m.min_effective_constant, m.max_effective_constant
            );
        }
        for r in self.reports.iter().filter(|r| r.is_failure()) {
            s += &format!(
                "FAIL {} [{}] effective constant {} > {}\n",
                r.statement_id, r.instance, r.effective_constant, r.assert_constant
            );
        }
        for e in &self.errors {
            s += &format!("ERROR {} [{}]: {}\n", e.statement, e.instance, e.message);
        }
        s
    }
}
