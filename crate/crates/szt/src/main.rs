use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use szt::dump::{write_matrix_csv, write_spectrum_csv};
use szt::{read_set, render_set, SuiteConfig};
use szt_core::{
    build_operator, convolve_minus, convolve_plus, default_probes, eigen_spectrum, energy_fractional, energy_k,
    estimate_c, generate, q_of, tail_profile, Budget, FamilyKind, FamilySpec, FiniteRealSet, OperatorKind,
    Rational, Statement, WeightFunction,
};

#[derive(Parser)]
#[command(name = "szt", version, about = "Sumsets, energies and spectral bounds on exact finite sets")]
struct Cli {
    /// Seed for randomized families and probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; `verify` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for `verify`.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Work limit as KEY=VALUE with KEY one of tuples, dense-entries. Repeatable.
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    budget: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set family and write it as a set file.
    Gen(GenArgs),
    /// Compute one object from set files.
    Compute(ComputeArgs),
    /// Run the inequality suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Family parameter (integer or p/q). Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    param: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Object {
    Sumset,
    Conv,
    Energy,
    Spectrum,
    Tail,
    Q,
    EstimateC,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Plus,
    Minus,
    Product,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Weight {
    /// `A∘A`, difference kind
    SelfCorr,
    /// indicator of `A+A`, sum kind
    SumsetIndicator,
    /// `(A∘A)^{1/2}`, difference kind
    SqrtSelfCorr,
    /// unit mass at 0, difference kind
    PointMass,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(value_enum)]
    object: Object,
    /// Set file; repeat for mixed energies.
    #[arg(long)]
    set: Vec<PathBuf>,
    #[arg(long)]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Op::Plus)]
    op: Op,
    /// Energy order; non-integers use the real power of `A∘A`.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, value_enum, default_value_t = Weight::SelfCorr)]
    g: Weight,
    /// Candidate set files for `q`.
    #[arg(long)]
    candidates: Vec<PathBuf>,
    /// Probe set files for `estimate-c`; defaults to seeded probes.
    #[arg(long)]
    probes: Vec<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Write the operator matrix as CSV.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
    /// Write the spectrum with eigenvectors as CSV.
    #[arg(long)]
    dump_spectrum: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite config (TOML); the built-in default suite when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Keep only this statement.
    #[arg(long)]
    only: Option<String>,
    /// Replace every sweep's families. Repeatable.
    #[arg(long)]
    family: Vec<String>,
    /// Replace every sweep's sizes. Repeatable.
    #[arg(long)]
    n: Vec<usize>,
}

/// Tabular output that renders as text lines, CSV or JSON.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
}

impl Table {
    fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Text => self.rows.iter().map(|r| r.join(",") + "\n").collect(),
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_budget(items: &[String]) -> Result<Budget> {
    let mut b = Budget::default();
    for item in items {
        let (key, value) = item.split_once('=').context("budget must be KEY=VALUE")?;
        let v: f64 = value.parse().with_context(|| format!("bad budget value {value:?}"))?;
        if !(v >= 0.0 && v.fract() == 0.0) {
            bail!("budget value {value:?} must be a nonnegative integer");
        }
        match key {
            "tuples" => b.tuples = v as u64,
            "dense-entries" | "dense_entries" => b.dense_entries = v as u64,
            _ => bail!("unknown budget key {key:?}"),
        }
    }
    Ok(b)
}

fn load(path: &Option<PathBuf>, what: &str) -> Result<FiniteRealSet> {
    let p = path.as_ref().with_context(|| format!("--{what} is required"))?;
    read_set(p).with_context(|| format!("reading {}", p.display()))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<FiniteRealSet>> {
    paths
        .iter()
        .map(|p| read_set(p).with_context(|| format!("reading {}", p.display())))
        .collect()
}

/// `--set` and `--a` are interchangeable for single-set objects.
fn primary(args: &ComputeArgs) -> Result<FiniteRealSet> {
    match (args.set.first(), &args.a) {
        (Some(p), _) => read_set(p).with_context(|| format!("reading {}", p.display())),
        (None, a) => load(a, "set"),
    }
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<()> {
    let kind: FamilyKind = args.kind.parse()?;
    let params = args
        .param
        .iter()
        .map(|p| p.parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()?;
    let set = generate(&FamilySpec::new(kind, args.n).with_seed(cli.seed).with_params(params))?;
    emit(cli.out.as_deref(), &render_set(&set))
}

fn cmd_compute(cli: &Cli, args: &ComputeArgs, budget: &Budget) -> Result<()> {
    let table = match args.object {
        Object::Sumset => {
            let a = if args.a.is_some() { load(&args.a, "a")? } else { primary(args)? };
            let b = match &args.b {
                Some(_) => load(&args.b, "b")?,
                None => a.clone(),
            };
            let s = match args.op {
                Op::Plus => a.sumset(&b),
                Op::Minus => a.difference_set(&b),
                Op::Product => a.product_set(&b),
            };
            let rows: Vec<Vec<String>> = s.iter().map(|x| vec![x.to_string()]).collect();
            Table {
                header: vec!["element"],
                json: json!({ "size": s.len(), "elements": s }),
                rows,
            }
        }
        Object::Conv => {
            let a = load(&args.a, "a")?;
            let b = match &args.b {
                Some(_) => load(&args.b, "b")?,
                None => a.clone(),
            };
            let m = match args.op {
                Op::Plus => convolve_plus(&a, &b),
                Op::Minus => convolve_minus(&a, &b),
                Op::Product => bail!("conv supports --op plus or minus"),
            };
            let rows: Vec<Vec<String>> = m.iter().map(|(x, c)| vec![x.to_string(), c.to_string()]).collect();
            let pairs: Vec<Value> = m.iter().map(|(x, c)| json!([x.to_string(), c])).collect();
            Table {
                header: vec!["x", "count"],
                json: json!({ "support": m.len(), "mass": m.total_mass().to_string(), "values": pairs }),
                rows,
            }
        }
        Object::Energy => {
            let sets = if args.set.is_empty() { vec![primary(args)?] } else { load_all(&args.set)? };
            let k = args.k.unwrap_or(if sets.len() > 1 { sets.len() as f64 } else { 2.0 });
            let value = if k.fract() == 0.0 && k >= 2.0 {
                let k = k as usize;
                let list = if sets.len() == 1 {
                    vec![sets[0].clone(); k]
                } else if sets.len() == k {
                    sets
                } else {
                    bail!("{} sets given for an order-{k} energy", sets.len());
                };
                energy_k(&list)?
            } else if sets.len() == 1 {
                energy_fractional(&sets[0], k)?
            } else {
                bail!("fractional energies take a single set");
            };
            let text = match value.exact() {
                Some(v) => v.to_string(),
                None => value.to_f64().to_string(),
            };
            Table {
                header: vec!["energy"],
                json: json!({ "k": k, "energy": value }),
                rows: vec![vec![text]],
            }
        }
        Object::Spectrum => {
            let a = primary(args)?;
            let corr = convolve_minus(&a, &a);
            let (g, kind) = match args.g {
                Weight::SelfCorr => (WeightFunction::from_multiplicity(&corr), OperatorKind::Difference),
                Weight::SumsetIndicator => (WeightFunction::indicator(&a.sumset(&a)), OperatorKind::Sum),
                Weight::SqrtSelfCorr => (WeightFunction::from_multiplicity_pow(&corr, 0.5), OperatorKind::Difference),
                Weight::PointMass => (WeightFunction::point_mass(Rational::zero(), 1.0)?, OperatorKind::Difference),
            };
            let op = build_operator(&g, &a, &a, kind, budget)?;
            let spec = eigen_spectrum(&op)?;
            if let Some(p) = &args.dump_matrix {
                write_matrix_csv(&op, fs::File::create(p)?)?;
            }
            if let Some(p) = &args.dump_spectrum {
                write_spectrum_csv(&op, &spec, fs::File::create(p)?)?;
            }
            Table {
                header: vec!["eigenvalue"],
                json: json!({ "eigenvalues": spec.values, "trace": op.trace() }),
                rows: spec.values.iter().map(|v| vec![v.to_string()]).collect(),
            }
        }
        Object::Tail => {
            let a = load(&args.a, "a")?;
            let b = match &args.b {
                Some(_) => load(&args.b, "b")?,
                None => a.clone(),
            };
            let t = tail_profile(&a, &b);
            Table {
                header: vec!["tau", "tail"],
                json: json!({ "tails": t.tails }),
                rows: t.tails.iter().map(|(tau, n)| vec![tau.to_string(), n.to_string()]).collect(),
            }
        }
        Object::Q => {
            let a = primary(args)?;
            let cands = load_all(&args.candidates)?;
            let q = q_of(&a, &cands)?;
            Table {
                header: vec!["q"],
                json: json!({ "q": q, "q_approx": q.to_f64() }),
                rows: vec![vec![q.to_string()]],
            }
        }
        Object::EstimateC => {
            let a = primary(args)?;
            let probes = if args.probes.is_empty() { default_probes(&a, cli.seed) } else { load_all(&args.probes)? };
            let e = estimate_c(&a, &probes, args.alpha)?;
            Table {
                header: vec!["c_hat", "witness_probe", "witness_tau"],
                rows: vec![vec![e.c_hat.to_string(), e.witness_probe.to_string(), e.witness_tau.to_string()]],
                json: serde_json::to_value(&e)?,
            }
        }
    };
    emit(cli.out.as_deref(), &table.render(cli.format.unwrap_or(Format::Text))?)
}

/// Exit 0 when every asserted check passes, 1 on a failure, 2 when the
/// configuration is unusable.
fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    let config = (|| -> Result<SuiteConfig> {
        let mut cfg = match &args.config {
            Some(p) => SuiteConfig::load(p)?,
            None => SuiteConfig::default(),
        };
        if let Some(s) = &args.only {
            cfg.only(s.parse::<Statement>()?);
        }
        if !args.family.is_empty() {
            let fams = args
                .family
                .iter()
                .map(|f| f.parse::<FamilyKind>())
                .collect::<Result<Vec<_>, _>>()?;
            cfg.with_families(&fams);
        }
        if !args.n.is_empty() {
            cfg.with_sizes(&args.n);
        }
        if cli.workers.is_some() {
            cfg.workers = cli.workers;
        }
        if !cli.budget.is_empty() {
            cfg.budgets = parse_budget(&cli.budget)?;
        }
        if args.config.is_none() {
            cfg.seed = cli.seed;
        }
        Ok(cfg)
    })();
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return Ok(ExitCode::from(2));
        }
    };
    let report = match szt::run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            String::from_utf8(buf)?
        }
    };
    emit(cli.out.as_deref(), &text)?;
    eprintln!(
        "{} reports, {} failures",
        report.reports.len(),
        report.failures()
    );
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a).map(|_| ExitCode::SUCCESS),
        Command::Compute(a) => {
            let budget = parse_budget(&cli.budget)?;
            cmd_compute(cli, a, &budget).map(|_| ExitCode::SUCCESS)
        }
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
