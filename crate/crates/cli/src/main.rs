//! `specht-endo`: tables, relation systems, dimension checks and family scans.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage, input or
//! resource-cap errors.

mod cache;
mod record;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use specht_endo::checks::{paper_examples, run_selftest, SELFTEST_MAX_R};
use specht_endo::partitions::{enumerate_tables_capped, Composition, Partition, StaircaseFamily, TabMatrix};
use specht_endo::relations::{relevance_system, solve_relevance, Mutation, RelationSystem};
use specht_endo::staircase::{analyze_family, flat_relevance_system, AnalyzeOptions};
use specht_endo::tabloids::{end_dimension_oracle, TabloidContext};
use specht_endo::Caps;

use crate::cache::Cache;
use crate::record::ResultRecord;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] specht_endo::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_assertion() => 1,
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParityFilter {
    Match,
    Mismatch,
    All,
}

#[derive(Parser, Debug)]
#[command(name = "specht-endo", version, about = "GF(2) endomorphism algebras of Specht modules via tabloid tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest table set any single computation may enumerate.
    #[arg(long, global = true, default_value_t = Caps::default().max_tables, value_parser = clap::value_parser!(usize))]
    max_tables: usize,
    /// Bit budget for any materialized tabloid map or basis.
    #[arg(long, global = true, default_value_t = Caps::default().max_bits)]
    max_bits: u64,
    /// Worker threads for parallel stages (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// JSON-lines file of scan results, reused across runs
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Recompute even when the cache holds a record.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Args, Debug, Clone)]
struct Target {
    #[arg(long, value_parser = parse_partition)]
    lambda: Option<Partition>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
}

enum Resolved {
    Lambda(Partition),
    Family(StaircaseFamily),
}

impl Target {
    fn resolve(&self) -> Result<Resolved, CliError> {
        match (&self.lambda, self.a, self.m, self.b) {
            (Some(l), None, None, None) => Ok(Resolved::Lambda(l.clone())),
            (None, Some(a), Some(m), Some(b)) => Ok(Resolved::Family(StaircaseFamily::new(a, m, b)?)),
            _ => Err(CliError::Usage("give either --lambda or all of --a --m --b".into())),
        }
    }

    fn family(&self) -> Result<StaircaseFamily, CliError> {
        match self.resolve()? {
            Resolved::Family(f) => Ok(f),
            Resolved::Lambda(l) => Err(CliError::Usage(format!("({l}) needs to be given as --a --m --b"))),
        }
    }
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

fn parse_composition(s: &str) -> Result<Composition, String> {
    s.parse::<Composition>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List Tab(alpha, beta) in canonical order.
    Tables {
        #[arg(long, value_parser = parse_composition)]
        alpha: Composition,
        #[arg(long, value_parser = parse_composition)]
        beta: Composition,
    },
    /// Dimension of the relevant homomorphisms (flat system for --a --m --b).
    RelDim(Target),
    /// Dimension of End(Sp(lambda)) from the tabloid oracle.
    EndDim(Target),
    /// Check the one-dimensional endomorphism theorem for one family.
    Verify(Target),
    /// Analyze every staircase family up to a degree.
    Scan {
        /// Largest degree r = a + b + m(m-1)/2 - 1 to include
        #[arg(long)]
        max_r: u32,
        #[arg(long, value_enum, default_value_t = ParityFilter::All)]
        parity: ParityFilter,
        /// Skip the tabloid End oracle.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Print the relation system as JSON.
    DumpRelations(Target),
    /// Recompute the displayed worked examples.
    PaperExamples,
    /// Run the invariant suite.
    Selftest {
        /// Largest degree checked by each invariant
        #[arg(long, default_value_t = SELFTEST_MAX_R)]
        max_r: u32,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(text: String) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

fn matrix_cell(t: &TabMatrix) -> String {
    t.to_rows()
        .iter()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    if cli.max_tables == 0 || cli.max_bits == 0 {
        return Err(CliError::Usage("caps must be positive".into()));
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let caps = Caps {
        max_tables: cli.max_tables,
        max_bits: cli.max_bits,
    };
    let ctx = TabloidContext::new(caps);
    match &cli.command {
        Command::Tables { alpha, beta } => {
            let tables = enumerate_tables_capped(alpha, beta, caps.max_tables)?;
            emit(match cli.format {
                Format::Json => json_line(&tables.iter().map(TabMatrix::to_rows).collect::<Vec<_>>()),
                Format::Csv => std::iter::once("index,entries".to_string())
                    .chain(tables.iter().enumerate().map(|(i, t)| format!("{},{}", i + 1, matrix_cell(t))))
                    .map(|l| l + "\n")
                    .collect(),
                Format::Text => tables.iter().map(|t| format!("{t}\n")).collect(),
            })?;
        }
        Command::RelDim(target) => {
            let (key, system, sys) = match target.resolve()? {
                Resolved::Lambda(l) => (l.to_string(), "full", relevance_system(&l, &caps)?),
                Resolved::Family(f) => (f.lambda.to_string(), "flat", flat_relevance_system(&f, &caps)?),
            };
            let rel = solve_relevance(&sys);
            #[derive(Serialize)]
            struct Out {
                key: String,
                system: &'static str,
                num_tables: usize,
                num_relations: usize,
                rel_dim: usize,
                support: Vec<Vec<Vec<u32>>>,
            }
            let out = Out {
                key,
                system,
                num_tables: sys.num_columns(),
                num_relations: sys.rows().len(),
                rel_dim: rel.dim,
                support: rel.support.iter().map(TabMatrix::to_rows).collect(),
            };
            emit(match cli.format {
                Format::Json => json_line(&out),
                Format::Csv => format!(
                    "key,system,num_tables,num_relations,rel_dim\n\"{}\",{},{},{},{}\n",
                    out.key, out.system, out.num_tables, out.num_relations, out.rel_dim
                ),
                Format::Text => format!(
                    "lambda=({}) system={} tables={} relations={} rel_dim={}\nsupport: {}\n",
                    out.key,
                    out.system,
                    out.num_tables,
                    out.num_relations,
                    out.rel_dim,
                    rel.support.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
                ),
            })?;
        }
        Command::EndDim(target) => {
            let lambda = match target.resolve()? {
                Resolved::Lambda(l) => l,
                Resolved::Family(f) => f.lambda,
            };
            let end_dim = end_dimension_oracle(&ctx, &lambda)?;
            #[derive(Serialize)]
            struct Out {
                key: String,
                r: u32,
                end_dim: usize,
            }
            let out = Out {
                key: lambda.to_string(),
                r: lambda.degree(),
                end_dim,
            };
            emit(match cli.format {
                Format::Json => json_line(&out),
                Format::Csv => format!("key,r,end_dim\n\"{}\",{},{}\n", out.key, out.r, out.end_dim),
                Format::Text => format!("lambda=({}) end_dim={}\n", out.key, out.end_dim),
            })?;
        }
        Command::Verify(target) => {
            let family = target.family()?;
            if !family.parity_holds() {
                return Err(specht_endo::Error::Parity {
                    a: family.a,
                    m: family.m,
                    b: family.b,
                }
                .into());
            }
            let report = analyze_family(&family, &ctx, AnalyzeOptions::default())?;
            emit(match cli.format {
                Format::Json => json_line(&report),
                Format::Csv => format!(
                    "a,m,b,r,parity,num_tables,rel_dim,end_dim,failed\n{},{},{},{},{},{},{},{},{}\n",
                    report.a,
                    report.m,
                    report.b,
                    report.r,
                    report.parity,
                    report.num_tables,
                    report.rel_dim,
                    report.end_dim.map(|d| d.to_string()).unwrap_or_default(),
                    report.failures().join(";")
                ),
                Format::Text => {
                    let mut s = format!(
                        "family ({},{},{}) lambda=({}) r={} tables={} rel_dim={} end_dim={}\n",
                        report.a,
                        report.m,
                        report.b,
                        family.lambda,
                        report.r,
                        report.num_tables,
                        report.rel_dim,
                        report.end_dim.map(|d| d.to_string()).unwrap_or_else(|| "skipped".into())
                    );
                    for (name, status) in &report.audits {
                        s.push_str(&format!("  {name}: {}\n", serde_json::to_value(status).unwrap().as_str().unwrap()));
                    }
                    s
                }
            })?;
            report.ensure_passed()?;
        }
        Command::Scan { max_r, parity, no_oracle } => {
            return scan(cli, &ctx, *max_r, *parity, !no_oracle);
        }
        Command::DumpRelations(target) => {
            let sys: RelationSystem = match target.resolve()? {
                Resolved::Lambda(l) => relevance_system(&l, &caps)?,
                Resolved::Family(f) => flat_relevance_system(&f, &caps)?,
            };
            emit(match cli.format {
                Format::Json => json_line(&sys),
                Format::Csv => std::iter::once("row,provenance,columns".to_string())
                    .chain(sys.rows().iter().zip(sys.provenance()).enumerate().map(|(i, (r, p))| {
                        let cols: Vec<String> = r.iter().map(|c| (c + 1).to_string()).collect();
                        format!("{},\"{p}\",{}", i + 1, cols.join(" "))
                    }))
                    .map(|l| l + "\n")
                    .collect(),
                Format::Text => sys
                    .rows()
                    .iter()
                    .zip(sys.provenance())
                    .map(|(r, p)| {
                        let terms: Vec<String> = r.iter().map(|&c| format!("h{}", sys.tables()[c as usize])).collect();
                        format!("{p}: {} = 0\n", terms.join(" + "))
                    })
                    .collect(),
            })?;
        }
        Command::PaperExamples => {
            let outcomes = paper_examples(&ctx)?;
            emit(match cli.format {
                Format::Json => outcomes.iter().map(json_line).collect(),
                Format::Csv => std::iter::once("name,passed,detail".to_string())
                    .chain(outcomes.iter().map(|o| format!("{},{},\"{}\"", o.name, o.passed, o.detail)))
                    .map(|l| l + "\n")
                    .collect(),
                Format::Text => outcomes
                    .iter()
                    .map(|o| format!("{} {}: {}\n", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail))
                    .collect(),
            })?;
            if let Some(o) = outcomes.iter().find(|o| !o.passed) {
                return Err(CliError::Failed(format!("example {} does not reproduce", o.name)));
            }
        }
        Command::Selftest { max_r, inject_fault } => {
            let mutation = if *inject_fault { Mutation::FlipRowParity } else { Mutation::None };
            let report = run_selftest(&caps, *max_r, mutation)?;
            emit(match cli.format {
                Format::Json => json_line(&report),
                Format::Csv => std::iter::once("name,passed,cases,detail".to_string())
                    .chain(report.invariants.iter().map(|o| {
                        format!("{},{},{},\"{}\"", o.name, o.passed, o.cases, o.detail.clone().unwrap_or_default())
                    }))
                    .map(|l| l + "\n")
                    .collect(),
                Format::Text => report
                    .invariants
                    .iter()
                    .map(|o| {
                        let status = if o.passed { "PASS" } else { "FAIL" };
                        let detail = o.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default();
                        format!("{status} {} ({} cases){detail}\n", o.name, o.cases)
                    })
                    .collect(),
            })?;
            if let Some(o) = report.first_failure() {
                return Err(CliError::Failed(format!("invariant {} failed", o.name)));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn scan(cli: &Cli, ctx: &TabloidContext, max_r: u32, filter: ParityFilter, oracle: bool) -> Result<ExitCode, CliError> {
    let families: Vec<StaircaseFamily> = StaircaseFamily::all_up_to(max_r)
        .into_iter()
        .filter(|f| match filter {
            ParityFilter::Match => f.parity_holds(),
            ParityFilter::Mismatch => !f.parity_holds(),
            ParityFilter::All => true,
        })
        .collect();
    let mut cache = cli.cache.as_deref().map(Cache::open).transpose()?;
    let cached = |f: &StaircaseFamily| -> Option<ResultRecord> {
        if cli.force {
            return None;
        }
        cache.as_ref()?.get(&f.lambda.to_string()).cloned()
    };
    let slots: Vec<Option<ResultRecord>> = families.iter().map(cached).collect();
    let computed: Vec<Option<ResultRecord>> = families
        .par_iter()
        .zip(&slots)
        .map(|(f, hit)| {
            if hit.is_some() {
                return Ok(None);
            }
            let report = analyze_family(f, ctx, AnalyzeOptions { oracle })?;
            Ok(Some(ResultRecord::from_report(f.lambda.to_string(), &report)))
        })
        .collect::<Result<_, specht_endo::Error>>()?;
    let fresh: Vec<ResultRecord> = computed.iter().flatten().cloned().collect();
    if let Some(c) = cache.as_mut() {
        c.append(&fresh)?;
    }
    let records: Vec<ResultRecord> = slots
        .into_iter()
        .zip(computed)
        .map(|(hit, new)| hit.or(new).expect("every family is cached or computed"))
        .collect();

    emit(match cli.format {
        Format::Json => records.iter().map(json_line).collect(),
        Format::Csv => std::iter::once(ResultRecord::CSV_HEADER.to_string())
            .chain(records.iter().map(ResultRecord::csv_line))
            .map(|l| l + "\n")
            .collect(),
        Format::Text => records.iter().map(|r| r.text_line() + "\n").collect(),
    })?;
    let failed: Vec<&ResultRecord> = records
        .iter()
        .filter(|r| r.parity && (r.rel_dim != 1 || !r.failed_checks.is_empty()))
        .collect();
    if let Some(r) = failed.first() {
        return Err(CliError::Failed(format!(
            "{} parity families fail, first ({},{},{}): {}",
            failed.len(),
            r.a,
            r.m,
            r.b,
            r.failed_checks.join(", ")
        )));
    }
    Ok(ExitCode::SUCCESS)
}
