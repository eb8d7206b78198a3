//! Command-line interface: `inspect`, `resample`, `benchmark` and `report`.
//!
//! Exit codes: 0 success, 2 invalid input or configuration, 3 algorithmic
//! failure (for example no counterfactual pairs), 4 I/O failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cf_engine::{compute_cf_set, ToleranceTable};
use crate::config::{DatasetConfig, RunConfig};
use crate::dataset::{feature_stats, summarize, write_csv, Binarization, Dataset};
use crate::error::{Error, Result};
use crate::evaluation::benchmark::cache_dir;
use crate::evaluation::report::{file_stem, load_report, metric_table_csv, write_artifacts};
use crate::evaluation::{run_benchmark, BenchmarkReport, Metric, RunOptions};
use crate::resample::{resample, Method, ResamplePlan};

#[derive(Debug, Parser)]
#[command(name = "cfa", version, about = "Counterfactual and SMOTE-family oversampling with a cross-validated benchmark")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print class counts, imbalance ratio and counterfactual pair statistics.
    Inspect(InspectArgs),
    /// Oversample one dataset and write the augmented CSV plus diagnostics JSON.
    Resample(ResampleArgs),
    /// Run the cross-validated comparison and write report, tables and ROC files.
    Benchmark(BenchmarkArgs),
    /// Re-derive metrics from a stored report and re-render its tables.
    Report(ReportArgs),
}

/// Where the data comes from: a config file or a single CSV.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "data")]
    pub config: Option<PathBuf>,
    /// Restrict to the configured dataset with this id.
    #[arg(long, requires = "config")]
    pub dataset: Option<String>,
    /// CSV file to use instead of a config.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Header name of the class column (default: last column).
    #[arg(long, requires = "data")]
    pub label: Option<String>,
    /// The file has no header row.
    #[arg(long, requires = "data")]
    pub no_header: bool,
    /// Class that becomes the positive (minority) label.
    #[arg(long, requires = "data")]
    pub positive: Option<String>,
    /// Keep only this class as negative (one-versus-one); default is every other class.
    #[arg(long, requires = "positive")]
    pub negative: Option<String>,
}

/// CFA parameters shared by the commands.
#[derive(Debug, Args)]
pub struct CfaArgs {
    /// Tolerance factor: features match when they differ by at most this times their standard deviation [default: 0.1].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Maximum number of difference features in a counterfactual pair [default: 2].
    #[arg(long)]
    pub max_diffs: Option<usize>,
    /// Drop CFA candidates that a 5-NN fitted on the input labels as majority.
    #[arg(long)]
    pub verify: bool,
}

impl CfaArgs {
    fn apply(&self, plan: &mut ResamplePlan) {
        if let Method::Cfa {
            tolerance,
            max_diffs,
            verify,
        } = &mut plan.method
        {
            if let Some(t) = self.tolerance {
                *tolerance = t;
            }
            if let Some(m) = self.max_diffs {
                *max_diffs = m;
            }
            *verify |= self.verify;
        }
    }
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cfa: CfaArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Cfa,
    Smote,
    Bsmote,
    Adasyn,
    Slsmote,
}

impl MethodName {
    fn method(self) -> Method {
        match self {
            MethodName::Cfa => Method::cfa(),
            MethodName::Smote => Method::Smote,
            MethodName::Bsmote => Method::Bsmote,
            MethodName::Adasyn => Method::Adasyn,
            MethodName::Slsmote => Method::Slsmote,
        }
    }
}

#[derive(Debug, Args)]
pub struct ResampleArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Oversampler; required unless the config lists exactly one method.
    #[arg(long, value_enum)]
    pub method: Option<MethodName>,
    /// Neighbourhood size of the SMOTE family [default: 5].
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default: the config's output_dir).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cfa: CfaArgs,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: one per core).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ignore and do not write the per-cell result cache.
    #[arg(long)]
    pub no_cache: bool,
    #[command(flatten)]
    pub cfa: CfaArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Stored report (default: <out>/report.json).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Config whose output_dir holds the report.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse-free entry point used by the binary and by tests.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Inspect(a) => inspect(&a, out),
        Command::Resample(a) => cmd_resample(&a, out),
        Command::Benchmark(a) => benchmark(&a, out),
        Command::Report(a) => report(&a, out),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
}

/// (id, dataset, config) for every dataset the arguments select.
fn select_datasets(a: &DataArgs) -> Result<(Vec<(String, Dataset)>, Option<RunConfig>)> {
    if let Some(path) = &a.config {
        let cfg = RunConfig::from_path(path)?;
        cfg.validate()?;
        let chosen: Vec<&DatasetConfig> = cfg
            .datasets
            .iter()
            .filter(|d| a.dataset.as_ref().is_none_or(|id| &d.id == id))
            .collect();
        if chosen.is_empty() {
            return Err(Error::Config(format!("no dataset {:?} in config", a.dataset)));
        }
        let loaded = chosen
            .iter()
            .map(|d| Ok((d.id.clone(), d.load()?)))
            .collect::<Result<_>>()?;
        return Ok((loaded, Some(cfg)));
    }
    let Some(path) = &a.data else {
        return Err(Error::Config("pass --config or --data".into()));
    };
    let Some(positive) = a.positive.clone() else {
        return Err(Error::Config("--data needs --positive".into()));
    };
    let binarization = match a.negative.clone() {
        Some(negative) => Binarization::Ovo { positive, negative },
        None => Binarization::Ovr { positive },
    };
    let d = DatasetConfig {
        id: path.file_stem().map_or("data".into(), |s| s.to_string_lossy().into_owned()),
        path: path.clone(),
        label_column: a.label.clone(),
        has_header: !a.no_header,
        skip_columns: vec!["provenance".into()],
        binarization,
    };
    Ok((vec![(d.id.clone(), d.load()?)], None))
}

fn inspect(a: &InspectArgs, out: &mut dyn Write) -> Result<()> {
    let tolerance = a.cfa.tolerance.unwrap_or(0.1);
    let max_diffs = a.cfa.max_diffs.unwrap_or(2);
    let (datasets, _) = select_datasets(&a.data)?;
    for (id, ds) in datasets {
        let s = summarize(&ds)?;
        say(out, &format!("dataset={id}"))?;
        say(
            out,
            &format!(
                "instances={} features={} minority={} majority={} IR={:.2}",
                s.n_instances, s.n_features, s.n_minority, s.n_majority, s.imbalance_ratio
            ),
        )?;
        let tol = ToleranceTable::from_stats(&feature_stats(&ds), tolerance)?;
        let cf = compute_cf_set(&ds, &tol, max_diffs)?;
        say(
            out,
            &format!(
                "tolerance={tolerance} max_diffs={max_diffs} pairs={} paired={} unpaired={}",
                cf.pairs().len(),
                cf.paired_majority().len(),
                cf.unpaired_majority().len()
            ),
        )?;
    }
    Ok(())
}

fn cmd_resample(a: &ResampleArgs, out: &mut dyn Write) -> Result<()> {
    let (datasets, cfg) = select_datasets(&a.data)?;
    if datasets.len() != 1 {
        return Err(Error::Config("resample needs exactly one dataset (use --dataset)".into()));
    }
    let (id, ds) = datasets.into_iter().next().expect("one dataset");
    let mut plan = match (a.method, &cfg) {
        (Some(m), _) => ResamplePlan::new(m.method()),
        (None, Some(c)) if c.methods.len() == 1 => c.methods[0].clone(),
        _ => return Err(Error::Config("name exactly one method (--method or a one-method config)".into())),
    };
    if let Some(k) = a.k {
        plan.k_neighbors = k;
    }
    plan.seed = match (&cfg, a.seed) {
        (Some(c), s) => c.resolve_seed(s)?,
        (None, Some(s)) => s,
        (None, None) => return Err(Error::Config("a seed is required (--seed)".into())),
    };
    a.cfa.apply(&mut plan);
    let out_dir = a
        .out
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.output_dir.clone()))
        .ok_or_else(|| Error::Config("no output directory (--out)".into()))?;

    let result = resample(&ds, &plan)?;
    let stem = format!("{}_{}", file_stem(&id), plan.method.tag());
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let json_path = out_dir.join(format!("{stem}.diagnostics.json"));
    let mut csv = Vec::new();
    write_csv(&result.dataset, &mut csv, Some(&result.provenance_column()))?;
    let mut json = serde_json::to_string_pretty(&result.diagnostics)?;
    json.push('\n');
    crate::evaluation::report::atomic_write(&csv_path, &csv)?;
    crate::evaluation::report::atomic_write(&json_path, json.as_bytes())?;

    let d = &result.diagnostics;
    say(
        out,
        &format!(
            "method={} rows={}->{} minority={}->{} generated={} shortfall={} out={}",
            plan.method.display_name(),
            result.n_original,
            result.dataset.n_instances(),
            d.minority_before,
            d.minority_after,
            d.generated,
            d.shortfall,
            csv_path.display()
        ),
    )?;
    for w in &d.warnings {
        say(out, &format!("warning: {w}"))?;
    }
    Ok(())
}

fn output_dir(flag: &Option<PathBuf>, cfg: Option<&RunConfig>) -> Result<PathBuf> {
    flag.clone()
        .or_else(|| cfg.and_then(|c| c.output_dir.clone()))
        .ok_or_else(|| Error::Config("no output directory (--out or config output_dir)".into()))
}

fn print_winners(report: &BenchmarkReport, out: &mut dyn Write) -> Result<()> {
    let names = report.column_names();
    for w in &report.winners {
        let parts: Vec<String> = names.iter().zip(&w.wins).map(|(c, n)| format!("{c}={n}")).collect();
        say(out, &format!("winners {}: {}", w.classifier, parts.join(" ")))?;
    }
    Ok(())
}

fn benchmark(a: &BenchmarkArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = RunConfig::from_path(&a.config)?;
    for plan in &mut cfg.methods {
        a.cfa.apply(plan);
    }
    cfg.validate()?;
    let seed = cfg.resolve_seed(a.seed)?;
    let dir = output_dir(&a.out, Some(&cfg))?;
    let spec = cfg.benchmark_spec(seed)?;
    let opts = RunOptions {
        jobs: a.jobs,
        cache_dir: (!a.no_cache).then(|| cache_dir(&dir)),
    };
    let report = run_benchmark(&spec, &opts)?;
    let written = write_artifacts(&report, &dir)?;
    say(
        out,
        &format!(
            "cells={} failed_folds={} files={} out={}",
            report.cells.len(),
            report.failed_folds(),
            written.len(),
            dir.display()
        ),
    )?;
    print_winners(&report, out)?;
    if report.all_failed() {
        let first = report
            .fold_outcomes()
            .find_map(|(_, f)| match f {
                crate::evaluation::FoldOutcome::Failed { error, .. } => Some(error.clone()),
                _ => None,
            })
            .unwrap_or_default();
        return Err(Error::InvalidParameter(format!("every benchmark cell failed; first error: {first}")));
    }
    Ok(())
}

fn report(a: &ReportArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = a.config.as_deref().map(RunConfig::from_path).transpose()?;
    let dir = output_dir(&a.out, cfg.as_ref());
    let input = match (&a.input, &dir) {
        (Some(p), _) => p.clone(),
        (None, Ok(d)) => d.join("report.json"),
        (None, Err(_)) => return Err(Error::Config("pass --input, --out or --config".into())),
    };
    let stored = load_report(&input)?;
    let report = stored.recompute()?;
    let dir = dir.unwrap_or_else(|_| input.parent().unwrap_or(Path::new(".")).to_path_buf());
    write_artifacts(&report, &dir)?;
    for suite in &report.classifiers {
        say(out, &format!("# {} (mean ROC AUC)", suite.name))?;
        out.write_all(metric_table_csv(&report, &suite.name, Metric::RocAuc).as_bytes())
            .map_err(|e| Error::io("<stdout>", e))?;
    }
    print_winners(&report, out)?;
    Ok(())
}
