//! Cross-validated sweep over datasets x oversamplers x classifiers.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::confusion::{confusion_at, ConfusionMatrix};
use super::metrics::{metrics, Metric, MetricSet};
use super::report::atomic_write;
use super::roc::{roc, RocCurve};
use crate::classifiers::{grid_search_with, train, ClassifierGrid, ClassifierSpec, TrainTransform, DECISION_THRESHOLD};
use crate::dataset::{stratified_kfold, summarize, Dataset, DatasetSummary, Label};
use crate::error::{Error, Result};
use crate::resample::{resample, ResamplePlan, ResampleResult};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Name of the implicit no-resampling column.
pub const BASELINE: &str = "Baseline";

#[derive(Debug, Clone)]
pub struct BenchmarkDataset {
    pub id: String,
    pub data: Dataset,
}

/// A named classifier family and the grid searched inside each training fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierSuite {
    pub name: String,
    pub grid: ClassifierGrid,
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub datasets: Vec<BenchmarkDataset>,
    /// Oversamplers to compare; the baseline column is always added.
    pub methods: Vec<ResamplePlan>,
    pub classifiers: Vec<ClassifierSuite>,
    pub k_folds: usize,
    /// Folds of the grid search nested in each outer training fold.
    pub inner_folds: usize,
    pub metric: Metric,
    pub seed: u64,
}

impl BenchmarkSpec {
    pub fn new(datasets: Vec<BenchmarkDataset>, methods: Vec<ResamplePlan>, classifiers: Vec<ClassifierSuite>, seed: u64) -> Self {
        BenchmarkSpec {
            datasets,
            methods,
            classifiers,
            k_folds: 5,
            inner_folds: 5,
            metric: Metric::RocAuc,
            seed,
        }
    }

    /// Baseline first, then the methods in report column order.
    pub fn columns(&self) -> Vec<Column> {
        let mut methods = self.methods.clone();
        methods.sort_by_key(|p| p.method.column_rank());
        std::iter::once(Column::baseline())
            .chain(methods.into_iter().map(Column::method))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() || self.classifiers.is_empty() {
            return Err(Error::Config("a benchmark needs at least one dataset and one classifier".into()));
        }
        if self.k_folds < 2 || self.inner_folds < 2 {
            return Err(Error::Config("k_folds and inner_folds must be >= 2".into()));
        }
        unique(self.datasets.iter().map(|d| d.id.as_str()), "dataset id")?;
        unique(self.classifiers.iter().map(|c| c.name.as_str()), "classifier name")?;
        let columns = self.columns();
        unique(columns.iter().map(|c| c.name.as_str()), "method")?;
        for plan in &self.methods {
            plan.validate()?;
        }
        for c in &self.classifiers {
            c.grid.validate()?;
        }
        for d in &self.datasets {
            d.data.require_both_classes()?;
        }
        Ok(())
    }
}

fn unique<'a>(names: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Config(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(())
}

/// A report column: the baseline or one oversampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub plan: Option<ResamplePlan>,
}

impl Column {
    pub fn baseline() -> Self {
        Column {
            name: BASELINE.to_string(),
            plan: None,
        }
    }

    pub fn method(plan: ResamplePlan) -> Self {
        Column {
            name: plan.method.display_name().to_string(),
            plan: Some(plan),
        }
    }
}

/// Seed for one coordinate of the sweep: SHA-256 over the base seed and the
/// length-prefixed parts, first eight bytes little-endian.
pub fn derive_seed(base: u64, parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Result of scanning one resampled training set for test-fold rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LeakageAudit {
    pub synthetic_rows: usize,
    /// Synthetic rows whose provenance names a test-fold row.
    pub index_violations: usize,
    /// Synthetic rows equal to a test-fold vector that no original training row shares.
    pub value_violations: usize,
}

impl LeakageAudit {
    pub fn is_clean(&self) -> bool {
        self.index_violations == 0 && self.value_violations == 0
    }
}

fn row_key(row: &[f64]) -> Vec<u64> {
    // +0.0 and -0.0 compare equal, so give them the same key.
    row.iter().map(|&v| if v == 0.0 { 0 } else { v.to_bits() }).collect()
}

/// Check a resampling of `ds.subset(train_idx)` against the held-out rows.
/// Provenance row numbers index the training subset and are mapped back
/// through `train_idx`.
pub fn audit_leakage(ds: &Dataset, train_idx: &[usize], test_idx: &[usize], result: &ResampleResult) -> LeakageAudit {
    let test: HashSet<usize> = test_idx.iter().copied().collect();
    let train_keys: HashSet<Vec<u64>> = train_idx.iter().map(|&i| row_key(ds.row(i))).collect();
    let test_only: HashSet<Vec<u64>> = test_idx
        .iter()
        .map(|&i| row_key(ds.row(i)))
        .filter(|k| !train_keys.contains(k))
        .collect();
    let mut audit = LeakageAudit {
        synthetic_rows: result.synthetic.len(),
        ..Default::default()
    };
    for s in &result.synthetic {
        let sources = s.provenance.source_rows();
        if sources
            .iter()
            .any(|&r| train_idx.get(r).is_none_or(|orig| test.contains(orig)))
        {
            audit.index_violations += 1;
        }
        if test_only.contains(&row_key(&s.values)) {
            audit.value_violations += 1;
        }
    }
    audit
}

/// Outcome of one (dataset, column, classifier, fold) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldRecord {
    pub fold: usize,
    pub seed: u64,
    /// Configuration chosen by the nested grid search and fitted on the fold.
    pub config: ClassifierSpec,
    /// Mean inner-CV metric of every configuration, in grid order; empty for one-config grids.
    pub grid_scores: Vec<f64>,
    pub n_train: usize,
    pub n_synthetic: usize,
    /// Resampler warnings and inner folds the grid search had to leave out.
    pub warnings: Vec<String>,
    pub audit: LeakageAudit,
    /// Held-out rows, their true labels and the model's scores: everything below is derived from these.
    pub test_indices: Vec<usize>,
    pub actual: Vec<Label>,
    pub scores: Vec<f64>,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricSet,
    pub roc: RocCurve,
}

impl FoldRecord {
    fn derive_metrics(&mut self) -> Result<()> {
        self.confusion = confusion_at(&self.actual, &self.scores, DECISION_THRESHOLD)?;
        let mut m = metrics(&self.confusion);
        let (curve, auc) = roc(&self.actual, &self.scores)?;
        m.roc_auc = Some(auc);
        self.metrics = m;
        self.roc = curve;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum FoldOutcome {
    Ok(FoldRecord),
    Failed { fold: usize, error: String },
}

impl FoldOutcome {
    pub fn fold(&self) -> usize {
        match self {
            FoldOutcome::Ok(r) => r.fold,
            FoldOutcome::Failed { fold, .. } => *fold,
        }
    }

    pub fn record(&self) -> Option<&FoldRecord> {
        match self {
            FoldOutcome::Ok(r) => Some(r),
            FoldOutcome::Failed { .. } => None,
        }
    }
}

/// Means or population standard deviations over folds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub roc_auc: f64,
    pub balanced_accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl MetricValues {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::RocAuc => self.roc_auc,
            Metric::BalancedAccuracy => self.balanced_accuracy,
            Metric::Recall => self.recall,
            Metric::Precision => self.precision,
            Metric::F1 => self.f1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    /// Folds that completed; fewer than k when some failed.
    pub n_folds: usize,
    pub mean: MetricValues,
    pub std: MetricValues,
}

fn summarize_folds(records: &[&FoldRecord]) -> Option<CellSummary> {
    if records.is_empty() {
        return None;
    }
    let n = records.len() as f64;
    let stat = |metric: Metric| {
        let vals: Vec<f64> = records.iter().map(|r| metric.of(&r.metrics)).collect();
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        (mean, var.sqrt())
    };
    let (auc, ba, rec, prec, f1) = (
        stat(Metric::RocAuc),
        stat(Metric::BalancedAccuracy),
        stat(Metric::Recall),
        stat(Metric::Precision),
        stat(Metric::F1),
    );
    Some(CellSummary {
        n_folds: records.len(),
        mean: MetricValues {
            roc_auc: auc.0,
            balanced_accuracy: ba.0,
            recall: rec.0,
            precision: prec.0,
            f1: f1.0,
        },
        std: MetricValues {
            roc_auc: auc.1,
            balanced_accuracy: ba.1,
            recall: rec.1,
            precision: prec.1,
            f1: f1.1,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub dataset: String,
    pub column: String,
    pub classifier: String,
    pub folds: Vec<FoldOutcome>,
    pub summary: Option<CellSummary>,
    /// Highest mean AUC for this (dataset, classifier); ties go to the earlier column.
    pub winner: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub id: String,
    pub summary: DatasetSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinnerCount {
    pub classifier: String,
    /// Wins per column, in column order.
    pub wins: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub schema_version: u32,
    pub seed: u64,
    pub k_folds: usize,
    pub inner_folds: usize,
    pub grid_metric: Metric,
    pub datasets: Vec<DatasetEntry>,
    pub columns: Vec<Column>,
    pub classifiers: Vec<ClassifierSuite>,
    /// Ordered by dataset, then classifier, then column.
    pub cells: Vec<CellReport>,
    pub winners: Vec<WinnerCount>,
}

impl BenchmarkReport {
    pub fn cell(&self, dataset: &str, column: &str, classifier: &str) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.column == column && c.classifier == classifier)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn fold_outcomes(&self) -> impl Iterator<Item = (&CellReport, &FoldOutcome)> {
        self.cells.iter().flat_map(|c| c.folds.iter().map(move |f| (c, f)))
    }

    pub fn failed_folds(&self) -> usize {
        self.fold_outcomes()
            .filter(|(_, f)| matches!(f, FoldOutcome::Failed { .. }))
            .count()
    }

    pub fn all_failed(&self) -> bool {
        self.fold_outcomes().all(|(_, f)| f.record().is_none())
    }

    /// Re-derive every metric, ROC curve, summary and winner from the stored
    /// labels and scores.
    pub fn recompute(&self) -> Result<BenchmarkReport> {
        let mut out = self.clone();
        for cell in &mut out.cells {
            for f in &mut cell.folds {
                if let FoldOutcome::Ok(r) = f {
                    r.derive_metrics()?;
                }
            }
        }
        out.finalize();
        Ok(out)
    }

    fn finalize(&mut self) {
        for cell in &mut self.cells {
            let records: Vec<&FoldRecord> = cell.folds.iter().filter_map(FoldOutcome::record).collect();
            cell.summary = summarize_folds(&records);
            cell.winner = false;
        }
        let columns: Vec<String> = self.column_names().iter().map(|s| s.to_string()).collect();
        let datasets: Vec<String> = self.datasets.iter().map(|d| d.id.clone()).collect();
        let classifiers: Vec<String> = self.classifiers.iter().map(|c| c.name.clone()).collect();
        let mut winners = Vec::new();
        for clf in &classifiers {
            let mut wins = vec![0; columns.len()];
            for d in &datasets {
                let mut best: Option<(usize, f64)> = None;
                for (ci, col) in columns.iter().enumerate() {
                    let Some(s) = self.cell(d, col, clf).and_then(|c| c.summary) else {
                        continue;
                    };
                    if best.is_none_or(|(_, b)| s.mean.roc_auc > b) {
                        best = Some((ci, s.mean.roc_auc));
                    }
                }
                if let Some((ci, _)) = best {
                    wins[ci] += 1;
                    let col = &columns[ci];
                    if let Some(cell) = self
                        .cells
                        .iter_mut()
                        .find(|c| &c.dataset == d && &c.column == col && &c.classifier == clf)
                    {
                        cell.winner = true;
                    }
                }
            }
            winners.push(WinnerCount {
                classifier: clf.clone(),
                wins,
            });
        }
        self.winners = winners;
    }
}

/// Execution options that do not change results.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Directory of per-cell results reused across runs.
    pub cache_dir: Option<PathBuf>,
}

struct Cache {
    dir: PathBuf,
    writer: Mutex<()>,
}

impl Cache {
    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn load(&self, key: &str) -> Option<FoldOutcome> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn store(&self, key: &str, outcome: &FoldOutcome) -> Result<()> {
        let json = serde_json::to_vec(outcome)?;
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        atomic_write(&self.path(key), &json)
    }
}

fn content_hash(value: &impl Serialize) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

struct Unit<'a> {
    dataset: &'a BenchmarkDataset,
    dataset_hash: &'a str,
    column: &'a Column,
    fold: usize,
    train_idx: Vec<usize>,
    test_idx: Vec<usize>,
}

/// Run every cell. Per-cell failures are recorded in the report; only an
/// invalid specification or a cache I/O failure aborts the sweep.
pub fn run_benchmark(spec: &BenchmarkSpec, opts: &RunOptions) -> Result<BenchmarkReport> {
    spec.validate()?;
    let cache = match &opts.cache_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            Some(Cache {
                dir: dir.clone(),
                writer: Mutex::new(()),
            })
        }
        None => None,
    };
    match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| run_inner(spec, cache.as_ref())),
        None => run_inner(spec, cache.as_ref()),
    }
}

fn run_inner(spec: &BenchmarkSpec, cache: Option<&Cache>) -> Result<BenchmarkReport> {
    let columns = spec.columns();
    let hashes: Vec<String> = spec
        .datasets
        .iter()
        .map(|d| content_hash(&d.data))
        .collect::<Result<_>>()?;

    let mut units = Vec::new();
    let mut fold_failures: Vec<Option<String>> = Vec::new();
    for (d, hash) in spec.datasets.iter().zip(&hashes) {
        let folds = stratified_kfold(&d.data, spec.k_folds, derive_seed(spec.seed, &[&d.id, "folds"]));
        for column in &columns {
            for fold in 0..spec.k_folds {
                let (train_idx, test_idx, failure) = match &folds {
                    Ok(a) => (a.train_indices(fold), a.test_indices(fold), None),
                    Err(e) => (Vec::new(), Vec::new(), Some(e.to_string())),
                };
                units.push(Unit {
                    dataset: d,
                    dataset_hash: hash,
                    column,
                    fold,
                    train_idx,
                    test_idx,
                });
                fold_failures.push(failure);
            }
        }
    }

    // outcomes[unit][classifier]
    let outcomes: Vec<Vec<FoldOutcome>> = units
        .par_iter()
        .zip(fold_failures.par_iter())
        .map(|(unit, failure)| match failure {
            Some(e) => Ok(spec
                .classifiers
                .iter()
                .map(|_| FoldOutcome::Failed {
                    fold: unit.fold,
                    error: e.clone(),
                })
                .collect()),
            None => run_unit(spec, unit, cache),
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for d in &spec.datasets {
        for (ci, suite) in spec.classifiers.iter().enumerate() {
            for column in &columns {
                let folds = units
                    .iter()
                    .zip(&outcomes)
                    .filter(|(u, _)| u.dataset.id == d.id && u.column.name == column.name)
                    .map(|(_, o)| o[ci].clone())
                    .collect();
                cells.push(CellReport {
                    dataset: d.id.clone(),
                    column: column.name.clone(),
                    classifier: suite.name.clone(),
                    folds,
                    summary: None,
                    winner: false,
                });
            }
        }
    }

    let mut report = BenchmarkReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: spec.seed,
        k_folds: spec.k_folds,
        inner_folds: spec.inner_folds,
        grid_metric: spec.metric,
        datasets: spec
            .datasets
            .iter()
            .map(|d| {
                Ok(DatasetEntry {
                    id: d.id.clone(),
                    summary: summarize(&d.data)?,
                })
            })
            .collect::<Result<_>>()?,
        columns,
        classifiers: spec.classifiers.clone(),
        cells,
        winners: Vec::new(),
    };
    report.finalize();
    Ok(report)
}

#[derive(Serialize)]
struct CacheKey<'a> {
    schema: u32,
    dataset: &'a str,
    dataset_hash: &'a str,
    k_folds: usize,
    inner_folds: usize,
    metric: Metric,
    seed: u64,
    fold: usize,
    column: &'a Column,
    classifier: &'a ClassifierSuite,
}

fn run_unit(spec: &BenchmarkSpec, unit: &Unit<'_>, cache: Option<&Cache>) -> Result<Vec<FoldOutcome>> {
    let keys: Vec<String> = spec
        .classifiers
        .iter()
        .map(|suite| {
            content_hash(&CacheKey {
                schema: REPORT_SCHEMA_VERSION,
                dataset: &unit.dataset.id,
                dataset_hash: unit.dataset_hash,
                k_folds: spec.k_folds,
                inner_folds: spec.inner_folds,
                metric: spec.metric,
                seed: spec.seed,
                fold: unit.fold,
                column: unit.column,
                classifier: suite,
            })
        })
        .collect::<Result<_>>()?;
    let mut outcomes: Vec<Option<FoldOutcome>> = match cache {
        Some(c) => keys.iter().map(|k| c.load(k)).collect(),
        None => vec![None; keys.len()],
    };
    if outcomes.iter().all(Option::is_some) {
        return Ok(outcomes.into_iter().flatten().collect());
    }

    let ds = &unit.dataset.data;
    let fold_tag = unit.fold.to_string();
    let train_rows = ds.subset(&unit.train_idx);
    let test_rows = ds.subset(&unit.test_idx);
    let resampled = match &unit.column.plan {
        None => Ok(None),
        Some(plan) => {
            let seed = derive_seed(spec.seed, &[&unit.dataset.id, &unit.column.name, "resample", &fold_tag]);
            resample(&train_rows, &plan.clone().with_seed(seed)).map(Some)
        }
    };

    for (ci, suite) in spec.classifiers.iter().enumerate() {
        if outcomes[ci].is_some() {
            continue;
        }
        let seed = derive_seed(spec.seed, &[&unit.dataset.id, &unit.column.name, &suite.name, &fold_tag]);
        let outcome = match &resampled {
            Err(e) => FoldOutcome::Failed {
                fold: unit.fold,
                error: e.to_string(),
            },
            Ok(r) => match run_cell(spec, unit, suite, seed, &train_rows, &test_rows, r.as_ref()) {
                Ok(rec) => FoldOutcome::Ok(rec),
                Err(e) => FoldOutcome::Failed {
                    fold: unit.fold,
                    error: e.to_string(),
                },
            },
        };
        if let Some(c) = cache {
            c.store(&keys[ci], &outcome)?;
        }
        outcomes[ci] = Some(outcome);
    }
    Ok(outcomes.into_iter().flatten().collect())
}

fn run_cell(
    spec: &BenchmarkSpec,
    unit: &Unit<'_>,
    suite: &ClassifierSuite,
    seed: u64,
    train_rows: &Dataset,
    test_rows: &Dataset,
    resampled: Option<&ResampleResult>,
) -> Result<FoldRecord> {
    let configs = suite.grid.expand();
    let mut warnings = resampled.map_or(Vec::new(), |r| r.diagnostics.warnings.clone());
    let (config, grid_scores) = if configs.len() == 1 {
        (configs[0].clone(), Vec::new())
    } else {
        let plan = unit.column.plan.clone();
        let transform = move |d: &Dataset, s: u64| -> Result<Dataset> {
            let plan = plan.clone().expect("transform only built for resampling columns");
            Ok(resample(d, &plan.with_seed(s))?.dataset)
        };
        let t: Option<&TrainTransform<'_>> = if unit.column.plan.is_some() {
            Some(&transform)
        } else {
            None
        };
        let report = grid_search_with(&configs, train_rows, spec.inner_folds, spec.metric, seed, t)?;
        let scores = report.entries.iter().map(|e| e.mean).collect();
        for skip in &report.skipped_folds {
            warnings.push(format!("grid search left out inner fold {}: {}", skip.fold, skip.error));
        }
        (report.best_spec().clone(), scores)
    };

    let fit_on = resampled.map_or(train_rows, |r| &r.dataset);
    let model = train(&config, fit_on, seed)?;
    let scores = model.score_all(test_rows)?;
    let audit = match resampled {
        Some(r) => audit_leakage(&unit.dataset.data, &unit.train_idx, &unit.test_idx, r),
        None => LeakageAudit::default(),
    };
    let mut rec = FoldRecord {
        fold: unit.fold,
        seed,
        config,
        grid_scores,
        n_train: fit_on.n_instances(),
        n_synthetic: resampled.map_or(0, |r| r.synthetic.len()),
        warnings,
        audit,
        test_indices: unit.test_idx.clone(),
        actual: test_rows.labels().to_vec(),
        scores,
        confusion: ConfusionMatrix::default(),
        metrics: metrics(&ConfusionMatrix::default()),
        roc: RocCurve { points: Vec::new() },
    };
    rec.derive_metrics()?;
    Ok(rec)
}

/// Convenience: the `cache` directory under an output directory.
pub fn cache_dir(output_dir: &Path) -> PathBuf {
    output_dir.join("cache")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::synthetic::{gaussian_blobs, BlobSpec};
    use crate::resample::Method;

    fn small_spec(methods: Vec<ResamplePlan>) -> BenchmarkSpec {
        let data = gaussian_blobs(&BlobSpec::two_d(60, 12), 4).unwrap();
        BenchmarkSpec::new(
            vec![BenchmarkDataset {
                id: "blobs".into(),
                data,
            }],
            methods,
            vec![ClassifierSuite {
                name: "KNN".into(),
                grid: ClassifierGrid::Knn { n_neighbors: vec![5] },
            }],
            7,
        )
    }

    #[test]
    fn seeds_depend_on_every_coordinate() {
        let a = derive_seed(1, &["d", "SMOTE", "KNN", "0"]);
        assert_eq!(a, derive_seed(1, &["d", "SMOTE", "KNN", "0"]));
        assert_ne!(a, derive_seed(2, &["d", "SMOTE", "KNN", "0"]));
        assert_ne!(a, derive_seed(1, &["d", "SMOTE", "KNN", "1"]));
        // Length prefixes keep part boundaries significant.
        assert_ne!(derive_seed(1, &["ab", "c"]), derive_seed(1, &["a", "bc"]));
    }

    #[test]
    fn baseline_only_is_plain_cross_validation() {
        let report = run_benchmark(&small_spec(Vec::new()), &RunOptions::default()).unwrap();
        assert_eq!(report.column_names(), vec![BASELINE]);
        assert_eq!(report.cells.len(), 1);
        let cell = &report.cells[0];
        assert_eq!(cell.folds.len(), 5);
        assert!(cell.winner);
        assert_eq!(report.winners[0].wins, vec![1]);
        let tested: usize = cell.folds.iter().map(|f| f.record().unwrap().test_indices.len()).sum();
        assert_eq!(tested, 72);
    }

    #[test]
    fn columns_follow_report_order_and_audit_is_clean() {
        let spec = small_spec(vec![
            ResamplePlan::new(Method::cfa()),
            ResamplePlan::new(Method::Smote),
        ]);
        let report = run_benchmark(&spec, &RunOptions::default()).unwrap();
        assert_eq!(report.column_names(), vec![BASELINE, "SMOTE", "CFA"]);
        for (_, f) in report.fold_outcomes() {
            if let Some(r) = f.record() {
                assert!(r.audit.is_clean());
            }
        }
        assert_eq!(report.winners[0].wins.iter().sum::<usize>(), 1);
        assert_eq!(report.recompute().unwrap(), report);
    }

    #[test]
    fn failing_method_is_isolated() {
        // k larger than the minority in any training fold.
        let spec = small_spec(vec![ResamplePlan::new(Method::Smote).with_k(50)]);
        let report = run_benchmark(&spec, &RunOptions::default()).unwrap();
        let bad = report.cell("blobs", "SMOTE", "KNN").unwrap();
        assert!(bad.summary.is_none());
        assert!(bad.folds.iter().all(|f| matches!(f, FoldOutcome::Failed { .. })));
        assert!(report.cell("blobs", BASELINE, "KNN").unwrap().summary.is_some());
        assert_eq!(report.failed_folds(), 5);
        assert!(!report.all_failed());
    }

    #[test]
    fn cache_reproduces_results() {
        let dir = tempfile::tempdir().unwrap();
        let spec = small_spec(vec![ResamplePlan::new(Method::Smote)]);
        let opts = RunOptions {
            jobs: Some(2),
            cache_dir: Some(dir.path().to_path_buf()),
        };
        let first = run_benchmark(&spec, &opts).unwrap();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 10);
        let second = run_benchmark(&spec, &opts).unwrap();
        assert_eq!(
            serde_json::to_string(&first).unwrap(),
            serde_json::to_string(&second).unwrap()
        );
        assert_eq!(first, run_benchmark(&spec, &RunOptions::default()).unwrap());
    }

    #[test]
    fn duplicate_columns_are_rejected() {
        let spec = small_spec(vec![ResamplePlan::new(Method::Smote), ResamplePlan::new(Method::Smote)]);
        assert!(matches!(
            run_benchmark(&spec, &RunOptions::default()),
            Err(Error::Config(_))
        ));
    }
}
