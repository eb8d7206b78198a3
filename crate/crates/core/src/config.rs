//! JSON run configuration for the command-line front end.
//!
//! ```json
//! {
//!   "datasets": [
//!     {"id": "pima", "path": "data/pima.csv", "label_column": "Class",
//!      "binarization": {"mode": "ovr", "positive": "positive"}}
//!   ],
//!   "methods": [{"method": "smote"}, {"method": "cfa", "tolerance": 0.1}],
//!   "classifiers": [{"name": "KNN", "grid": {"kind": "knn", "n_neighbors": [3, 5, 7]}}],
//!   "k_folds": 5,
//!   "seed": 42,
//!   "output_dir": "out"
//! }
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{load_csv, Binarization, CsvOptions, Dataset, LabelColumn};
use crate::error::{Error, Result};
use crate::evaluation::{BenchmarkDataset, BenchmarkSpec, ClassifierSuite, Metric};
use crate::resample::ResamplePlan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub id: String,
    pub path: PathBuf,
    /// Header name of the class column; the last column when absent.
    #[serde(default)]
    pub label_column: Option<String>,
    #[serde(default = "default_true")]
    pub has_header: bool,
    #[serde(default)]
    pub skip_columns: Vec<String>,
    pub binarization: Binarization,
}

fn default_true() -> bool {
    true
}

fn default_folds() -> usize {
    5
}

impl DatasetConfig {
    pub fn csv_options(&self) -> CsvOptions {
        CsvOptions {
            has_header: self.has_header,
            label_column: match &self.label_column {
                Some(name) => LabelColumn::Name(name.clone()),
                None => LabelColumn::Last,
            },
            skip_columns: self.skip_columns.clone(),
        }
    }

    pub fn load(&self) -> Result<Dataset> {
        load_csv(&self.path, &self.csv_options())?.binarize(&self.binarization)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub datasets: Vec<DatasetConfig>,
    #[serde(default)]
    pub methods: Vec<ResamplePlan>,
    #[serde(default)]
    pub classifiers: Vec<ClassifierSuite>,
    #[serde(default = "default_folds")]
    pub k_folds: usize,
    /// Folds of the nested grid search; defaults to `k_folds`.
    #[serde(default)]
    pub inner_folds: Option<usize>,
    #[serde(default)]
    pub metric: Metric,
    /// Mandatory here or on the command line.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Read, parse and resolve relative paths against the file's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for d in &mut cfg.datasets {
            if d.path.is_relative() {
                d.path = base.join(&d.path);
            }
        }
        if let Some(out) = &mut cfg.output_dir {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(cfg)
    }

    /// `cli_seed` wins over the config; one of them must exist.
    pub fn resolve_seed(&self, cli_seed: Option<u64>) -> Result<u64> {
        cli_seed
            .or(self.seed)
            .ok_or_else(|| Error::Config("a seed is required (config \"seed\" or --seed)".into()))
    }

    /// Structural checks that need no data: files exist, counts are sane.
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets configured".into()));
        }
        for d in &self.datasets {
            if !d.path.is_file() {
                return Err(Error::Config(format!(
                    "dataset {:?}: file {} does not exist",
                    d.id,
                    d.path.display()
                )));
            }
        }
        if self.k_folds < 2 || self.inner_folds.is_some_and(|k| k < 2) {
            return Err(Error::Config("k_folds and inner_folds must be >= 2".into()));
        }
        for plan in &self.methods {
            plan.validate()?;
        }
        for c in &self.classifiers {
            c.grid.validate()?;
        }
        Ok(())
    }

    pub fn load_datasets(&self) -> Result<Vec<BenchmarkDataset>> {
        self.datasets
            .iter()
            .map(|d| {
                Ok(BenchmarkDataset {
                    id: d.id.clone(),
                    data: d.load().map_err(|e| Error::Config(format!("dataset {:?}: {e}", d.id)))?,
                })
            })
            .collect()
    }

    pub fn benchmark_spec(&self, seed: u64) -> Result<BenchmarkSpec> {
        let mut spec = BenchmarkSpec::new(self.load_datasets()?, self.methods.clone(), self.classifiers.clone(), seed);
        spec.k_folds = self.k_folds;
        spec.inner_folds = self.inner_folds.unwrap_or(self.k_folds);
        spec.metric = self.metric;
        spec.validate()?;
        Ok(spec)
    }
}
