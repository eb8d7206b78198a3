//! k-nearest neighbours, logistic regression and random forest, plus
//! cross-validated grid search over their hyperparameters.
//!
//! Every trained model scores an instance with a POSITIVE-class score in
//! `[0, 1]` and predicts POSITIVE iff that score is at least 0.5.

mod forest;
mod grid;
mod knn;
mod logreg;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::resample::LabelPredictor;

pub use forest::{ForestModel, Node, Tree};
pub use grid::{grid_search, grid_search_with, ClassifierGrid, GridEntry, GridSearchReport, SkippedFold, TrainTransform};
pub use knn::KnnModel;
pub use logreg::{sigmoid, LogisticModel, LogisticObjective};

/// Score at or above which a model predicts POSITIVE.
pub const DECISION_THRESHOLD: f64 = 0.5;

/// A classifier family with concrete hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ClassifierSpec {
    /// A score of exactly 0.5 (even `n_neighbors`, split vote) predicts POSITIVE.
    Knn { n_neighbors: usize },
    Logreg { c: f64, max_iter: usize },
    Forest { n_tree: usize, max_depth: usize },
}

impl ClassifierSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ClassifierSpec::Knn { n_neighbors } => n_neighbors >= 1,
            ClassifierSpec::Logreg { c, max_iter } => max_iter >= 1 && c > 0.0 && c.is_finite(),
            ClassifierSpec::Forest { n_tree, max_depth } => n_tree >= 1 && max_depth >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid classifier {self}")))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ClassifierSpec::Knn { .. } => "knn",
            ClassifierSpec::Logreg { .. } => "logreg",
            ClassifierSpec::Forest { .. } => "forest",
        }
    }
}

impl std::fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassifierSpec::Knn { n_neighbors } => write!(f, "knn(n_neighbors={n_neighbors})"),
            ClassifierSpec::Logreg { c, max_iter } => write!(f, "logreg(C={c},max_iter={max_iter})"),
            ClassifierSpec::Forest { n_tree, max_depth } => {
                write!(f, "forest(n_tree={n_tree},max_depth={max_depth})")
            }
        }
    }
}

/// Learned state of a classifier. Immutable once trained and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    Knn(KnnModel),
    Logreg(LogisticModel),
    Forest(ForestModel),
}

/// Fit `spec` on `ds`. The seed only matters for the forest.
pub fn train(spec: &ClassifierSpec, ds: &Dataset, seed: u64) -> Result<TrainedModel> {
    spec.validate()?;
    ds.require_both_classes()?;
    Ok(match *spec {
        ClassifierSpec::Knn { n_neighbors } => TrainedModel::Knn(KnnModel::fit(ds, n_neighbors)?),
        ClassifierSpec::Logreg { c, max_iter } => TrainedModel::Logreg(LogisticModel::fit(ds, c, max_iter)?),
        ClassifierSpec::Forest { n_tree, max_depth } => {
            TrainedModel::Forest(ForestModel::fit(ds, n_tree, max_depth, seed)?)
        }
    })
}

impl TrainedModel {
    pub fn n_features(&self) -> usize {
        match self {
            TrainedModel::Knn(m) => m.scaler.n_features(),
            TrainedModel::Logreg(m) => m.weights.len(),
            TrainedModel::Forest(m) => m.n_features,
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        let d = self.n_features();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// POSITIVE-class score in `[0, 1]`.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(match self {
            TrainedModel::Knn(m) => m.score(x),
            TrainedModel::Logreg(m) => m.score(x),
            TrainedModel::Forest(m) => m.score(x),
        })
    }

    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(if self.score(x)? >= DECISION_THRESHOLD {
            Label::Positive
        } else {
            Label::Negative
        })
    }

    /// Scores for every row of `ds`, in row order.
    pub fn score_all(&self, ds: &Dataset) -> Result<Vec<f64>> {
        ds.rows().map(|r| self.score(r)).collect()
    }

    /// Versioned JSON snapshot of the learned state.
    pub fn to_document(&self, spec: &ClassifierSpec, seed: u64) -> ModelDocument {
        ModelDocument {
            schema_version: MODEL_SCHEMA_VERSION,
            spec: spec.clone(),
            seed,
            model: self.clone(),
        }
    }
}

impl LabelPredictor for TrainedModel {
    fn predict_label(&self, x: &[f64]) -> Result<Label> {
        self.predict(x)
    }
}

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Model state for reproducibility audits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub schema_version: u32,
    pub spec: ClassifierSpec,
    pub seed: u64,
    pub model: TrainedModel,
}
