use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{train, ClassifierSpec};
use crate::dataset::{stratified_kfold, Dataset};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_scores, Metric};

/// Hyperparameter value lists for one classifier family. Expands to the
/// Cartesian product, the first list varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ClassifierGrid {
    Knn { n_neighbors: Vec<usize> },
    Logreg { max_iter: Vec<usize>, c: Vec<f64> },
    Forest { n_tree: Vec<usize>, max_depth: Vec<usize> },
}

impl ClassifierGrid {
    pub fn reference_knn() -> Self {
        ClassifierGrid::Knn {
            n_neighbors: vec![3, 5, 7, 10, 20, 30, 50],
        }
    }

    pub fn reference_logreg() -> Self {
        ClassifierGrid::Logreg {
            max_iter: vec![1000, 200],
            c: vec![0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0],
        }
    }

    pub fn reference_forest() -> Self {
        ClassifierGrid::Forest {
            n_tree: vec![50, 100, 200, 400, 600],
            max_depth: vec![4, 6, 10, 20, 30, 50, 80, 100],
        }
    }

    /// Grid holding exactly one configuration.
    pub fn single(spec: &ClassifierSpec) -> Self {
        match *spec {
            ClassifierSpec::Knn { n_neighbors } => ClassifierGrid::Knn {
                n_neighbors: vec![n_neighbors],
            },
            ClassifierSpec::Logreg { c, max_iter } => ClassifierGrid::Logreg {
                max_iter: vec![max_iter],
                c: vec![c],
            },
            ClassifierSpec::Forest { n_tree, max_depth } => ClassifierGrid::Forest {
                n_tree: vec![n_tree],
                max_depth: vec![max_depth],
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ClassifierGrid::Knn { .. } => "knn",
            ClassifierGrid::Logreg { .. } => "logreg",
            ClassifierGrid::Forest { .. } => "forest",
        }
    }

    pub fn expand(&self) -> Vec<ClassifierSpec> {
        match self {
            ClassifierGrid::Knn { n_neighbors } => n_neighbors
                .iter()
                .map(|&n_neighbors| ClassifierSpec::Knn { n_neighbors })
                .collect(),
            ClassifierGrid::Logreg { max_iter, c } => max_iter
                .iter()
                .flat_map(|&max_iter| c.iter().map(move |&c| ClassifierSpec::Logreg { c, max_iter }))
                .collect(),
            ClassifierGrid::Forest { n_tree, max_depth } => n_tree
                .iter()
                .flat_map(|&n_tree| {
                    max_depth
                        .iter()
                        .map(move |&max_depth| ClassifierSpec::Forest { n_tree, max_depth })
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let specs = self.expand();
        if specs.is_empty() {
            return Err(Error::Config(format!("{} grid has no configurations", self.kind())));
        }
        specs.iter().try_for_each(ClassifierSpec::validate)
    }
}

/// Applied to every inner training fold before fitting, e.g. an oversampler.
/// Receives the fold's training rows and a per-fold seed.
pub type TrainTransform<'a> = dyn Fn(&Dataset, u64) -> Result<Dataset> + Sync + 'a;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub spec: ClassifierSpec,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchReport {
    pub metric: Metric,
    pub k_folds: usize,
    /// Every configuration in grid order.
    pub entries: Vec<GridEntry>,
    /// Index of the highest mean; the first one wins ties.
    pub best: usize,
    /// Folds left out because the training transform failed on them.
    #[serde(default)]
    pub skipped_folds: Vec<SkippedFold>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedFold {
    pub fold: usize,
    pub error: String,
}

impl GridSearchReport {
    pub fn best_spec(&self) -> &ClassifierSpec {
        &self.entries[self.best].spec
    }

    /// Number of models trained during the search.
    pub fn n_fits(&self) -> usize {
        self.entries.iter().map(|e| e.fold_scores.len()).sum()
    }
}

/// Stratified k-fold cross-validation of every configuration on `ds`.
pub fn grid_search(
    grid: &[ClassifierSpec],
    ds: &Dataset,
    k_folds: usize,
    metric: Metric,
    seed: u64,
) -> Result<GridSearchReport> {
    grid_search_with(grid, ds, k_folds, metric, seed, None)
}

/// [`grid_search`] with `transform` applied to each training fold. The
/// transformed folds are shared by every configuration. A fold whose transform
/// fails is left out for all configurations; if every fold fails, the first
/// error is returned.
pub fn grid_search_with(
    grid: &[ClassifierSpec],
    ds: &Dataset,
    k_folds: usize,
    metric: Metric,
    seed: u64,
    transform: Option<&TrainTransform<'_>>,
) -> Result<GridSearchReport> {
    if grid.is_empty() {
        return Err(Error::Config("grid search needs at least one configuration".into()));
    }
    grid.iter().try_for_each(ClassifierSpec::validate)?;
    let folds = stratified_kfold(ds, k_folds, seed)?;
    let mut splits: Vec<(usize, Dataset, Dataset)> = Vec::with_capacity(k_folds);
    let mut skipped_folds = Vec::new();
    let mut first_error = None;
    for f in 0..k_folds {
        let train_rows = ds.subset(&folds.train_indices(f));
        let test_rows = ds.subset(&folds.test_indices(f));
        let train_rows = match transform {
            Some(t) => match t(&train_rows, seed.wrapping_add(f as u64)) {
                Ok(d) => d,
                Err(e) => {
                    skipped_folds.push(SkippedFold {
                        fold: f,
                        error: e.to_string(),
                    });
                    first_error.get_or_insert(e);
                    continue;
                }
            },
            None => train_rows,
        };
        splits.push((f, train_rows, test_rows));
    }
    if splits.is_empty() {
        return Err(first_error.expect("every fold failed, so an error was recorded"));
    }

    let entries: Vec<GridEntry> = grid
        .par_iter()
        .map(|spec| {
            let fold_scores = splits
                .iter()
                .map(|(f, tr, te)| {
                    let model = train(spec, tr, seed.wrapping_add(*f as u64))?;
                    let scores = model.score_all(te)?;
                    Ok(metric.of(&evaluate_scores(te.labels(), &scores)?))
                })
                .collect::<Result<Vec<f64>>>()
                .map_err(|e| Error::InConfig {
                    config: spec.to_string(),
                    source: Box::new(e),
                })?;
            let mean = fold_scores.iter().sum::<f64>() / fold_scores.len() as f64;
            Ok(GridEntry {
                spec: spec.clone(),
                fold_scores,
                mean,
            })
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.mean > entries[best].mean {
            best = i;
        }
    }
    Ok(GridSearchReport {
        metric,
        k_folds,
        entries,
        best,
        skipped_folds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Label;

    fn separable(n: usize) -> Dataset {
        let cut = n * 3 / 4;
        let rows = (0..n)
            .map(|i| vec![if i >= cut { i as f64 + 100.0 } else { i as f64 }, (i % 3) as f64])
            .collect();
        let labels = (0..n)
            .map(|i| if i >= cut { Label::Positive } else { Label::Negative })
            .collect();
        Dataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn reference_grid_sizes() {
        assert_eq!(ClassifierGrid::reference_knn().expand().len(), 7);
        assert_eq!(ClassifierGrid::reference_logreg().expand().len(), 14);
        assert_eq!(ClassifierGrid::reference_forest().expand().len(), 40);
        let lr = ClassifierGrid::reference_logreg().expand();
        assert_eq!(lr[0], ClassifierSpec::Logreg { c: 0.001, max_iter: 1000 });
        assert_eq!(lr[7], ClassifierSpec::Logreg { c: 0.001, max_iter: 200 });
    }

    #[test]
    fn singleton_grid() {
        let spec = ClassifierSpec::Knn { n_neighbors: 3 };
        let r = grid_search(std::slice::from_ref(&spec), &separable(20), 5, Metric::RocAuc, 0).unwrap();
        assert_eq!(r.best_spec(), &spec);
        assert_eq!(r.n_fits(), 5);
    }

    #[test]
    fn dominated_config_is_never_best() {
        let grid = [
            ClassifierSpec::Knn { n_neighbors: 1001 },
            ClassifierSpec::Knn { n_neighbors: 1 },
        ];
        for seed in 0..5 {
            let r = grid_search(&grid, &separable(20), 5, Metric::RocAuc, seed).unwrap();
            assert_eq!(r.best, 1);
            for (a, b) in r.entries[0].fold_scores.iter().zip(&r.entries[1].fold_scores) {
                assert!(b > a);
            }
        }
    }

    #[test]
    fn ties_go_to_the_first_config() {
        let grid = [
            ClassifierSpec::Knn { n_neighbors: 1001 },
            ClassifierSpec::Knn { n_neighbors: 2000 },
        ];
        let r = grid_search(&grid, &separable(20), 5, Metric::RocAuc, 0).unwrap();
        assert_eq!(r.entries[0].mean, r.entries[1].mean);
        assert_eq!(r.best, 0);
    }

    #[test]
    fn folds_with_a_failing_transform_are_skipped() {
        let grid = [ClassifierSpec::Knn { n_neighbors: 1 }];
        let odd = |d: &Dataset, s: u64| -> Result<Dataset> {
            if s % 2 == 1 {
                Err(Error::SingleClass)
            } else {
                Ok(d.clone())
            }
        };
        let r = grid_search_with(&grid, &separable(20), 5, Metric::RocAuc, 0, Some(&odd)).unwrap();
        assert_eq!(r.skipped_folds.iter().map(|s| s.fold).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(r.entries[0].fold_scores.len(), 3);
        assert_eq!(r.n_fits(), 3);
    }

    #[test]
    fn failures_name_the_config() {
        let grid = [ClassifierSpec::Knn { n_neighbors: 3 }];
        let fail = |_: &Dataset, _: u64| -> Result<Dataset> { Err(Error::SingleClass) };
        assert!(matches!(
            grid_search_with(&grid, &separable(20), 5, Metric::RocAuc, 0, Some(&fail)),
            Err(Error::SingleClass)
        ));

        let bad = |d: &Dataset, _: u64| -> Result<Dataset> { Ok(d.subset(&d.indices_of(Label::Negative))) };
        let err = grid_search_with(&grid, &separable(20), 5, Metric::RocAuc, 0, Some(&bad)).unwrap_err();
        assert!(matches!(err, Error::InConfig { .. }));
        assert!(err.to_string().contains("knn(n_neighbors=3)"));
    }
}
