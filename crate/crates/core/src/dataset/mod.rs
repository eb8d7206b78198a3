//! Datasets: loading, binarization, per-feature statistics, stratified folds and scaling.
//!
//! A [`RawDataset`] carries the label vocabulary exactly as it appears in the
//! source file. [`RawDataset::binarize`] turns it into a [`Dataset`] whose
//! labels are [`Label::Positive`] (minority) or [`Label::Negative`] (majority).
//! Everything downstream works on the binary form.

mod csv_io;
mod folds;
mod stats;
pub mod synthetic;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use csv_io::{load_csv, write_csv, CsvOptions, LabelColumn};
pub use folds::{stratified_kfold, FoldAssignment};
pub use stats::{feature_stats, min_max_scale, FeatureStats, MinMaxScaler};

/// Binary class tag. `Positive` is always the minority class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

/// Original class names behind the two binary labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNames {
    pub positive: String,
    pub negative: String,
}

impl ClassNames {
    pub fn name(&self, label: Label) -> &str {
        match label {
            Label::Positive => &self.positive,
            Label::Negative => &self.negative,
        }
    }
}

impl Default for ClassNames {
    fn default() -> Self {
        ClassNames {
            positive: "P".to_string(),
            negative: "N".to_string(),
        }
    }
}

/// Multi-class to binary conversion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Binarization {
    /// One class against every other class; no rows are dropped.
    Ovr { positive: String },
    /// One class against one other class; rows of every other class are dropped.
    Ovo { positive: String, negative: String },
}

/// Dataset as loaded from disk, before binarization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    features: Vec<f64>,
    n_features: usize,
    labels: Vec<String>,
    feature_names: Vec<String>,
    label_name: String,
}

impl RawDataset {
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<String>,
        feature_names: Vec<String>,
        label_name: impl Into<String>,
    ) -> Result<Self> {
        let (features, n_features) = flatten(rows, labels.len())?;
        if feature_names.len() != n_features {
            return Err(Error::DimensionMismatch {
                expected: n_features,
                found: feature_names.len(),
            });
        }
        Ok(RawDataset {
            features,
            n_features,
            labels,
            feature_names,
            label_name: label_name.into(),
        })
    }

    pub fn n_instances(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    /// Class vocabulary in order of first appearance.
    pub fn class_names(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        for l in &self.labels {
            if !seen.contains(l) {
                seen.push(l.clone());
            }
        }
        seen
    }

    /// Per-class row counts.
    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for l in &self.labels {
            *counts.entry(l.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Convert to a binary dataset. The positive class must end up as the
    /// minority; the tool never guesses which class is positive.
    pub fn binarize(&self, mode: &Binarization) -> Result<Dataset> {
        let counts = self.class_counts();
        let known = |c: &String| {
            if counts.contains_key(c) {
                Ok(())
            } else {
                Err(Error::UnknownClass(c.clone()))
            }
        };

        let (positive, negative_name, keep): (&String, String, Box<dyn Fn(&str) -> bool>) =
            match mode {
                Binarization::Ovr { positive } => {
                    known(positive)?;
                    (positive, "rest".to_string(), Box::new(|_| true))
                }
                Binarization::Ovo { positive, negative } => {
                    known(positive)?;
                    known(negative)?;
                    if positive == negative {
                        return Err(Error::Config(format!(
                            "one-vs-one needs two distinct classes, got {positive:?} twice"
                        )));
                    }
                    let neg = negative.clone();
                    let pos = positive.clone();
                    (
                        positive,
                        negative.clone(),
                        Box::new(move |l: &str| l == pos || l == neg),
                    )
                }
            };

        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            if !keep(l) {
                continue;
            }
            rows.extend_from_slice(self.row(i));
            labels.push(if l == positive {
                Label::Positive
            } else {
                Label::Negative
            });
        }

        let n_pos = labels.iter().filter(|l| l.is_positive()).count();
        let n_neg = labels.len() - n_pos;
        if n_pos == 0 {
            return Err(Error::EmptyClass(positive.clone()));
        }
        if n_neg == 0 {
            return Err(Error::EmptyClass(negative_name));
        }
        if n_pos > n_neg {
            return Err(Error::PositiveNotMinority {
                positive: positive.clone(),
                n_positive: n_pos,
                n_negative: n_neg,
            });
        }

        Ok(Dataset {
            features: rows,
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
            label_name: self.label_name.clone(),
            class_names: ClassNames {
                positive: positive.clone(),
                negative: negative_name,
            },
        })
    }
}

/// Binary dataset: the universe of instances split into a majority and a minority class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<f64>,
    n_features: usize,
    labels: Vec<Label>,
    feature_names: Vec<String>,
    label_name: String,
    class_names: ClassNames,
}

impl Dataset {
    /// Build from rows and labels with generated feature names.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        let (features, n_features) = flatten(rows, labels.len())?;
        Ok(Dataset {
            features,
            n_features,
            labels,
            feature_names: (0..n_features).map(|f| format!("f{}", f + 1)).collect(),
            label_name: "class".to_string(),
            class_names: ClassNames::default(),
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: names.len(),
            });
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn with_class_names(mut self, names: ClassNames) -> Self {
        self.class_names = names;
        self
    }

    pub fn n_instances(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn class_names(&self) -> &ClassNames {
        &self.class_names
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Row indices carrying `label`, ascending.
    pub fn indices_of(&self, label: Label) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(i, _)| i)
            .collect()
    }

    /// New dataset holding the given rows in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            features,
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
            label_name: self.label_name.clone(),
            class_names: self.class_names.clone(),
        }
    }

    /// Copy of this dataset with extra rows appended after the originals.
    pub fn with_appended<'a, I>(&self, extra: I) -> Result<Dataset>
    where
        I: IntoIterator<Item = (&'a [f64], Label)>,
    {
        let mut out = self.clone();
        for (values, label) in extra {
            if values.len() != self.n_features {
                return Err(Error::DimensionMismatch {
                    expected: self.n_features,
                    found: values.len(),
                });
            }
            out.features.extend_from_slice(values);
            out.labels.push(label);
        }
        Ok(out)
    }

    /// Same rows with every feature value replaced through `f(feature, value)`.
    pub(crate) fn map_values(&self, f: impl Fn(usize, f64) -> f64) -> Dataset {
        let mut out = self.clone();
        for (i, v) in out.features.iter_mut().enumerate() {
            *v = f(i % self.n_features, *v);
        }
        out
    }

    /// Fails unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        let n_pos = self.count(Label::Positive);
        if n_pos == 0 || n_pos == self.n_instances() {
            return Err(Error::SingleClass);
        }
        Ok(())
    }
}

/// Class counts and imbalance ratio of a binary dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n_features: usize,
    pub n_instances: usize,
    pub n_minority: usize,
    pub n_majority: usize,
    pub imbalance_ratio: f64,
}

/// Counts and IR = majority / minority.
pub fn summarize(ds: &Dataset) -> Result<DatasetSummary> {
    let n_minority = ds.count(Label::Positive);
    let n_majority = ds.count(Label::Negative);
    if n_minority == 0 {
        return Err(Error::EmptyClass(ds.class_names().positive.clone()));
    }
    Ok(DatasetSummary {
        n_features: ds.n_features(),
        n_instances: ds.n_instances(),
        n_minority,
        n_majority,
        imbalance_ratio: n_majority as f64 / n_minority as f64,
    })
}

fn flatten(rows: Vec<Vec<f64>>, n_labels: usize) -> Result<(Vec<f64>, usize)> {
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if rows.len() != n_labels {
        return Err(Error::InvalidDataset(format!(
            "{} rows but {} labels",
            rows.len(),
            n_labels
        )));
    }
    let n_features = rows[0].len();
    if n_features == 0 {
        return Err(Error::InvalidDataset("rows have no features".into()));
    }
    let mut flat = Vec::with_capacity(rows.len() * n_features);
    for (i, r) in rows.into_iter().enumerate() {
        if r.len() != n_features {
            return Err(Error::RaggedRow {
                row: i,
                expected: n_features,
                found: r.len(),
            });
        }
        if let Some(v) = r.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value {v} in row {i}"
            )));
        }
        flat.extend(r);
    }
    Ok((flat, n_features))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_abc() -> RawDataset {
        let mut labels = Vec::new();
        labels.extend(std::iter::repeat_n("A".to_string(), 5));
        labels.extend(std::iter::repeat_n("B".to_string(), 3));
        labels.extend(std::iter::repeat_n("C".to_string(), 2));
        let rows = (0..10).map(|i| vec![i as f64]).collect();
        RawDataset::new(rows, labels, vec!["x".into()], "class").unwrap()
    }

    #[test]
    fn ovo_keeps_only_the_two_named_classes() {
        let ds = toy_abc()
            .binarize(&Binarization::Ovo {
                positive: "C".into(),
                negative: "A".into(),
            })
            .unwrap();
        assert_eq!(ds.n_instances(), 7);
        assert_eq!(ds.count(Label::Positive), 2);
        assert_eq!(ds.count(Label::Negative), 5);
    }

    #[test]
    fn ovr_keeps_every_row() {
        let ds = toy_abc()
            .binarize(&Binarization::Ovr {
                positive: "B".into(),
            })
            .unwrap();
        assert_eq!(ds.n_instances(), 10);
        assert_eq!(ds.count(Label::Positive), 3);
        assert_eq!(ds.class_names().positive, "B");
    }

    #[test]
    fn binarize_rejects_unknown_and_majority_positive() {
        let raw = toy_abc();
        assert!(matches!(
            raw.binarize(&Binarization::Ovr {
                positive: "Z".into()
            }),
            Err(Error::UnknownClass(_))
        ));
        assert!(matches!(
            raw.binarize(&Binarization::Ovo {
                positive: "A".into(),
                negative: "C".into()
            }),
            Err(Error::PositiveNotMinority { .. })
        ));
    }

    #[test]
    fn binary_ovr_on_minority_is_a_relabel() {
        let labels = vec!["N", "N", "N", "P"]
            .into_iter()
            .map(String::from)
            .collect();
        let raw = RawDataset::new(
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            labels,
            vec!["x".into()],
            "class",
        )
        .unwrap();
        let ds = raw
            .binarize(&Binarization::Ovr {
                positive: "P".into(),
            })
            .unwrap();
        assert_eq!(ds.count(Label::Positive), 1);
        assert_eq!(ds.count(Label::Negative), 3);
        assert_eq!(ds.row(3), &[3.0]);
    }

    #[test]
    fn ovr_on_single_class_data_has_empty_negative() {
        let raw = RawDataset::new(
            vec![vec![0.0], vec![1.0]],
            vec!["A".into(), "A".into()],
            vec!["x".into()],
            "class",
        )
        .unwrap();
        assert!(matches!(
            raw.binarize(&Binarization::Ovr {
                positive: "A".into()
            }),
            Err(Error::EmptyClass(_))
        ));
    }

    #[test]
    fn summary_of_balanced_toy() {
        let labels = (0..20)
            .map(|i| if i < 10 { Label::Positive } else { Label::Negative })
            .collect();
        let ds = Dataset::from_rows((0..20).map(|i| vec![i as f64]).collect(), labels).unwrap();
        let s = summarize(&ds).unwrap();
        assert_eq!(s.n_minority + s.n_majority, s.n_instances);
        assert_eq!(s.imbalance_ratio, 1.0);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = Dataset::from_rows(
            vec![vec![0.0, 1.0], vec![0.0]],
            vec![Label::Positive, Label::Negative],
        )
        .unwrap_err();
        assert!(matches!(err, Error::RaggedRow { row: 1, .. }));
    }
}
