use serde::{Deserialize, Serialize};

use super::confusion::ConfusionMatrix;
use super::roc::roc;
use crate::dataset::Label;
use crate::error::Result;

/// Threshold metrics of one confusion matrix, plus ROC AUC when scores are known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    /// `(TPR + TNR) / 2`.
    pub balanced_accuracy: f64,
    pub roc_auc: Option<f64>,
    /// Names of metrics whose denominator was zero and which were set to 0.
    pub degenerate: Vec<String>,
}

fn ratio(num: usize, den: usize, name: &str, degenerate: &mut Vec<String>) -> f64 {
    if den == 0 {
        degenerate.push(name.to_string());
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Recall, precision, F1 and balanced accuracy. A zero denominator yields 0
/// and records the metric in `degenerate`.
pub fn metrics(cm: &ConfusionMatrix) -> MetricSet {
    let mut degenerate = Vec::new();
    let recall = ratio(cm.tp, cm.tp + cm.fn_, "recall", &mut degenerate);
    let precision = ratio(cm.tp, cm.tp + cm.fp, "precision", &mut degenerate);
    let specificity = ratio(cm.tn, cm.tn + cm.fp, "specificity", &mut degenerate);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        degenerate.push("f1".to_string());
        0.0
    };
    MetricSet {
        recall,
        precision,
        f1,
        balanced_accuracy: (recall + specificity) / 2.0,
        roc_auc: None,
        degenerate,
    }
}

/// Metric optimised by grid search and used to rank columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    RocAuc,
    BalancedAccuracy,
    F1,
    Recall,
    Precision,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::RocAuc => "roc_auc",
            Metric::BalancedAccuracy => "balanced_accuracy",
            Metric::F1 => "f1",
            Metric::Recall => "recall",
            Metric::Precision => "precision",
        }
    }

    /// Value on a metric set; `roc_auc` missing counts as 0.
    pub fn of(self, m: &MetricSet) -> f64 {
        match self {
            Metric::RocAuc => m.roc_auc.unwrap_or(0.0),
            Metric::BalancedAccuracy => m.balanced_accuracy,
            Metric::F1 => m.f1,
            Metric::Recall => m.recall,
            Metric::Precision => m.precision,
        }
    }
}

/// Metrics at the 0.5 decision threshold plus ROC AUC over the raw scores.
pub fn evaluate_scores(actual: &[Label], scores: &[f64]) -> Result<MetricSet> {
    let cm = super::confusion::confusion_at(actual, scores, crate::classifiers::DECISION_THRESHOLD)?;
    let mut m = metrics(&cm);
    let (_, auc) = roc(actual, scores)?;
    m.roc_auc = Some(auc);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_arithmetic() {
        let m = metrics(&ConfusionMatrix::new(3, 1, 2, 4));
        assert!((m.recall - 0.75).abs() < 1e-15);
        assert!((m.precision - 0.6).abs() < 1e-15);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.balanced_accuracy - (0.75 + 4.0 / 6.0) / 2.0).abs() < 1e-15);
        assert!(m.degenerate.is_empty());
    }

    #[test]
    fn degenerate_cases() {
        let m = metrics(&ConfusionMatrix::new(0, 5, 0, 5));
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.f1, 0.0);
        assert!(m.degenerate.contains(&"precision".to_string()));
        let chance = metrics(&ConfusionMatrix::new(4, 4, 7, 7));
        assert_eq!(chance.balanced_accuracy, 0.5);
    }
}
