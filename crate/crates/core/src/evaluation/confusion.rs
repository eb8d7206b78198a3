use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};

/// Binary confusion matrix with POSITIVE as the minority class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fn_: usize, fp: usize, tn: usize) -> Self {
        ConfusionMatrix { tp, fn_, fp, tn }
    }

    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.fp + self.tn
    }

    pub fn total(&self) -> usize {
        self.positives() + self.negatives()
    }
}

/// Count agreements between actual and predicted labels.
pub fn confusion(actual: &[Label], predicted: &[Label]) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            found: predicted.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&a, &p) in actual.iter().zip(predicted) {
        match (a, p) {
            (Label::Positive, Label::Positive) => cm.tp += 1,
            (Label::Positive, Label::Negative) => cm.fn_ += 1,
            (Label::Negative, Label::Positive) => cm.fp += 1,
            (Label::Negative, Label::Negative) => cm.tn += 1,
        }
    }
    Ok(cm)
}

/// Confusion matrix of `score >= threshold` predictions.
pub fn confusion_at(actual: &[Label], scores: &[f64], threshold: f64) -> Result<ConfusionMatrix> {
    let predicted: Vec<Label> = scores
        .iter()
        .map(|&s| if s >= threshold { Label::Positive } else { Label::Negative })
        .collect();
    confusion(actual, &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as N, Positive as P};

    #[test]
    fn hand_counted() {
        let cm = confusion(&[P, P, P, P, N, N], &[P, P, P, N, N, P]).unwrap();
        assert_eq!(cm, ConfusionMatrix::new(3, 1, 1, 1));
    }

    #[test]
    fn perfect_and_inverted() {
        let a = [P, N, N, P, N];
        let cm = confusion(&a, &a).unwrap();
        assert_eq!((cm.fp, cm.fn_), (0, 0));
        let inv: Vec<Label> = a.iter().map(|l| l.flipped()).collect();
        let cm = confusion(&a, &inv).unwrap();
        assert_eq!((cm.tp, cm.tn), (0, 0));
        assert_eq!(cm.positives(), 2);
        assert_eq!(cm.negatives(), 3);
    }

    #[test]
    fn length_mismatch() {
        assert!(confusion(&[P], &[P, N]).is_err());
    }
}
