use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Scores at or above this are predicted POSITIVE. `None` for the
    /// starting point, where nothing is.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

/// Threshold sweep over the distinct scores, highest first. Tied scores form
/// one step, so the curve runs from (0, 0) to (1, 1) with one point per
/// distinct score. The AUC is the trapezoid area, accumulated in integer
/// counts so it equals the Mann-Whitney statistic (ties count one half).
pub fn roc(actual: &[Label], scores: &[f64]) -> Result<(RocCurve, f64)> {
    if actual.len() != scores.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            found: scores.len(),
        });
    }
    if let Some(bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite score {bad}")));
    }
    let n_pos = actual.iter().filter(|l| l.is_positive()).count() as u64;
    let n_neg = actual.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: None,
    }];
    let (mut tp, mut fp) = (0u64, 0u64);
    // Twice the area, in units of 1 / (n_pos * n_neg).
    let mut area2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (tp0, fp0) = (tp, fp);
        while i < order.len() && scores[order[i]] == s {
            if actual[order[i]].is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area2 += ((fp - fp0) as u128) * ((tp + tp0) as u128);
        points.push(RocPoint {
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
            threshold: Some(s),
        });
    }
    let auc = area2 as f64 / (2 * n_pos as u128 * n_neg as u128) as f64;
    Ok((RocCurve { points }, auc))
}
