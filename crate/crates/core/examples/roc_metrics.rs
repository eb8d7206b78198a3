//! Confusion matrix, threshold metrics and the ROC curve of a score vector.

use cfa::dataset::Label::{Negative as N, Positive as P};
use cfa::evaluation::{confusion_at, metrics, roc};

fn main() -> cfa::Result<()> {
    let actual = [P, P, N, P, N, N, P, N, N, N];
    let scores = [0.9, 0.8, 0.7, 0.6, 0.55, 0.5, 0.4, 0.3, 0.2, 0.1];

    let cm = confusion_at(&actual, &scores, 0.5)?;
    println!("TP={} FN={} FP={} TN={}", cm.tp, cm.fn_, cm.fp, cm.tn);
    let m = metrics(&cm);
    println!(
        "recall={:.3} precision={:.3} f1={:.3} balanced accuracy={:.3}",
        m.recall, m.precision, m.f1, m.balanced_accuracy
    );

    let (curve, auc) = roc(&actual, &scores)?;
    println!("AUC={auc:.4}");
    for p in &curve.points {
        let t = p.threshold.map_or("inf".to_string(), |t| t.to_string());
        println!("  fpr={:.2} tpr={:.2} threshold={t}", p.fpr, p.tpr);
    }
    Ok(())
}
