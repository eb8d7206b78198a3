//! Confusion matrices, threshold metrics, ROC analysis and the benchmark runner.

pub mod benchmark;
mod confusion;
mod metrics;
pub mod report;
mod roc;

pub use benchmark::{
    audit_leakage, derive_seed, run_benchmark, BenchmarkDataset, BenchmarkReport, BenchmarkSpec, CellReport,
    CellSummary, ClassifierSuite, Column, FoldOutcome, FoldRecord, LeakageAudit, RunOptions, BASELINE,
};
pub use confusion::{confusion, confusion_at, ConfusionMatrix};
pub use metrics::{evaluate_scores, metrics, Metric, MetricSet};
pub use roc::{roc, RocCurve, RocPoint};
