//! CSV tables, ROC point files and atomic file output for benchmark reports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::benchmark::{BenchmarkReport, FoldOutcome};
use super::metrics::Metric;
use super::roc::RocCurve;
use crate::error::{Error, Result};

/// Write through a temporary file in the same directory, then rename over `path`.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.flush().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn report_json(report: &BenchmarkReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn load_report(path: &Path) -> Result<BenchmarkReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: BenchmarkReport = serde_json::from_str(&text)?;
    if report.schema_version != super::benchmark::REPORT_SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported report schema version {}",
            report.schema_version
        )));
    }
    Ok(report)
}

/// One row per dataset, one column per method, mean over folds of `metric`
/// to four decimals. Cells without a successful fold stay empty. With
/// `metric = RocAuc` a final `Total` row counts the wins of each column.
pub fn metric_table_csv(report: &BenchmarkReport, classifier: &str, metric: Metric) -> String {
    let columns = report.column_names();
    let mut out = String::from("dataset");
    for c in &columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for d in &report.datasets {
        out.push_str(&d.id);
        for c in &columns {
            out.push(',');
            if let Some(s) = report.cell(&d.id, c, classifier).and_then(|c| c.summary) {
                let _ = write!(out, "{:.4}", s.mean.get(metric));
            }
        }
        out.push('\n');
    }
    if metric == Metric::RocAuc {
        if let Some(w) = report.winners.iter().find(|w| w.classifier == classifier) {
            out.push_str("Total");
            for n in &w.wins {
                let _ = write!(out, ",{n}");
            }
            out.push('\n');
        }
    }
    out
}

/// Long format: every cell with mean and standard deviation of every metric.
pub fn summary_csv(report: &BenchmarkReport) -> String {
    let metrics = [
        Metric::RocAuc,
        Metric::BalancedAccuracy,
        Metric::Recall,
        Metric::Precision,
        Metric::F1,
    ];
    let mut out = String::from("dataset,classifier,method,n_folds,winner");
    for m in metrics {
        let _ = write!(out, ",{0}_mean,{0}_std", m.name());
    }
    out.push('\n');
    for c in &report.cells {
        let _ = write!(out, "{},{},{}", c.dataset, c.classifier, c.column);
        match c.summary {
            Some(s) => {
                let _ = write!(out, ",{},{}", s.n_folds, c.winner);
                for m in metrics {
                    let _ = write!(out, ",{:.6},{:.6}", s.mean.get(m), s.std.get(m));
                }
            }
            None => {
                let _ = write!(out, ",0,false");
                for _ in metrics {
                    out.push_str(",,");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// `fpr,tpr,threshold`; the starting point's threshold is written as `inf`.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut out = String::from("fpr,tpr,threshold\n");
    for p in &curve.points {
        match p.threshold {
            Some(t) => {
                let _ = writeln!(out, "{},{},{}", p.fpr, p.tpr, t);
            }
            None => {
                let _ = writeln!(out, "{},{},inf", p.fpr, p.tpr);
            }
        }
    }
    out
}

/// Keep letters, digits, `-` and `_`, for file names built from report labels.
pub fn file_stem(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// `report.json`, `summary.csv`, `auc_<classifier>.csv` and one ROC file per
/// successful fold under `roc/`. Returns the written paths.
pub fn write_artifacts(report: &BenchmarkReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut put = |rel: PathBuf, text: String| -> Result<()> {
        let path = dir.join(rel);
        atomic_write(&path, text.as_bytes())?;
        written.push(path);
        Ok(())
    };
    put("report.json".into(), report_json(report)?)?;
    put("summary.csv".into(), summary_csv(report))?;
    for suite in &report.classifiers {
        put(
            format!("auc_{}.csv", file_stem(&suite.name)).into(),
            metric_table_csv(report, &suite.name, Metric::RocAuc),
        )?;
    }
    for cell in &report.cells {
        for f in &cell.folds {
            if let FoldOutcome::Ok(r) = f {
                let name = format!(
                    "{}__{}__{}__fold{}.csv",
                    file_stem(&cell.dataset),
                    file_stem(&cell.column),
                    file_stem(&cell.classifier),
                    r.fold
                );
                put(Path::new("roc").join(name), roc_csv(&r.roc))?;
            }
        }
    }
    Ok(written)
}
