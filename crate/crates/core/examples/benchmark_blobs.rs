//! A small benchmark sweep: every oversampler against the baseline on three
//! synthetic datasets, with the report, CSV tables and ROC files written to a
//! directory (first argument, default a temporary one).

use cfa::classifiers::ClassifierGrid;
use cfa::dataset::synthetic::{gaussian_blobs, BlobSpec};
use cfa::evaluation::report::{metric_table_csv, write_artifacts};
use cfa::evaluation::{run_benchmark, BenchmarkDataset, BenchmarkSpec, ClassifierSuite, Metric, RunOptions};
use cfa::resample::{Method, ResamplePlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let datasets = (0..3)
        .map(|seed| {
            Ok(BenchmarkDataset {
                id: format!("blobs-{seed}"),
                data: gaussian_blobs(&BlobSpec::two_d(400, 40), seed)?,
            })
        })
        .collect::<cfa::Result<Vec<_>>>()?;
    let methods = vec![
        ResamplePlan::new(Method::Smote),
        ResamplePlan::new(Method::Bsmote),
        ResamplePlan::new(Method::Adasyn),
        ResamplePlan::new(Method::Slsmote),
        // Two features leave room for only one difference per pair.
        ResamplePlan::new(Method::Cfa {
            tolerance: 0.01,
            max_diffs: 1,
            verify: false,
        }),
    ];
    let classifiers = vec![ClassifierSuite {
        name: "KNN".into(),
        grid: ClassifierGrid::Knn {
            n_neighbors: vec![3, 5, 7],
        },
    }];
    let spec = BenchmarkSpec::new(datasets, methods, classifiers, 2024);
    let report = run_benchmark(&spec, &RunOptions::default())?;

    print!("{}", metric_table_csv(&report, "KNN", Metric::RocAuc));
    print!("{}", metric_table_csv(&report, "KNN", Metric::Recall));

    let tmp;
    let dir = match std::env::args().nth(1) {
        Some(d) => std::path::PathBuf::from(d),
        None => {
            tmp = tempfile::tempdir()?;
            tmp.path().to_path_buf()
        }
    };
    let files = write_artifacts(&report, &dir)?;
    println!("{} files written to {}", files.len(), dir.display());
    Ok(())
}
