//! Cross-validated hyperparameter search for each classifier family on Pima.

use cfa::classifiers::{grid_search, ClassifierGrid};
use cfa::dataset::{load_csv, Binarization, CsvOptions, LabelColumn};
use cfa::evaluation::Metric;

fn main() -> cfa::Result<()> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/pima.csv");
    let opts = CsvOptions {
        has_header: true,
        label_column: LabelColumn::Name("Class".into()),
        skip_columns: Vec::new(),
    };
    let ds = load_csv(path, &opts)?.binarize(&Binarization::Ovr {
        positive: "positive".into(),
    })?;

    let grids = [
        ClassifierGrid::reference_knn(),
        ClassifierGrid::Logreg {
            max_iter: vec![200],
            c: vec![0.01, 1.0, 100.0],
        },
        ClassifierGrid::Forest {
            n_tree: vec![50],
            max_depth: vec![4, 8],
        },
    ];
    for grid in &grids {
        let report = grid_search(&grid.expand(), &ds, 5, Metric::RocAuc, 7)?;
        for e in &report.entries {
            println!("{:32} AUC {:.4}", e.spec.to_string(), e.mean);
        }
        println!("best: {} ({} fits)\n", report.best_spec(), report.n_fits());
    }
    Ok(())
}
