//! Load the bundled CSV files, binarize them and count native counterfactual pairs.

use cfa::cf_engine::{compute_cf_set, ToleranceTable};
use cfa::dataset::{feature_stats, load_csv, summarize, Binarization, CsvOptions, LabelColumn};

fn main() -> cfa::Result<()> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for (file, label, positive) in [("pima.csv", "Class", "positive"), ("glass.csv", "Type", "3")] {
        let opts = CsvOptions {
            has_header: true,
            label_column: LabelColumn::Name(label.into()),
            skip_columns: Vec::new(),
        };
        let raw = load_csv(dir.join(file), &opts)?;
        println!("{file}: classes {:?}", raw.class_counts());
        let ds = raw.binarize(&Binarization::Ovr {
            positive: positive.into(),
        })?;
        let s = summarize(&ds)?;
        println!("  minority={} majority={} IR={:.2}", s.n_minority, s.n_majority, s.imbalance_ratio);
        for factor in [0.0, 0.1, 0.5] {
            let cf = compute_cf_set(&ds, &ToleranceTable::from_stats(&feature_stats(&ds), factor)?, 2)?;
            println!(
                "  tolerance {factor}: {} pairs, {} of {} majority rows paired",
                cf.pairs().len(),
                cf.paired_majority().len(),
                s.n_majority
            );
        }
    }
    Ok(())
}
