//! Counterfactual augmentation on a hand-sized dataset: mine the native pairs,
//! then turn every unpaired majority row into a synthetic minority row.

use cfa::cf_engine::{compute_cf_set, ToleranceTable};
use cfa::dataset::{feature_stats, Dataset, Label};
use cfa::resample::{resample, Method, ResamplePlan};

fn main() -> cfa::Result<()> {
    let rows = vec![
        vec![0.0, 0.0, 0.0],
        vec![10.0, 10.0, 0.0],
        vec![30.0, 40.0, 50.0],
        vec![50.0, 60.0, 70.0],
        vec![70.0, 80.0, 90.0],
        vec![90.0, 100.0, 110.0],
        vec![0.0, 0.0, 5.0],
        vec![10.0, 10.0, 5.0],
    ];
    let mut labels = vec![Label::Negative; 6];
    labels.extend([Label::Positive; 2]);
    let ds = Dataset::from_rows(rows, labels)?;

    let tol = ToleranceTable::from_stats(&feature_stats(&ds), 0.1)?;
    let cf = compute_cf_set(&ds, &tol, 2)?;
    for p in cf.pairs() {
        println!(
            "pair x={} p={} differ on {:?}, match on {:?}",
            p.majority_index, p.minority_index, p.diff_features, p.match_features
        );
    }
    println!("unpaired majority rows: {:?}", cf.unpaired_majority());

    let r = resample(&ds, &ResamplePlan::new(Method::cfa()).with_seed(1))?;
    for s in &r.synthetic {
        println!("{:>18}  {:?}", s.provenance.to_string(), s.values);
    }
    println!(
        "minority {} -> {} (shortfall {})",
        r.diagnostics.minority_before, r.diagnostics.minority_after, r.diagnostics.shortfall
    );
    Ok(())
}
