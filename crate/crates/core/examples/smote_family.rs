//! The four interpolating oversamplers on an imbalanced two-blob dataset.

use cfa::dataset::synthetic::{gaussian_blobs, BlobSpec};
use cfa::resample::{resample, Method, MethodDetails, ResamplePlan};

fn main() -> cfa::Result<()> {
    let ds = gaussian_blobs(&BlobSpec::two_d(300, 30), 3)?;
    for method in [Method::Smote, Method::Bsmote, Method::Adasyn, Method::Slsmote] {
        let r = resample(&ds, &ResamplePlan::new(method.clone()).with_seed(9))?;
        let note = match &r.diagnostics.details {
            MethodDetails::Bsmote(b) => format!(
                "noise={} danger={} safe={}",
                b.noise.len(),
                b.danger.len(),
                b.safe.len()
            ),
            MethodDetails::Adasyn(a) => {
                format!("largest share {}", a.allocation.iter().max().copied().unwrap_or(0))
            }
            MethodDetails::Slsmote(s) => format!("discarded draws {}", s.discarded),
            _ => String::new(),
        };
        println!(
            "{:9} generated {:4}, first: {}  {note}",
            method.display_name(),
            r.diagnostics.generated,
            r.synthetic[0].provenance
        );
    }
    Ok(())
}
