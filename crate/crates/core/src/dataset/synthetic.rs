//! Seeded Gaussian-blob generator for toy benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{ClassNames, Dataset, Label};
use crate::error::{Error, Result};

/// Two isotropic Gaussian clouds, one per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub n_majority: usize,
    pub n_minority: usize,
    pub majority_center: Vec<f64>,
    pub minority_center: Vec<f64>,
    pub majority_std: f64,
    pub minority_std: f64,
}

impl BlobSpec {
    /// Two-feature blobs with the given class sizes, centres one unit apart on
    /// each axis and unit spread.
    pub fn two_d(n_majority: usize, n_minority: usize) -> Self {
        BlobSpec {
            n_majority,
            n_minority,
            majority_center: vec![0.0, 0.0],
            minority_center: vec![1.0, 1.0],
            majority_std: 1.0,
            minority_std: 1.0,
        }
    }
}

/// Majority rows first, then minority rows.
pub fn gaussian_blobs(spec: &BlobSpec, seed: u64) -> Result<Dataset> {
    if spec.majority_center.len() != spec.minority_center.len() {
        return Err(Error::DimensionMismatch {
            expected: spec.majority_center.len(),
            found: spec.minority_center.len(),
        });
    }
    let normal = |s: f64| {
        Normal::new(0.0, s).map_err(|e| Error::InvalidParameter(format!("blob std: {e}")))
    };
    let maj = normal(spec.majority_std)?;
    let min = normal(spec.minority_std)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut rows = Vec::with_capacity(spec.n_majority + spec.n_minority);
    let mut labels = Vec::with_capacity(rows.capacity());
    for _ in 0..spec.n_majority {
        rows.push(
            spec.majority_center
                .iter()
                .map(|c| c + maj.sample(&mut rng))
                .collect(),
        );
        labels.push(Label::Negative);
    }
    for _ in 0..spec.n_minority {
        rows.push(
            spec.minority_center
                .iter()
                .map(|c| c + min.sample(&mut rng))
                .collect(),
        );
        labels.push(Label::Positive);
    }
    Ok(Dataset::from_rows(rows, labels)?.with_class_names(ClassNames {
        positive: "minority".into(),
        negative: "majority".into(),
    }))
}
