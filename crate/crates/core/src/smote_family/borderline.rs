use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{uniform_generation, MinorityContext};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::neighbors::count_label;
use crate::resample::{MethodDetails, ResamplePlan, ResampleResult};

/// Role of a minority instance given the majority count among its m neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BorderlineClass {
    /// Every neighbour is majority.
    Noise,
    /// `m/2 <= m' < m`.
    Danger,
    /// `m' < m/2`.
    Safe,
}

/// Noise when all `m` neighbours are majority, DANGER when at least half are,
/// safe otherwise. The half is compared as a real number, so m = 5, m' = 3 is DANGER.
pub fn classify_borderline(majority_neighbors: usize, m: usize) -> BorderlineClass {
    debug_assert!(majority_neighbors <= m);
    if majority_neighbors == m {
        BorderlineClass::Noise
    } else if 2 * majority_neighbors >= m {
        BorderlineClass::Danger
    } else {
        BorderlineClass::Safe
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorderlineDiagnostics {
    pub m_neighbors: usize,
    /// Majority count among the m nearest neighbours, per minority row (ascending row order).
    pub majority_neighbor_counts: Vec<usize>,
    pub noise: Vec<usize>,
    pub danger: Vec<usize>,
    pub safe: Vec<usize>,
    pub fell_back_to_smote: bool,
}

/// Borderline-SMOTE: only DANGER minority instances serve as interpolation bases;
/// neighbours still come from the whole minority class.
pub fn borderline_smote(ds: &Dataset, plan: &ResamplePlan) -> Result<ResampleResult> {
    let target = plan.target.resolve(ds)?;
    let m = plan.m_neighbors();
    if m == 0 {
        return Err(Error::InvalidParameter("m_neighbors must be >= 1".into()));
    }
    if m >= ds.n_instances() {
        return Err(Error::InvalidParameter(format!(
            "m_neighbors = {m} needs more than {} instances",
            ds.n_instances()
        )));
    }
    let ctx = MinorityContext::new(ds, plan.k_neighbors)?;

    let mut counts = Vec::with_capacity(ctx.minority.len());
    let (mut noise, mut danger, mut safe) = (Vec::new(), Vec::new(), Vec::new());
    let mut danger_pos = Vec::new();
    for (pos, &row) in ctx.minority.iter().enumerate() {
        let nbrs = ctx.neighbors_in_all(pos, m);
        let maj = count_label(ds, &nbrs, Label::Negative);
        counts.push(maj);
        match classify_borderline(maj, m) {
            BorderlineClass::Noise => noise.push(row),
            BorderlineClass::Danger => {
                danger.push(row);
                danger_pos.push(pos);
            }
            BorderlineClass::Safe => safe.push(row),
        }
    }

    let needed = target - ctx.minority.len();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut warnings = Vec::new();
    let fell_back = danger_pos.is_empty();
    let bases: Vec<usize> = if fell_back {
        warnings.push("DANGER set is empty; generated with plain SMOTE".to_string());
        (0..ctx.minority.len()).collect()
    } else {
        danger_pos
    };
    let tag = if fell_back { "smote" } else { "bsmote" };
    let rows = uniform_generation(ds, &ctx, tag, &bases, needed, &mut rng);

    let details = MethodDetails::Bsmote(BorderlineDiagnostics {
        m_neighbors: m,
        majority_neighbor_counts: counts,
        noise,
        danger,
        safe,
        fell_back_to_smote: fell_back,
    });
    ResampleResult::assemble(ds, "bsmote", target, rows, warnings, details)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resample::{Method, Provenance};
    use crate::smote_family::test_support::grid_dataset;

    #[test]
    fn intervals_for_m_five() {
        assert_eq!(classify_borderline(5, 5), BorderlineClass::Noise);
        assert_eq!(classify_borderline(4, 5), BorderlineClass::Danger);
        assert_eq!(classify_borderline(3, 5), BorderlineClass::Danger);
        for safe in 0..=2 {
            assert_eq!(classify_borderline(safe, 5), BorderlineClass::Safe);
        }
        // Even m: exactly half is DANGER.
        assert_eq!(classify_borderline(2, 4), BorderlineClass::Danger);
        assert_eq!(classify_borderline(1, 4), BorderlineClass::Safe);
    }

    #[test]
    fn only_danger_rows_are_bases() {
        let ds = grid_dataset(80, 16);
        let plan = ResamplePlan::new(Method::Bsmote).with_seed(5);
        let r = borderline_smote(&ds, &plan).unwrap();
        assert_eq!(r.dataset.count(Label::Positive), 80);
        let MethodDetails::Bsmote(d) = &r.diagnostics.details else {
            panic!("wrong details")
        };
        assert_eq!(d.noise.len() + d.danger.len() + d.safe.len(), 16);
        for s in &r.synthetic {
            let Provenance::Interpolated { base, .. } = s.provenance else {
                panic!()
            };
            if !d.fell_back_to_smote {
                assert!(d.danger.contains(&base));
            }
        }
        for (&row, &c) in ds.indices_of(Label::Positive).iter().zip(&d.majority_neighbor_counts) {
            if d.danger.contains(&row) {
                assert!((3..=4).contains(&c));
            }
        }
    }

    #[test]
    fn separated_classes_fall_back_to_smote() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..30 {
            rows.push(vec![i as f64 * 0.01, 0.0]);
            labels.push(Label::Negative);
        }
        for i in 0..8 {
            rows.push(vec![100.0 + i as f64 * 0.01, 0.0]);
            labels.push(Label::Positive);
        }
        let ds = Dataset::from_rows(rows, labels).unwrap();
        let r = borderline_smote(&ds, &ResamplePlan::new(Method::Bsmote)).unwrap();
        assert_eq!(r.dataset.count(Label::Positive), 30);
        assert!(!r.diagnostics.warnings.is_empty());
    }
}
