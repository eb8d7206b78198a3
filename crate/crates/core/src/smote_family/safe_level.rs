use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{row_at, MinorityContext};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::neighbors::count_label;
use crate::resample::{MethodDetails, ResamplePlan, ResampleResult};

/// Range of `delta` allowed for one (base, neighbour) draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SafeLevelGap {
    /// Both endpoints are unsafe: the draw is dropped.
    Discard,
    /// Only the base is safe: the synthetic copies the base (`delta = 0`).
    Copy,
    /// `delta` uniform on `[lo, hi)`.
    Range { lo: f64, hi: f64 },
}

/// Safe-level case rules for base safe level `sl_p` and neighbour safe level `sl_n`.
pub fn safe_level_gap(sl_p: usize, sl_n: usize) -> SafeLevelGap {
    match (sl_p, sl_n) {
        (0, 0) => SafeLevelGap::Discard,
        (_, 0) => SafeLevelGap::Copy,
        _ => {
            let ratio = sl_p as f64 / sl_n as f64;
            if sl_p == sl_n {
                SafeLevelGap::Range { lo: 0.0, hi: 1.0 }
            } else if ratio > 1.0 {
                SafeLevelGap::Range {
                    lo: 0.0,
                    hi: 1.0 / ratio,
                }
            } else {
                SafeLevelGap::Range {
                    lo: 1.0 - ratio,
                    hi: 1.0,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafeLevelDiagnostics {
    /// Minority count among the k nearest neighbours, per minority row (ascending row order).
    pub safe_levels: Vec<usize>,
    /// Draws dropped because both endpoints were unsafe.
    pub discarded: usize,
}

/// Consecutive discarded draws tolerated per requested synthetic instance.
const LIVELOCK_FACTOR: usize = 1000;

/// Safe-Level-SMOTE: `delta` is pulled toward whichever endpoint has more
/// minority instances around it.
pub fn safe_level_smote(ds: &Dataset, plan: &ResamplePlan) -> Result<ResampleResult> {
    let target = plan.target.resolve(ds)?;
    let k = plan.k_neighbors;
    let ctx = MinorityContext::new(ds, k)?;
    let needed = target - ctx.minority.len();

    let safe_levels: Vec<usize> = (0..ctx.minority.len())
        .map(|pos| count_label(ds, &ctx.neighbors_in_all(pos, k), Label::Positive))
        .collect();
    let level_of = |row: usize| {
        let pos = ctx.minority.binary_search(&row).expect("neighbour is a minority row");
        safe_levels[pos]
    };

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut rows = Vec::with_capacity(needed);
    let mut discarded = 0;
    let mut consecutive = 0;
    let limit = LIVELOCK_FACTOR * needed.max(1);
    while rows.len() < needed {
        let pos = rng.random_range(0..ctx.minority.len());
        let base = ctx.minority[pos];
        let nbrs = &ctx.neighbors[pos];
        let neighbor = nbrs[rng.random_range(0..nbrs.len())];
        let u: f64 = rng.random();
        let delta = match safe_level_gap(safe_levels[pos], level_of(neighbor)) {
            SafeLevelGap::Discard => {
                discarded += 1;
                consecutive += 1;
                if consecutive >= limit {
                    return Err(Error::Livelock {
                        discarded: consecutive,
                    });
                }
                continue;
            }
            SafeLevelGap::Copy => 0.0,
            SafeLevelGap::Range { lo, hi } => lo + (hi - lo) * u,
        };
        consecutive = 0;
        rows.push(row_at(ds, "slsmote", base, neighbor, delta));
    }

    let mut warnings = Vec::new();
    if discarded > 0 {
        warnings.push(format!("{discarded} draws discarded (both endpoints unsafe)"));
    }
    let details = MethodDetails::Slsmote(SafeLevelDiagnostics {
        safe_levels,
        discarded,
    });
    ResampleResult::assemble(ds, "slsmote", target, rows, warnings, details)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resample::{Method, Provenance};
    use crate::smote_family::test_support::grid_dataset;

    #[test]
    fn case_rules() {
        assert_eq!(safe_level_gap(0, 0), SafeLevelGap::Discard);
        assert_eq!(safe_level_gap(3, 0), SafeLevelGap::Copy);
        assert_eq!(safe_level_gap(2, 2), SafeLevelGap::Range { lo: 0.0, hi: 1.0 });
        assert_eq!(safe_level_gap(4, 2), SafeLevelGap::Range { lo: 0.0, hi: 0.5 });
        assert_eq!(safe_level_gap(1, 4), SafeLevelGap::Range { lo: 0.75, hi: 1.0 });
        // Unsafe base, safe neighbour: delta pinned to 1, i.e. the neighbour.
        assert_eq!(safe_level_gap(0, 3), SafeLevelGap::Range { lo: 1.0, hi: 1.0 });
    }

    #[test]
    fn deltas_respect_the_case_ranges() {
        let ds = grid_dataset(80, 16);
        let r = safe_level_smote(&ds, &ResamplePlan::new(Method::Slsmote).with_seed(2)).unwrap();
        assert_eq!(r.dataset.count(Label::Positive), 80);
        let MethodDetails::Slsmote(d) = &r.diagnostics.details else {
            panic!()
        };
        let minority = ds.indices_of(Label::Positive);
        let sl = |row: usize| d.safe_levels[minority.binary_search(&row).unwrap()];
        for s in &r.synthetic {
            let Provenance::Interpolated {
                base,
                neighbor,
                delta,
                ..
            } = s.provenance
            else {
                panic!()
            };
            match safe_level_gap(sl(base), sl(neighbor)) {
                SafeLevelGap::Discard => panic!("discarded draw was emitted"),
                SafeLevelGap::Copy => {
                    assert_eq!(delta, 0.0);
                    assert_eq!(s.values, ds.row(base));
                }
                SafeLevelGap::Range { lo, hi } => {
                    assert!(lo <= delta && (delta < hi || lo == hi));
                }
            }
        }
    }

    #[test]
    fn all_unsafe_minority_livelocks() {
        // Each minority point sits alone among majority points: safe level 0 everywhere.
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for c in 0..4 {
            let centre = c as f64 * 100.0;
            rows.push(vec![centre, 0.0]);
            labels.push(Label::Positive);
            for j in 0..6 {
                rows.push(vec![centre + 0.1 * (j as f64 + 1.0), 0.0]);
                labels.push(Label::Negative);
            }
        }
        let ds = Dataset::from_rows(rows, labels).unwrap();
        let plan = ResamplePlan::new(Method::Slsmote).with_k(3);
        assert!(matches!(
            safe_level_smote(&ds, &plan),
            Err(Error::Livelock { .. })
        ));
    }
}
