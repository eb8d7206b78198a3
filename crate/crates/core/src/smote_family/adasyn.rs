use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{interpolated_row, uniform_generation, MinorityContext};
use crate::dataset::{Dataset, Label};
use crate::error::Result;
use crate::neighbors::count_label;
use crate::resample::{MethodDetails, ResamplePlan, ResampleResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdasynDiagnostics {
    /// `r_i = delta_i / k` per minority row (ascending row order).
    pub ratios: Vec<f64>,
    /// Synthetic instances generated from each minority row.
    pub allocation: Vec<usize>,
    pub fell_back_to_smote: bool,
}

/// Split `total` synthetic instances over minority instances in proportion to
/// their difficulty ratios.
///
/// Each share is `round(r_i / sum(r) * total)`. Any rounding residue is settled
/// one unit at a time: a deficit goes to the largest ratios first, an excess is
/// taken from the smallest non-zero shares first. Instances with `r_i = 0`
/// never receive anything. All ratios zero yields an all-zero allocation.
pub fn adasyn_allocation(ratios: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = ratios.iter().sum();
    if sum <= 0.0 || total == 0 {
        return vec![0; ratios.len()];
    }
    let mut g: Vec<usize> = ratios
        .iter()
        .map(|r| (r / sum * total as f64).round() as usize)
        .collect();
    let assigned: usize = g.iter().sum();

    // Largest ratio first, ties by position.
    let mut by_ratio: Vec<usize> = (0..ratios.len()).filter(|&i| ratios[i] > 0.0).collect();
    by_ratio.sort_by(|&a, &b| ratios[b].total_cmp(&ratios[a]).then(a.cmp(&b)));

    if assigned < total {
        for &i in by_ratio.iter().cycle().take(total - assigned) {
            g[i] += 1;
        }
    } else {
        let mut excess = assigned - total;
        while excess > 0 {
            for &i in by_ratio.iter().rev() {
                if excess == 0 {
                    break;
                }
                if g[i] > 0 {
                    g[i] -= 1;
                    excess -= 1;
                }
            }
        }
    }
    g
}

/// ADASYN: minority instances with more majority neighbours (among their k
/// nearest in the whole dataset) receive proportionally more synthetics.
pub fn adasyn(ds: &Dataset, plan: &ResamplePlan) -> Result<ResampleResult> {
    let target = plan.target.resolve(ds)?;
    let k = plan.k_neighbors;
    let ctx = MinorityContext::new(ds, k)?;
    let needed = target - ctx.minority.len();

    let ratios: Vec<f64> = (0..ctx.minority.len())
        .map(|pos| {
            let nbrs = ctx.neighbors_in_all(pos, k);
            count_label(ds, &nbrs, Label::Negative) as f64 / k as f64
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut warnings = Vec::new();
    let fell_back = ratios.iter().all(|&r| r == 0.0);
    let (rows, allocation) = if fell_back {
        warnings.push("no minority instance has a majority neighbour; generated with plain SMOTE".into());
        let positions: Vec<usize> = (0..ctx.minority.len()).collect();
        let rows = uniform_generation(ds, &ctx, "smote", &positions, needed, &mut rng);
        (rows, vec![0; ctx.minority.len()])
    } else {
        let allocation = adasyn_allocation(&ratios, needed);
        let mut rows = Vec::with_capacity(needed);
        for (pos, &g) in allocation.iter().enumerate() {
            for _ in 0..g {
                rows.push(interpolated_row(ds, &ctx, "adasyn", pos, &mut rng));
            }
        }
        (rows, allocation)
    };

    let details = MethodDetails::Adasyn(AdasynDiagnostics {
        ratios,
        allocation,
        fell_back_to_smote: fell_back,
    });
    ResampleResult::assemble(ds, "adasyn", target, rows, warnings, details)
}
