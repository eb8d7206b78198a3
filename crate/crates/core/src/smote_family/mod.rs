//! Interpolating oversamplers: SMOTE, Borderline-SMOTE, ADASYN and Safe-Level-SMOTE.
//!
//! All four build a synthetic minority instance on the segment between a
//! minority base `p` and one of its `k` nearest minority neighbours `n`:
//! `p + (n - p) * delta` with `delta` drawn from `[0, 1)`. They differ in how
//! bases are chosen and how `delta` is constrained. Neighbour searches use
//! Euclidean distance on min-max scaled features and never return the query
//! itself; synthetic values are in raw feature units.

mod adasyn;
mod borderline;
mod safe_level;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::neighbors::ScaledRows;
use crate::resample::{MethodDetails, Provenance, ResamplePlan, ResampleResult, SyntheticRow};

pub use adasyn::{adasyn, adasyn_allocation, AdasynDiagnostics};
pub use borderline::{borderline_smote, classify_borderline, BorderlineClass, BorderlineDiagnostics};
pub use safe_level::{safe_level_gap, safe_level_smote, SafeLevelDiagnostics, SafeLevelGap};

/// `p + (n - p) * delta`, clamped per coordinate to the closed segment so
/// floating-point rounding cannot leave it.
pub fn interpolate(p: &[f64], n: &[f64], delta: f64) -> Vec<f64> {
    p.iter()
        .zip(n)
        .map(|(&a, &b)| {
            let v = a + (b - a) * delta;
            v.clamp(a.min(b), a.max(b))
        })
        .collect()
}

/// Minority rows, their minority neighbour lists and the scaled space behind them.
pub(crate) struct MinorityContext {
    pub space: ScaledRows,
    pub minority: Vec<usize>,
    pub all: Vec<usize>,
    /// `neighbors[i]` holds the k nearest minority rows of `minority[i]`.
    pub neighbors: Vec<Vec<usize>>,
}

impl MinorityContext {
    pub fn new(ds: &Dataset, k: usize) -> Result<Self> {
        ds.require_both_classes()?;
        if k == 0 {
            return Err(Error::InvalidParameter("k_neighbors must be >= 1".into()));
        }
        let minority = ds.indices_of(Label::Positive);
        if minority.len() <= k {
            return Err(Error::InsufficientMinority {
                needed: k + 1,
                found: minority.len(),
            });
        }
        let space = ScaledRows::fit(ds);
        let neighbors = minority
            .iter()
            .map(|&p| space.k_nearest(p, &minority, k))
            .collect();
        Ok(MinorityContext {
            space,
            minority,
            all: (0..ds.n_instances()).collect(),
            neighbors,
        })
    }

    /// `m` nearest rows of a minority instance in the whole dataset.
    pub fn neighbors_in_all(&self, minority_pos: usize, m: usize) -> Vec<usize> {
        self.space.k_nearest(self.minority[minority_pos], &self.all, m)
    }
}

/// One interpolated row from the minority instance at position `pos`.
pub(crate) fn interpolated_row(
    ds: &Dataset,
    ctx: &MinorityContext,
    tag: &str,
    pos: usize,
    rng: &mut ChaCha8Rng,
) -> SyntheticRow {
    let base = ctx.minority[pos];
    let nbrs = &ctx.neighbors[pos];
    let neighbor = nbrs[rng.random_range(0..nbrs.len())];
    let delta: f64 = rng.random();
    row_at(ds, tag, base, neighbor, delta)
}

pub(crate) fn row_at(ds: &Dataset, tag: &str, base: usize, neighbor: usize, delta: f64) -> SyntheticRow {
    SyntheticRow {
        values: interpolate(ds.row(base), ds.row(neighbor), delta),
        provenance: Provenance::Interpolated {
            method: tag.to_string(),
            base,
            neighbor,
            delta,
        },
    }
}

/// Draw `count` rows from bases chosen uniformly among `positions`.
pub(crate) fn uniform_generation(
    ds: &Dataset,
    ctx: &MinorityContext,
    tag: &str,
    positions: &[usize],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<SyntheticRow> {
    (0..count)
        .map(|_| {
            let pos = positions[rng.random_range(0..positions.len())];
            interpolated_row(ds, ctx, tag, pos, rng)
        })
        .collect()
}

/// Plain SMOTE: uniform random minority base, uniform random neighbour among
/// its k nearest minority instances, uniform `delta`.
pub fn smote(ds: &Dataset, plan: &ResamplePlan) -> Result<ResampleResult> {
    let target = plan.target.resolve(ds)?;
    let ctx = MinorityContext::new(ds, plan.k_neighbors)?;
    let needed = target - ctx.minority.len();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let positions: Vec<usize> = (0..ctx.minority.len()).collect();
    let rows = uniform_generation(ds, &ctx, "smote", &positions, needed, &mut rng);
    ResampleResult::assemble(ds, "smote", target, rows, Vec::new(), MethodDetails::Smote)
}
