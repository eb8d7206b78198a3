//! Counterfactual augmentation.
//!
//! The oversampler works in three steps:
//!
//! 1. Mine every *native counterfactual pair* `(x, p)`: a majority instance
//!    `x` and a minority instance `p` whose feature values agree within a
//!    per-feature tolerance everywhere except on one or two *difference
//!    features*. This is the CF-Set.
//! 2. For every majority instance `x'` that takes part in no pair, find the
//!    nearest paired majority instance `x` (Euclidean distance on min-max
//!    scaled features) and pick its pair.
//! 3. Build a synthetic minority instance `p'` that copies the match features
//!    from `x'` and the difference features from `p`.
//!
//! No value is ever interpolated: every feature of `p'` is an existing value
//! of either `x'` or `p`.

use std::collections::HashSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{feature_stats, Dataset, FeatureStats, Label};
use crate::error::{Error, Result};
use crate::neighbors::ScaledRows;
use crate::resample::{LabelPredictor, MethodDetails, Provenance, ResampleResult, SyntheticRow, Target};

/// Per-feature matching thresholds `tau_f = factor * sigma_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceTable {
    factor: f64,
    thresholds: Vec<f64>,
}

impl ToleranceTable {
    pub fn from_stats(stats: &FeatureStats, factor: f64) -> Result<Self> {
        if !(factor >= 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance factor must be finite and >= 0, got {factor}"
            )));
        }
        Ok(ToleranceTable {
            factor,
            thresholds: stats.std.iter().map(|s| factor * s).collect(),
        })
    }

    /// Explicit thresholds, mainly for tests and hand-built examples.
    pub fn from_thresholds(thresholds: Vec<f64>) -> Self {
        ToleranceTable {
            factor: f64::NAN,
            thresholds,
        }
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn threshold(&self, feature: usize) -> f64 {
        self.thresholds[feature]
    }

    pub fn n_features(&self) -> usize {
        self.thresholds.len()
    }
}

/// Features on which `a` and `b` differ by more than the tolerance, ascending.
pub fn features_match(a: &[f64], b: &[f64], tol: &ToleranceTable) -> Result<Vec<usize>> {
    if a.len() != b.len() || a.len() != tol.n_features() {
        return Err(Error::DimensionMismatch {
            expected: tol.n_features(),
            found: if a.len() != tol.n_features() { a.len() } else { b.len() },
        });
    }
    Ok(differing(a, b, &tol.thresholds, usize::MAX).unwrap_or_default())
}

/// Differing features, or `None` as soon as more than `limit` are found.
fn differing(a: &[f64], b: &[f64], tau: &[f64], limit: usize) -> Option<Vec<usize>> {
    let mut diffs = Vec::new();
    for (f, ((x, y), t)) in a.iter().zip(b).zip(tau).enumerate() {
        if (x - y).abs() > *t {
            if diffs.len() == limit {
                return None;
            }
            diffs.push(f);
        }
    }
    Some(diffs)
}

/// A native counterfactual pair. Indices are row numbers of the mined dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CfPair {
    pub majority_index: usize,
    pub minority_index: usize,
    pub diff_features: Vec<usize>,
    pub match_features: Vec<usize>,
}

/// All good native pairs plus the partition of the majority class into
/// paired and unpaired instances.
#[derive(Debug, Clone, PartialEq)]
pub struct CfSet {
    pairs: Vec<CfPair>,
    paired_majority: Vec<usize>,
    unpaired_majority: Vec<usize>,
    // (majority row, start, end) ranges into `pairs`, which is sorted by majority row.
    groups: Vec<(usize, usize, usize)>,
}

impl CfSet {
    /// Pairs ordered by (majority row, minority row).
    pub fn pairs(&self) -> &[CfPair] {
        &self.pairs
    }

    pub fn paired_majority(&self) -> &[usize] {
        &self.paired_majority
    }

    pub fn unpaired_majority(&self) -> &[usize] {
        &self.unpaired_majority
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn pairs_of(&self, group: usize) -> &[CfPair] {
        let (_, s, e) = self.groups[group];
        &self.pairs[s..e]
    }
}

/// Exhaustively mine every (majority, minority) pair with between one and
/// `max_diffs` difference features.
pub fn compute_cf_set(ds: &Dataset, tol: &ToleranceTable, max_diffs: usize) -> Result<CfSet> {
    ds.require_both_classes()?;
    if tol.n_features() != ds.n_features() {
        return Err(Error::DimensionMismatch {
            expected: ds.n_features(),
            found: tol.n_features(),
        });
    }
    let majority = ds.indices_of(Label::Negative);
    let minority = ds.indices_of(Label::Positive);
    let all: Vec<usize> = (0..ds.n_features()).collect();

    let per_majority: Vec<Vec<CfPair>> = majority
        .par_iter()
        .map(|&x| {
            let xr = ds.row(x);
            minority
                .iter()
                .filter_map(|&p| {
                    let diffs = differing(xr, ds.row(p), tol.thresholds(), max_diffs)?;
                    if diffs.is_empty() {
                        return None;
                    }
                    let matches = all.iter().copied().filter(|f| !diffs.contains(f)).collect();
                    Some(CfPair {
                        majority_index: x,
                        minority_index: p,
                        diff_features: diffs,
                        match_features: matches,
                    })
                })
                .collect()
        })
        .collect();

    let mut pairs = Vec::new();
    let mut groups = Vec::new();
    let mut paired = Vec::new();
    let mut unpaired = Vec::new();
    for (&x, ps) in majority.iter().zip(per_majority) {
        if ps.is_empty() {
            unpaired.push(x);
        } else {
            paired.push(x);
            groups.push((x, pairs.len(), pairs.len() + ps.len()));
            pairs.extend(ps);
        }
    }
    Ok(CfSet {
        pairs,
        paired_majority: paired,
        unpaired_majority: unpaired,
        groups,
    })
}

/// The pair used to transform `x_prime`: nearest paired majority member first,
/// then the nearest minority member among that instance's pairs. Remaining
/// ties go to the lowest (majority, minority) row numbers.
pub fn nearest_paired<'a>(x_prime: usize, cf: &'a CfSet, space: &ScaledRows) -> Result<&'a CfPair> {
    if cf.is_empty() {
        return Err(Error::EmptyCfSet);
    }
    let mut best_group = 0;
    let mut best = f64::INFINITY;
    for (g, &(x, _, _)) in cf.groups.iter().enumerate() {
        let d = space.distance(x_prime, x);
        if d < best {
            best = d;
            best_group = g;
        }
    }
    let candidates = cf.pairs_of(best_group);
    let mut pick = &candidates[0];
    let mut best = f64::INFINITY;
    for pair in candidates {
        let d = space.distance(x_prime, pair.minority_index);
        if d < best {
            best = d;
            pick = pair;
        }
    }
    Ok(pick)
}

/// A CFA candidate before it is added to the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticInstance {
    pub values: Vec<f64>,
    pub source: usize,
    pub template: (usize, usize),
}

impl SyntheticInstance {
    pub fn provenance(&self) -> Provenance {
        Provenance::Cfa {
            x_prime: self.source,
            x: self.template.0,
            p: self.template.1,
        }
    }
}

/// Copy the match features from `x_prime` and the difference features from the pair's `p`.
pub fn synthesize(x_prime: usize, pair: &CfPair, ds: &Dataset) -> SyntheticInstance {
    let mut values = ds.row(x_prime).to_vec();
    let p = ds.row(pair.minority_index);
    for &f in &pair.diff_features {
        values[f] = p[f];
    }
    SyntheticInstance {
        values,
        source: x_prime,
        template: (pair.majority_index, pair.minority_index),
    }
}

/// Tolerance factor and difference-feature bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfaParams {
    pub tolerance: f64,
    pub max_diffs: usize,
}

impl Default for CfaParams {
    fn default() -> Self {
        CfaParams {
            tolerance: 0.1,
            max_diffs: 2,
        }
    }
}

impl CfaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be finite and >= 0, got {}",
                self.tolerance
            )));
        }
        if self.max_diffs == 0 {
            return Err(Error::InvalidParameter("max_diffs must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfaDiagnostics {
    pub tolerance: f64,
    pub max_diffs: usize,
    pub pair_count: usize,
    pub paired_majority: usize,
    pub unpaired_majority: usize,
    /// One candidate per unpaired majority instance.
    pub candidates: usize,
    /// Candidates dropped by the verifier; `None` when verification is off.
    pub rejected: Option<usize>,
    /// Candidates removed by the seeded subsample down to the target.
    pub trimmed: usize,
    /// Accepted synthetics identical to an earlier accepted synthetic.
    pub duplicates: usize,
}

/// Oversample the minority class of a (training) dataset with counterfactual
/// augmentation. Tolerances and the distance scaling come from `ds` itself.
///
/// One candidate is generated per unpaired majority instance, in ascending row
/// order. Surplus candidates are trimmed by a seeded subsample; a deficit is
/// reported as a shortfall, never filled by other means.
pub fn cfa_oversample(
    ds: &Dataset,
    params: &CfaParams,
    target: Target,
    seed: u64,
    verify: Option<&dyn LabelPredictor>,
) -> Result<ResampleResult> {
    params.validate()?;
    ds.require_both_classes()?;
    let target = target.resolve(ds)?;
    let needed = target - ds.count(Label::Positive);
    if needed == 0 {
        return ResampleResult::assemble(
            ds,
            "cfa",
            target,
            Vec::new(),
            vec!["minority already at target; nothing generated".into()],
            MethodDetails::None,
        );
    }

    let stats = feature_stats(ds);
    let tol = ToleranceTable::from_stats(&stats, params.tolerance)?;
    let cf = compute_cf_set(ds, &tol, params.max_diffs)?;
    if cf.is_empty() {
        return Err(Error::NoPairs {
            tolerance: params.tolerance,
            max_diffs: params.max_diffs,
            n_majority: ds.count(Label::Negative),
            n_minority: ds.count(Label::Positive),
        });
    }

    let space = ScaledRows::fit(ds);
    let candidates: Vec<SyntheticInstance> = cf
        .unpaired_majority()
        .par_iter()
        .map(|&xp| nearest_paired(xp, &cf, &space).map(|pair| synthesize(xp, pair, ds)))
        .collect::<Result<_>>()?;
    let n_candidates = candidates.len();

    let (mut accepted, rejected) = match verify {
        Some(model) => {
            let keep: Vec<bool> = candidates
                .par_iter()
                .map(|c| model.predict_label(&c.values).map(Label::is_positive))
                .collect::<Result<_>>()?;
            let kept: Vec<SyntheticInstance> = candidates
                .into_iter()
                .zip(keep)
                .filter_map(|(c, k)| k.then_some(c))
                .collect();
            let rejected = n_candidates - kept.len();
            (kept, Some(rejected))
        }
        None => (candidates, None),
    };

    let mut trimmed = 0;
    if accepted.len() > needed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut keep = index::sample(&mut rng, accepted.len(), needed).into_vec();
        keep.sort_unstable();
        trimmed = accepted.len() - needed;
        let mut keep = keep.into_iter().peekable();
        accepted = accepted
            .into_iter()
            .enumerate()
            .filter_map(|(i, c)| {
                if keep.peek() == Some(&i) {
                    keep.next();
                    Some(c)
                } else {
                    None
                }
            })
            .collect();
    }

    let mut seen = HashSet::new();
    let duplicates = accepted
        .iter()
        .filter(|c| !seen.insert(c.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()))
        .count();

    let mut warnings = Vec::new();
    if duplicates > 0 {
        warnings.push(format!("{duplicates} synthetic instances duplicate earlier ones"));
    }
    let details = MethodDetails::Cfa(CfaDiagnostics {
        tolerance: params.tolerance,
        max_diffs: params.max_diffs,
        pair_count: cf.pairs().len(),
        paired_majority: cf.paired_majority().len(),
        unpaired_majority: cf.unpaired_majority().len(),
        candidates: n_candidates,
        rejected,
        trimmed,
        duplicates,
    });
    let synthetic = accepted
        .into_iter()
        .map(|c| SyntheticRow {
            provenance: c.provenance(),
            values: c.values,
        })
        .collect();
    ResampleResult::assemble(ds, "cfa", target, synthetic, warnings, details)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::MinMaxScaler;

    // A=(0,0,0,0), B=(0,0,5,5) majority; C=(0,0,0,9) minority; x'=(0,1,0,0) majority.
    fn toy() -> Dataset {
        Dataset::from_rows(
            vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 5.0, 5.0],
                vec![0.0, 0.0, 0.0, 9.0],
            ],
            vec![Label::Negative, Label::Negative, Label::Positive],
        )
        .unwrap()
    }

    #[test]
    fn tolerance_comparisons() {
        let tol = ToleranceTable::from_thresholds(vec![0.5, 0.5]);
        assert_eq!(features_match(&[0.0, 0.0], &[0.4, 0.6], &tol).unwrap(), vec![1]);
        assert!(features_match(&[1.0, 2.0], &[1.0, 2.0], &tol).unwrap().is_empty());
        let zero = ToleranceTable::from_thresholds(vec![0.0]);
        assert!(features_match(&[3.0], &[3.0], &zero).unwrap().is_empty());
        assert_eq!(features_match(&[3.0], &[3.0001], &zero).unwrap(), vec![0]);
        assert!(features_match(&[3.0], &[3.0, 1.0], &zero).is_err());
    }

    #[test]
    fn tolerance_from_constant_feature_is_zero() {
        let ds = Dataset::from_rows(
            vec![vec![1.0, 3.0], vec![2.0, 3.0]],
            vec![Label::Positive, Label::Negative],
        )
        .unwrap();
        let tol = ToleranceTable::from_stats(&feature_stats(&ds), 0.1).unwrap();
        assert_eq!(tol.threshold(1), 0.0);
        assert!((tol.threshold(0) - 0.05).abs() < 1e-15);
        assert!(ToleranceTable::from_stats(&feature_stats(&ds), -1.0).is_err());
    }

    #[test]
    fn toy_cf_set() {
        let ds = toy();
        let tol = ToleranceTable::from_thresholds(vec![0.0; 4]);
        let cf = compute_cf_set(&ds, &tol, 2).unwrap();
        assert_eq!(cf.pairs().len(), 2);
        assert_eq!(cf.pairs()[0].majority_index, 0);
        assert_eq!(cf.pairs()[0].diff_features, vec![3]);
        assert_eq!(cf.pairs()[0].match_features, vec![0, 1, 2]);
        assert_eq!(cf.pairs()[1].majority_index, 1);
        assert_eq!(cf.pairs()[1].diff_features, vec![2, 3]);
        assert!(cf.unpaired_majority().is_empty());
    }

    #[test]
    fn duplicate_across_classes_is_not_a_pair() {
        let ds = Dataset::from_rows(
            vec![vec![1.0, 2.0], vec![1.0, 2.0]],
            vec![Label::Negative, Label::Positive],
        )
        .unwrap();
        let cf = compute_cf_set(&ds, &ToleranceTable::from_thresholds(vec![0.0; 2]), 2).unwrap();
        assert!(cf.is_empty());
        assert_eq!(cf.unpaired_majority(), &[0]);
    }

    #[test]
    fn three_differences_exceed_the_bound() {
        let ds = Dataset::from_rows(
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 1.0, 0.0],
                vec![5.0, 5.0, 5.0],
                vec![1.0, 1.0, 1.0],
                vec![0.0, 1.0, 1.0],
            ],
            vec![
                Label::Negative,
                Label::Negative,
                Label::Negative,
                Label::Positive,
                Label::Positive,
            ],
        )
        .unwrap();
        let cf = compute_cf_set(&ds, &ToleranceTable::from_thresholds(vec![0.0; 3]), 2).unwrap();
        let got: Vec<(usize, usize)> = cf
            .pairs()
            .iter()
            .map(|p| (p.majority_index, p.minority_index))
            .collect();
        // (0,3) and (2,*) differ in all three features.
        assert_eq!(got, vec![(0, 4), (1, 3), (1, 4)]);
        assert_eq!(cf.unpaired_majority(), &[2]);
    }

    #[test]
    fn nearest_pair_and_synthesis_on_toy() {
        let mut rows: Vec<Vec<f64>> = toy().rows().map(<[f64]>::to_vec).collect();
        rows.push(vec![0.0, 1.0, 0.0, 0.0]);
        let ds = Dataset::from_rows(
            rows,
            vec![Label::Negative, Label::Negative, Label::Positive, Label::Negative],
        )
        .unwrap();
        // CF-Set of the three-row toy; x' = row 3 is queried against it.
        let base = compute_cf_set(&toy(), &ToleranceTable::from_thresholds(vec![0.0; 4]), 2).unwrap();
        let space = ScaledRows::with_scaler(&ds, MinMaxScaler::identity(4));
        let pair = nearest_paired(3, &base, &space).unwrap();
        assert_eq!((pair.majority_index, pair.minority_index), (0, 2));
        let syn = synthesize(3, pair, &ds);
        assert_eq!(syn.values, vec![0.0, 1.0, 0.0, 9.0]);
        assert_eq!(syn.provenance().to_string(), "cfa:x'=3;x=0;p=2");
    }

    #[test]
    fn synthesis_fixed_points() {
        let ds = toy();
        let cf = compute_cf_set(&ds, &ToleranceTable::from_thresholds(vec![0.0; 4]), 4).unwrap();
        // x' = x reproduces p.
        let pair = &cf.pairs()[0];
        assert_eq!(synthesize(0, pair, &ds).values, ds.row(2));
        // All features different: p' = p whatever x' is.
        let all = CfPair {
            majority_index: 1,
            minority_index: 2,
            diff_features: vec![0, 1, 2, 3],
            match_features: vec![],
        };
        assert_eq!(synthesize(0, &all, &ds).values, ds.row(2));
    }

    #[test]
    fn equidistant_majority_members_resolve_to_lower_index() {
        // Two paired majority rows at equal distance from the unpaired one.
        let ds = Dataset::from_rows(
            vec![
                vec![-1.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 50.0],
                vec![-1.0, 9.0],
                vec![1.0, 9.0],
            ],
            vec![
                Label::Negative,
                Label::Negative,
                Label::Negative,
                Label::Positive,
                Label::Positive,
            ],
        )
        .unwrap();
        let cf = compute_cf_set(&ds, &ToleranceTable::from_thresholds(vec![0.0, 0.0]), 1).unwrap();
        assert_eq!(cf.unpaired_majority(), &[2]);
        let space = ScaledRows::with_scaler(&ds, MinMaxScaler::identity(2));
        for _ in 0..3 {
            let pair = nearest_paired(2, &cf, &space).unwrap();
            assert_eq!((pair.majority_index, pair.minority_index), (0, 3));
        }
    }

    #[test]
    fn single_pair_is_always_chosen() {
        let ds = Dataset::from_rows(
            vec![vec![0.0, 0.0], vec![100.0, 100.0], vec![0.0, 1.0]],
            vec![Label::Negative, Label::Negative, Label::Positive],
        )
        .unwrap();
        let cf = compute_cf_set(&ds, &ToleranceTable::from_thresholds(vec![0.0, 0.0]), 1).unwrap();
        assert_eq!(cf.pairs().len(), 1);
        let space = ScaledRows::fit(&ds);
        assert_eq!(nearest_paired(1, &cf, &space).unwrap().majority_index, 0);
    }

    #[test]
    fn empty_cf_set_errors() {
        let ds = Dataset::from_rows(
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            vec![Label::Negative, Label::Positive],
        )
        .unwrap();
        let cf = compute_cf_set(&ds, &ToleranceTable::from_thresholds(vec![0.0, 0.0]), 1).unwrap();
        assert!(cf.is_empty());
        let space = ScaledRows::fit(&ds);
        assert!(matches!(nearest_paired(0, &cf, &space), Err(Error::EmptyCfSet)));
        let params = CfaParams {
            tolerance: 0.0,
            max_diffs: 1,
        };
        assert!(matches!(
            cfa_oversample(&ds, &params, Target::Count(2), 0, None),
            Err(Error::NoPairs { .. })
        ));
        // Already at target: nothing is mined, so no error.
        let r = cfa_oversample(&ds, &params, Target::Parity, 0, None).unwrap();
        assert_eq!(r.synthetic.len(), 0);
    }
}
