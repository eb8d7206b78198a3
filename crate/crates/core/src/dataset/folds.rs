use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, Label};
use crate::error::{Error, Result};

/// Fold index per instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    k: usize,
    fold_of: Vec<usize>,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fold_of(&self) -> &[usize] {
        &self.fold_of
    }

    /// Rows held out in `fold`, ascending.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.indices(|f| f == fold)
    }

    /// Rows used for training when `fold` is held out, ascending.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        self.indices(|f| f != fold)
    }

    fn indices(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        self.fold_of
            .iter()
            .enumerate()
            .filter(|(_, &f)| keep(f))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Stratified k-fold assignment. Each class is shuffled with the seed and dealt
/// round-robin; the majority deal continues where the minority deal stopped so
/// overall fold sizes also differ by at most one.
pub fn stratified_kfold(ds: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k-fold needs k >= 2, got {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0; ds.n_instances()];
    let mut offset = 0;
    for label in [Label::Positive, Label::Negative] {
        let mut idx = ds.indices_of(label);
        if idx.len() < k {
            return Err(Error::ClassSmallerThanFolds {
                class: ds.class_names().name(label).to_string(),
                count: idx.len(),
                k,
            });
        }
        idx.shuffle(&mut rng);
        for (j, &i) in idx.iter().enumerate() {
            fold_of[i] = (offset + j) % k;
        }
        offset = (offset + idx.len()) % k;
    }
    Ok(FoldAssignment { k, fold_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imbalanced(n_neg: usize, n_pos: usize) -> Dataset {
        let labels = (0..n_neg + n_pos)
            .map(|i| if i < n_neg { Label::Negative } else { Label::Positive })
            .collect();
        Dataset::from_rows((0..n_neg + n_pos).map(|i| vec![i as f64]).collect(), labels).unwrap()
    }

    #[test]
    fn ten_instances_two_folds() {
        let ds = imbalanced(8, 2);
        let folds = stratified_kfold(&ds, 2, 7).unwrap();
        for f in 0..2 {
            let test = folds.test_indices(f);
            let pos = test.iter().filter(|&&i| ds.label(i).is_positive()).count();
            assert_eq!(pos, 1);
            assert_eq!(test.len() - pos, 4);
        }
    }

    #[test]
    fn minority_smaller_than_k_is_an_error() {
        let ds = imbalanced(8, 2);
        assert!(matches!(
            stratified_kfold(&ds, 3, 0),
            Err(Error::ClassSmallerThanFolds { count: 2, k: 3, .. })
        ));
        assert!(stratified_kfold(&ds, 1, 0).is_err());
    }

    #[test]
    fn same_seed_same_folds() {
        let ds = imbalanced(40, 9);
        assert_eq!(
            stratified_kfold(&ds, 5, 11).unwrap(),
            stratified_kfold(&ds, 5, 11).unwrap()
        );
        assert_ne!(
            stratified_kfold(&ds, 5, 11).unwrap(),
            stratified_kfold(&ds, 5, 12).unwrap()
        );
    }

    #[test]
    fn folds_partition_the_rows() {
        let ds = imbalanced(37, 11);
        let folds = stratified_kfold(&ds, 5, 3).unwrap();
        let mut all: Vec<usize> = (0..5).flat_map(|f| folds.test_indices(f)).collect();
        all.sort();
        assert_eq!(all, (0..48).collect::<Vec<_>>());
        let sizes: Vec<usize> = (0..5).map(|f| folds.test_indices(f).len()).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }
}
