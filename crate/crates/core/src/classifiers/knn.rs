use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, MinMaxScaler};
use crate::error::{Error, Result};
use crate::neighbors::squared_distance;

/// Lazy k-NN: the min-max scaled training rows and their labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub n_neighbors: usize,
    pub scaler: MinMaxScaler,
    /// Scaled training rows, row-major.
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl KnnModel {
    pub fn fit(ds: &Dataset, n_neighbors: usize) -> Result<Self> {
        if n_neighbors == 0 {
            return Err(Error::InvalidParameter("n_neighbors must be >= 1".into()));
        }
        ds.require_both_classes()?;
        let scaler = MinMaxScaler::fit(ds);
        Ok(KnnModel {
            n_neighbors,
            rows: scaler.scale_all(ds),
            labels: ds.labels().to_vec(),
            scaler,
        })
    }

    /// Training rows nearest to `x` in (distance, row index) order. A query
    /// equal to a training row finds that row first: there is no self-exclusion
    /// at prediction time. `k` larger than the training set uses every row.
    pub fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let q = self.scaler.scale_row(x);
        let mut d: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (squared_distance(&q, r), i))
            .collect();
        let k = self.n_neighbors.min(d.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < d.len() {
            d.select_nth_unstable_by(k, cmp);
            d.truncate(k);
        }
        d.sort_by(cmp);
        d.into_iter().map(|(_, i)| i).collect()
    }

    /// Fraction of POSITIVE labels among the neighbours.
    pub fn score(&self, x: &[f64]) -> f64 {
        let nbrs = self.neighbors(x);
        let pos = nbrs.iter().filter(|&&i| self.labels[i].is_positive()).count();
        pos as f64 / nbrs.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line() -> Dataset {
        // 0..6 on a line, labels N N P N P P
        let labels = [0, 0, 1, 0, 1, 1]
            .iter()
            .map(|&b| if b == 1 { Label::Positive } else { Label::Negative })
            .collect();
        Dataset::from_rows((0..6).map(|i| vec![i as f64]).collect(), labels).unwrap()
    }

    #[test]
    fn score_counts_neighbour_labels() {
        let m = KnnModel::fit(&line(), 3).unwrap();
        // Neighbours of 2.9: rows 3, 2, 4 -> N P P.
        assert!((m.score(&[2.9]) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.neighbors(&[0.0]), vec![0, 1, 2]);
    }

    #[test]
    fn one_neighbour_memorises() {
        let ds = line();
        let m = KnnModel::fit(&ds, 1).unwrap();
        for i in 0..ds.n_instances() {
            assert_eq!(m.score(ds.row(i)) >= 0.5, ds.label(i).is_positive());
        }
    }

    #[test]
    fn oversized_k_gives_the_prior() {
        let m = KnnModel::fit(&line(), 1001).unwrap();
        assert_eq!(m.score(&[-50.0]), 0.5);
    }

    proptest! {
        #[test]
        fn positive_duplicate_never_lowers_score(
            pts in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0, proptest::bool::ANY), 6..30),
            pick in 0usize..1000,
            k in 1usize..8,
        ) {
            let mut rows: Vec<Vec<f64>> = pts.iter().map(|&(a, b, _)| vec![a, b]).collect();
            let mut labels: Vec<Label> = pts
                .iter()
                .map(|&(_, _, p)| if p { Label::Positive } else { Label::Negative })
                .collect();
            labels[0] = Label::Positive;
            labels[1] = Label::Negative;
            // A query inside the training range keeps the scaler unchanged.
            let x = rows[pick % rows.len()].clone();
            let before = KnnModel::fit(&Dataset::from_rows(rows.clone(), labels.clone()).unwrap(), k).unwrap();
            rows.push(x.clone());
            labels.push(Label::Positive);
            let after = KnnModel::fit(&Dataset::from_rows(rows, labels).unwrap(), k).unwrap();
            prop_assert!(after.score(&x) >= before.score(&x));
        }
    }
}
