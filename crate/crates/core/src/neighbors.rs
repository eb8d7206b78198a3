//! Euclidean distance and brute-force nearest-neighbour search.

use crate::dataset::{Dataset, Label, MinMaxScaler};
use crate::error::{Error, Result};

/// Euclidean distance between two equally long vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Min-max scaled copy of a dataset's rows for distance queries.
///
/// Neighbour lists are ordered by (distance, row index), so equidistant rows
/// resolve to the lower index.
#[derive(Debug, Clone)]
pub struct ScaledRows {
    rows: Vec<Vec<f64>>,
    scaler: MinMaxScaler,
}

impl ScaledRows {
    /// Scale with statistics of `ds` itself.
    pub fn fit(ds: &Dataset) -> Self {
        let scaler = MinMaxScaler::fit(ds);
        Self::with_scaler(ds, scaler)
    }

    pub fn with_scaler(ds: &Dataset, scaler: MinMaxScaler) -> Self {
        ScaledRows {
            rows: scaler.scale_all(ds),
            scaler,
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn scaler(&self) -> &MinMaxScaler {
        &self.scaler
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        squared_distance(&self.rows[i], &self.rows[j]).sqrt()
    }

    /// The `k` nearest of `candidates` to row `query` (scaled space), excluding
    /// `query` itself. Returns fewer than `k` when not enough candidates exist.
    pub fn k_nearest(&self, query: usize, candidates: &[usize], k: usize) -> Vec<usize> {
        let q = &self.rows[query];
        let mut d: Vec<(f64, usize)> = candidates
            .iter()
            .filter(|&&c| c != query)
            .map(|&c| (squared_distance(q, &self.rows[c]), c))
            .collect();
        take_nearest(&mut d, k)
    }

    /// The `k` nearest rows to an external, already scaled point.
    pub fn k_nearest_point(&self, point: &[f64], candidates: &[usize], k: usize) -> Vec<usize> {
        let mut d: Vec<(f64, usize)> = candidates
            .iter()
            .map(|&c| (squared_distance(point, &self.rows[c]), c))
            .collect();
        take_nearest(&mut d, k)
    }
}

fn take_nearest(d: &mut Vec<(f64, usize)>, k: usize) -> Vec<usize> {
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < d.len() {
        d.select_nth_unstable_by(k, cmp);
        d.truncate(k);
    }
    d.sort_by(cmp);
    d.iter().map(|&(_, i)| i).collect()
}

/// Number of rows with `label` in a neighbour list.
pub(crate) fn count_label(ds: &Dataset, neighbors: &[usize], label: Label) -> usize {
    neighbors.iter().filter(|&&i| ds.label(i) == label).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_four_five() {
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(euclidean(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert!(euclidean(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn nearest_breaks_ties_by_index() {
        let ds = Dataset::from_rows(
            vec![vec![0.0], vec![1.0], vec![-1.0], vec![2.0]],
            vec![
                Label::Positive,
                Label::Negative,
                Label::Negative,
                Label::Negative,
            ],
        )
        .unwrap();
        let s = ScaledRows::with_scaler(&ds, MinMaxScaler::identity(1));
        assert_eq!(s.k_nearest(0, &[0, 1, 2, 3], 2), vec![1, 2]);
        assert_eq!(s.k_nearest(0, &[3, 2, 1, 0], 1), vec![1]);
        assert_eq!(s.k_nearest(0, &[0, 3], 5), vec![3]);
    }

    proptest! {
        #[test]
        fn metric_axioms(
            a in proptest::collection::vec(-100.0f64..100.0, 4),
            b in proptest::collection::vec(-100.0f64..100.0, 4),
            c in proptest::collection::vec(-100.0f64..100.0, 4),
        ) {
            let ab = euclidean(&a, &b).unwrap();
            let ba = euclidean(&b, &a).unwrap();
            let bc = euclidean(&b, &c).unwrap();
            let ac = euclidean(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ab >= 0.0);
            prop_assert!(ac <= ab + bc + 1e-9);
        }
    }
}
